// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <unordered_set>
#include <vector>

#include "smr/error.hpp"
#include "smr/parallel.hpp"
#include "smr/quadrature.hpp"
#include "smr/rng.hpp"
#include "smr/statistics.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("finite-interval quadrature", "[quad]") {
    const auto r = smr::quad::integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r.converged);
    CHECK_THAT(r.value, WithinAbs(1.0 / 3.0, 1e-14));
}

TEST_CASE("half-line quadrature resolves separated scales", "[quad]") {
    const std::vector<double> bps{1e-6, 1.0};
    const auto r = smr::quad::integrate_half_line(
        [](double t) { return std::exp(-t) + 1e6 * std::exp(-1e6 * t); }, bps, 1e-12);
    CHECK_THAT(r.value, WithinRel(2.0, 1e-11));
}

TEST_CASE("singular unit-interval quadrature", "[quad]") {
    const auto r = smr::quad::integrate_unit_singular(
        [](double x, double cx) { return std::pow(x, -0.5) * std::pow(cx, -0.5); });
    CHECK_THAT(r.value, WithinRel(std::numbers::pi, 1e-11));
}

TEST_CASE("log-time rule integrates dt/t", "[quad]") {
    const smr::quad::LogTimeRule rule(1e-3, 1e3, 3.0);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes().size(); ++i) {
        s += rule.weights()[i] / rule.nodes()[i];
    }
    CHECK_THAT(s, WithinRel(std::log(1e6), 1e-12));
    CHECK_THROWS_AS(smr::quad::LogTimeRule(1.0, 0.5), smr::ValidationError);
}

TEST_CASE("derive_seed has no collisions over 1e6 indices", "[rng]") {
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(1 << 21);
    for (std::uint64_t i = 0; i < 1000000; ++i) {
        seen.insert(smr::derive_seed(42, i));
    }
    CHECK(seen.size() == 1000000);
}

TEST_CASE("derive_seed is pure and master-dependent", "[rng]") {
    CHECK(smr::derive_seed(7, 3) == smr::derive_seed(7, 3));
    CHECK(smr::derive_seed(7, 0) != smr::derive_seed(8, 0));
}

TEST_CASE("counter rng normals have unit variance", "[rng]") {
    smr::CounterRng rng(11);
    const int n = 200000;
    double m = 0.0;
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        m += z;
        v += z * z;
    }
    m /= n;
    v = v / n - m * m;
    CHECK(std::abs(m) < 4.0 / std::sqrt(n));
    CHECK(std::abs(v - 1.0) < 4.0 * std::sqrt(2.0 / n));
}

TEST_CASE("counter rng replays its stream", "[rng]") {
    smr::CounterRng a(5);
    smr::CounterRng b(5);
    for (int i = 0; i < 100; ++i) {
        CHECK(a() == b());
    }
}

TEST_CASE("parallel_for fills every slot independent of threads", "[parallel]") {
    for (unsigned threads : {1u, 3u, 8u}) {
        std::vector<double> out(1000, 0.0);
        smr::parallel_for(out.size(), threads,
                          [&](std::size_t i) { out[i] = static_cast<double>(i * i); });
        for (std::size_t i = 0; i < out.size(); ++i) {
            REQUIRE(out[i] == static_cast<double>(i * i));
        }
    }
}

TEST_CASE("mean estimate and moment ratio", "[statistics]") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const auto m = smr::mean_estimate(x);
    CHECK_THAT(m.mean, WithinAbs(2.5, 1e-15));
    CHECK_THAT(m.stderr_mean, WithinRel(std::sqrt(5.0 / 3.0 / 4.0), 1e-12));
    const std::vector<double> y{2.0, 4.0, 6.0, 8.0};
    const auto r = smr::moment_ratio(y, x, 2.0);
    CHECK_THAT(r.mean, WithinRel(std::sqrt(2.0), 1e-14));
    CHECK_THAT(r.stderr_mean, WithinAbs(0.0, 1e-12));
}
