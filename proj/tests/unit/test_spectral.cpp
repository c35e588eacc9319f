// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "smr/error.hpp"
#include "smr/rng.hpp"
#include "smr/spectral.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("single-mode model is invertible", "[model]") {
    const auto m = smr::make_model({1.0}, 2.0);
    CHECK(m.size() == 1);
    CHECK(m.invertible());
}

TEST_CASE("model validation", "[model]") {
    CHECK_THROWS_AS(smr::make_model({0.0}, 2.0), smr::ValidationError);
    CHECK_THROWS_AS(smr::make_model({2.0, 1.0}, 2.0), smr::ValidationError);
    CHECK_THROWS_AS(smr::make_model({1.0}, 1.5), smr::ValidationError);
}

TEST_CASE("geometric ladder", "[model]") {
    const auto m = smr::make_geometric_ladder(8, 4.0);
    REQUIRE(m.size() == 8);
    for (int k = 1; k <= 8; ++k) {
        CHECK(m.eigenvalues()[k - 1] == std::pow(4.0, k));
    }
    CHECK(m.space_exponent() == 4.0);
}

TEST_CASE("torus eigenvalues", "[model]") {
    const auto m = smr::make_model(smr::FourierTorus{1, 16, 1.0}, 2.0);
    REQUIRE(m.size() == 16);
    std::vector<double> expected;
    for (int f = 0; f <= 8; ++f) {
        expected.push_back(0.5 * f * f + 1.0);
        if (f != 0 && f != 8) {
            expected.push_back(0.5 * f * f + 1.0);
        }
    }
    std::sort(expected.begin(), expected.end());
    for (std::size_t k = 0; k < m.size(); ++k) {
        CHECK_THAT(m.eigenvalues()[k], WithinAbs(expected[k], 1e-14));
    }
    CHECK(m.invertible());
    const auto w0 = smr::make_model(smr::FourierTorus{1, 16, 0.0}, 2.0);
    CHECK(w0.size() == 15);
    CHECK_FALSE(w0.invertible());
}

TEST_CASE("dirichlet eigenvalues", "[model]") {
    const auto m = smr::make_model(smr::DirichletSine{12}, 2.0);
    for (std::size_t k = 0; k < m.size(); ++k) {
        const double j = static_cast<double>(k + 1);
        CHECK_THAT(m.eigenvalues()[k], WithinAbs(0.5 * j * j, 1e-14));
    }
}

TEST_CASE("physical transforms are q = 2 isometries", "[model]") {
    smr::CounterRng rng(3);
    for (const smr::Transform& t :
         {smr::Transform(smr::FourierTorus{1, 16, 1.0}), smr::Transform(smr::FourierTorus{2, 8, 1.0}),
          smr::Transform(smr::DirichletSine{16})}) {
        const auto m = smr::make_model(t, 2.0);
        std::vector<double> x(m.size());
        double l2 = 0.0;
        for (double& v : x) {
            v = rng.normal();
            l2 += v * v;
        }
        CHECK_THAT(smr::space_norm(m, x), WithinRel(std::sqrt(l2), 1e-12));
        const auto back = m.from_physical(m.to_physical(x));
        for (std::size_t k = 0; k < x.size(); ++k) {
            CHECK_THAT(back[k], WithinAbs(x[k], 1e-12));
        }
    }
}

TEST_CASE("semigroup", "[operators]") {
    const auto m = smr::make_model({1.0, 3.0}, 2.0);
    const smr::SpatialField x{{1.0, -2.0}};
    const auto same = smr::apply_semigroup(m, 0.0, x);
    CHECK(same.coeffs == x.coeffs);
    const auto one = smr::make_model({1.0}, 2.0);
    CHECK_THAT(smr::apply_semigroup(one, std::log(2.0), smr::SpatialField{{1.0}})[0],
               WithinAbs(0.5, 1e-15));
    const auto ab = smr::apply_semigroup(m, 0.3, smr::apply_semigroup(m, 0.7, x));
    const auto c = smr::apply_semigroup(m, 1.0, x);
    for (std::size_t k = 0; k < 2; ++k) {
        CHECK_THAT(ab[k], WithinRel(c[k], 1e-12));
    }
}

TEST_CASE("fractional powers", "[operators]") {
    const auto m = smr::make_model({4.0}, 2.0);
    CHECK_THAT(smr::apply_fractional_power(m, 0.5, smr::SpatialField{{3.0}})[0],
               WithinAbs(6.0, 1e-14));
    const auto m2 = smr::make_model({0.5, 2.0, 7.0}, 2.0);
    const smr::SpatialField x{{1.0, 2.0, 3.0}};
    const auto id = smr::apply_fractional_power(m2, 0.0, x);
    CHECK(id.coeffs == x.coeffs);
    const auto half2 =
        smr::apply_fractional_power(m2, 0.5, smr::apply_fractional_power(m2, 0.5, x));
    const auto full = smr::apply_fractional_power(m2, 1.0, x);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK_THAT(half2[k], WithinRel(full[k], 1e-12));
    }
}

TEST_CASE("mixed norms", "[norms]") {
    const smr::TimeGrid grid(2.0, 20);
    smr::FieldPath path(21, 3);
    for (auto& v : path.data()) {
        v = 1.5;
    }
    const smr::MixedNormSpec spec{3.0, 4.0};
    CHECK_THAT(smr::mixed_norm(path, grid, spec),
               WithinRel(1.5 * std::pow(3.0, 0.25) * std::pow(2.0, 1.0 / 3.0), 1e-12));

    const smr::TimeGrid g1(1.0, 10);
    smr::FieldPath spike(11, 1);
    spike.at(4, 0) = 1.0;
    CHECK_THAT(smr::mixed_norm(spike, g1, smr::MixedNormSpec{2.0, 2.0}),
               WithinRel(std::sqrt(0.1), 1e-12));
}

TEST_CASE("Minkowski ordering of mixed norms", "[norms]") {
    const smr::TimeGrid grid(1.0, 16);
    smr::CounterRng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        smr::FieldPath path(17, 5);
        for (auto& v : path.data()) {
            v = rng.normal();
        }
        // L^q(l^2 in time) versus L^2(time; l^q)
        const double q = 4.0;
        double outer = 0.0;
        for (std::size_t k = 0; k < 5; ++k) {
            double inner = 0.0;
            for (std::size_t n = 0; n < 16; ++n) {
                inner += grid.dt() * path.at(n, k) * path.at(n, k);
            }
            outer += std::pow(inner, q / 2.0);
        }
        const double lhs = std::pow(outer, 1.0 / q);
        CHECK(lhs <= smr::mixed_norm(path, grid, smr::MixedNormSpec{2.0, q}) * (1 + 1e-12));
    }
}

TEST_CASE("interpolation norm", "[norms]") {
    const auto m = smr::make_model({1.0}, 2.0);
    const double expected = 1.0 + std::pow(2.0 / 64.0, 0.25);
    CHECK_THAT(smr::interp_norm(m, 0.25, 4.0, smr::SpatialField{{1.0}}),
               WithinRel(expected, 1e-9));
    CHECK_THAT(expected, WithinAbs(1.420448, 1e-6));
    CHECK(smr::interp_norm(m, 0.25, 4.0, smr::SpatialField{{0.0}}) == 0.0);
    const auto m3 = smr::make_model({0.5, 4.0, 30.0}, 3.0);
    const smr::SpatialField x{{0.3, -1.0, 2.0}};
    const smr::SpatialField cx{{-0.75, 2.5, -5.0}};
    CHECK_THAT(smr::interp_norm(m3, 0.4, 3.0, cx),
               WithinRel(2.5 * smr::interp_norm(m3, 0.4, 3.0, x), 1e-10));
    const smr::InterpNormEvaluator eval(m3, 0.4, 3.0);
    CHECK_THAT(eval(x.coeffs), WithinRel(smr::interp_norm(m3, 0.4, 3.0, x), 1e-6));
    CHECK_THROWS_AS(smr::interp_norm(m3, 1.0, 3.0, x), smr::ValidationError);
}

TEST_CASE("gradient norms on the torus", "[norms]") {
    const auto m = smr::make_model(smr::FourierTorus{1, 16, 1.0}, 2.0);
    std::vector<double> constant(m.size(), 0.0);
    constant[0] = 1.0;
    CHECK_THAT(smr::gradient_norm(m, smr::SpatialField{constant}, 2.0), WithinAbs(0.0, 1e-12));
    for (std::size_t k = 1; k < m.size(); ++k) {
        std::vector<double> e(m.size(), 0.0);
        e[k] = 1.0;
        const int freq = std::abs(m.mode_indices()[k][0]);
        CHECK_THAT(smr::gradient_norm(m, smr::SpatialField{e}, 2.0),
                   WithinRel(static_cast<double>(freq), 1e-12));
    }
    const auto w0 = smr::make_model(smr::FourierTorus{2, 8, 0.0}, 2.0);
    smr::CounterRng rng(4);
    std::vector<double> x(w0.size());
    for (double& v : x) {
        v = rng.normal();
    }
    const auto half = smr::apply_fractional_power(w0, 0.5, smr::SpatialField{x});
    CHECK_THAT(smr::gradient_norm(w0, smr::SpatialField{x}, 2.0),
               WithinRel(std::sqrt(2.0) * smr::space_norm(w0, half.coeffs), 1e-12));
}
