// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "smr/convops.hpp"
#include "smr/error.hpp"
#include "smr/rng.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("J window", "[J]") {
    const smr::TimeGrid grid(1.0, 100);
    const auto g = smr::constant_process(100, 1, 1, 1.0);
    const auto noise = smr::sample_noise(grid, 1, 6);
    CHECK_THROWS_AS(smr::apply_J(0.001, g, noise), smr::ValidationError);

    const auto zero = smr::apply_J(0.2, smr::StepProcess(100, 1, 1), noise);
    for (double v : zero.data()) {
        CHECK(v == 0.0);
    }
    const auto full = smr::apply_J(1.0, g, noise);
    CHECK_THAT(full.at(100, 0), WithinAbs(smr::ito_integral(g, noise, 1.0).coeffs[0], 1e-12));
}

TEST_CASE("J window variance", "[J]") {
    const smr::TimeGrid grid(1.0, 100);
    const auto g = smr::constant_process(100, 1, 1, 1.0);
    std::vector<double> sq(10000);
    std::vector<double> early(10000);
    for (std::size_t p = 0; p < sq.size(); ++p) {
        const auto noise = smr::sample_noise(grid, 1, smr::derive_seed(31, p));
        const auto j = smr::apply_J(0.5, g, noise);
        sq[p] = j.at(80, 0) * j.at(80, 0);
        early[p] = j.at(20, 0) * j.at(20, 0);
    }
    const auto m = smr::mean_estimate(sq);
    CHECK(std::abs(m.mean - 1.0) <= 3.0 * m.stderr_mean);
    const auto e = smr::mean_estimate(early);
    CHECK(std::abs(e.mean - 0.4) <= 3.0 * e.stderr_mean);
}

TEST_CASE("I operator", "[I]") {
    const auto model = smr::make_model({1.0}, 2.0);
    const smr::TimeGrid grid(1.0, 200);
    const auto g = smr::constant_process(200, 1, 1, 1.0);
    const auto noise = smr::sample_noise(grid, 1, 12);
    for (double v : smr::apply_I(smr::zero_kernel(), g, noise).data()) {
        CHECK(v == 0.0);
    }
    const auto i = smr::apply_I(smr::exponential_kernel(1.0, 1.0), g, noise);
    const auto u = smr::stoch_convolution(model, g, noise, 0.0, 0.0);
    for (std::size_t n = 0; n <= 200; ++n) {
        CHECK_THAT(i.at(n, 0), WithinAbs(u.at(n, 0), 1e-12));
    }
}

TEST_CASE("reduction mismatch shrinks with the grid", "[I]") {
    const auto kernel = smr::exponential_kernel(1.0, 1.0);
    std::vector<double> err;
    for (std::size_t steps : {125, 250, 500}) {
        const smr::TimeGrid grid(1.0, steps);
        const auto g = smr::constant_process(steps, 1, 1, 1.0);
        double acc = 0.0;
        for (std::uint64_t p = 0; p < 20; ++p) {
            const auto fine = smr::sample_noise(smr::TimeGrid(1.0, 500), 1, smr::derive_seed(5, p));
            const auto noise = smr::coarsen(fine, 500 / steps);
            acc += smr::reduction_mismatch(kernel, g, noise);
        }
        err.push_back(acc / 20.0);
    }
    CHECK(err[1] < err[0]);
    CHECK(err[2] < err[1]);
}

TEST_CASE("block and Rademacher norms", "[rbound]") {
    smr::NormBlock x(1, 2, 2, 0.5);
    x.at(0, 0, 0) = 3.0;
    x.at(0, 0, 1) = 4.0;
    CHECK_THAT(smr::block_norm(x, 2.0, 2.0), WithinRel(5.0 * std::sqrt(0.5), 1e-14));
    const std::vector<smr::NormBlock> one{x};
    CHECK_THAT(smr::rademacher_norm(one, 2.0, 2.0, {}), WithinRel(smr::block_norm(x, 2.0, 2.0), 1e-14));
    // Orthogonality at p = q = 2: the sign average equals the square-sum norm.
    smr::NormBlock y(1, 2, 2, 0.5);
    y.at(0, 1, 0) = 1.0;
    y.at(0, 0, 0) = -2.0;
    const std::vector<smr::NormBlock> two{x, y};
    CHECK_THAT(smr::rademacher_norm(two, 2.0, 2.0, {}),
               WithinRel(smr::square_sum_norm(two, 2.0, 2.0), 1e-12));
    CHECK_THAT(smr::khintchine_upper(2.0), WithinAbs(1.0, 1e-14));
}

TEST_CASE("R-bound families", "[rbound]") {
    smr::RboundEnsembleSpec ens;
    ens.paths = 8;
    smr::OperatorFamilySpec id;
    id.kind = smr::FamilyKind::kIdentity;
    id.parameters = {1.0};
    CHECK_THAT(smr::rbound_estimate(id, ens, 2).r_hat, WithinAbs(1.0, 1e-12));

    smr::OperatorFamilySpec scalar;
    scalar.kind = smr::FamilyKind::kScalar;
    scalar.parameters = {0.3, -1.7, 0.9, 1.2};
    const auto s = smr::rbound_estimate(scalar, ens, 3);
    CHECK(s.exact_signs);
    CHECK(s.r_hat <= 1.7 * (1.0 + 1e-12));
    CHECK(s.r_hat >= 0.9 * 1.7);

    smr::OperatorFamilySpec j;
    j.kind = smr::FamilyKind::kJ;
    j.parameters = {1.0 / 32, 1.0 / 8};
    const auto jr = smr::rbound_estimate(j, ens, 2);
    CHECK(std::isfinite(jr.r_hat));
    CHECK(jr.r_hat > 0.0);
}

TEST_CASE("one-sided maximal function", "[maximal]") {
    const std::vector<double> ind{1, 1, 1, 1, 0, 0, 0, 0};
    const auto m = smr::one_sided_maximal(ind);
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(m[i] == 1.0);
    }
    for (std::size_t i = 4; i < 8; ++i) {
        CHECK(m[i] == 0.0);
    }
    const std::vector<double> c(6, 2.5);
    for (double v : smr::one_sided_maximal(c)) {
        CHECK_THAT(v, WithinAbs(2.5, 1e-15));
    }
    const std::vector<double> dec{5, 4, 4, 2, 1, 0.5};
    const auto md = smr::one_sided_maximal(dec);
    for (std::size_t i = 0; i < dec.size(); ++i) {
        CHECK_THAT(md[i], WithinAbs(dec[i], 1e-15));
    }
}

TEST_CASE("Fefferman-Stein ratios", "[maximal]") {
    smr::VectorStepFunction f{6, 1, {5, 4, 3, 2, 1, 0}};
    const std::vector<smr::VectorStepFunction> single{f};
    CHECK_THAT(smr::fefferman_stein_check(1.5, 2.0, single, 0.1).ratio, WithinAbs(1.0, 1e-12));

    const auto e8 = smr::random_step_functions(200, 32, 8, 1);
    const auto e64 = smr::random_step_functions(200, 32, 64, 1);
    const auto r8 = smr::fefferman_stein_check(1.5, 2.0, e8, 1.0 / 32);
    const auto r64 = smr::fefferman_stein_check(1.5, 2.0, e64, 1.0 / 32);
    CHECK(std::isfinite(r8.ratio));
    CHECK(r8.ratio >= 1.0);
    CHECK(r64.ratio <= 2.0 * r8.ratio);
}

TEST_CASE("forward and backward averages", "[duality]") {
    smr::CounterRng rng(9);
    std::vector<double> psi(40);
    std::vector<double> phi(40);
    for (std::size_t i = 0; i < 40; ++i) {
        psi[i] = rng.normal();
        phi[i] = rng.normal();
    }
    const auto d = smr::duality_pair_check(0.125, psi, phi, 1.0 / 40);
    CHECK_THAT(d.lhs, WithinAbs(d.rhs, 1e-12));
    CHECK_THROWS_AS(smr::duality_pair_check(0.13, psi, phi, 1.0 / 40), smr::ValidationError);

    const std::vector<double> c(20, 3.0);
    const auto t = smr::forward_average(c, 4);
    for (std::size_t i = 0; i + 4 <= 20; ++i) {
        CHECK_THAT(t[i], WithinAbs(3.0, 1e-15));
    }
}

TEST_CASE("dual sum bound", "[duality]") {
    const auto fs = smr::random_step_functions(4, 32, 3, 2);
    const std::vector<double> deltas{1.0 / 32, 2.0 / 32, 4.0 / 32, 8.0 / 32};
    const auto b = smr::dual_sum_bound(fs, deltas, 1.5, 2.0, 1.0 / 32);
    const std::vector<smr::VectorStepFunction> all(fs.begin(), fs.end());
    const double c = smr::fefferman_stein_check(3.0, 2.0, all, 1.0 / 32).ratio;
    CHECK(b.lhs > 0.0);
    CHECK(b.lhs <= 4.0 * b.rhs);
    CHECK(std::isfinite(c));
}

TEST_CASE("diagonal multipliers", "[multiplier]") {
    const smr::TimeGrid grid(1.0, 10);
    const auto g = smr::random_process(10, 3, 1, 4);
    smr::DiagonalMultiplier id{10, 3, std::vector<double>(30, 1.0)};
    const auto eq = smr::multiplier_bound_check(id, g, grid, 4.0, 1.0);
    CHECK_THAT(eq.lhs, WithinRel(eq.g_norm, 1e-14));
    smr::DiagonalMultiplier half{10, 3, {}};
    smr::CounterRng rng(3);
    for (std::size_t i = 0; i < 30; ++i) {
        half.values.push_back(std::tanh(rng.normal()));
    }
    const auto c = smr::multiplier_bound_check(half, g, grid, 4.0, 1.0);
    CHECK(c.lhs <= c.g_norm);
    const double r = smr::multiplier_rbound(half, 4.0, 8, 5);
    CHECK(std::isfinite(r));
    CHECK(r > 0.0);
}
