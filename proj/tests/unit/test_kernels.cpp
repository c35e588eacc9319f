// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "smr/error.hpp"
#include "smr/kernels.hpp"
#include "smr/quadrature.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("sector kernel values", "[kernel]") {
    CHECK_THAT(smr::kernel_alpha(1.0, 1.0, kPi / 4), WithinAbs(0.5, 1e-15));
    CHECK_THAT(smr::kernel_alpha(1.0, 2.0, kPi / 4), WithinAbs(4.0 / 17.0, 1e-14));
    CHECK_THROWS_AS(smr::kernel_alpha(0.0, 1.0, kPi / 4), smr::ValidationError);
    CHECK_THROWS_AS(smr::kernel_alpha(1.0, -1.0, kPi / 4), smr::ValidationError);
}

TEST_CASE("sector kernel mass equals alpha", "[kernel]") {
    const std::vector<double> bps{0.5, 2.0, 8.0};
    const auto r = smr::quad::integrate_half_line(
        [](double u) { return smr::kernel_alpha(u, 2.0, kPi / 3); }, bps, 1e-12);
    CHECK_THAT(r.value, WithinAbs(1.0471976, 1e-7));
    CHECK_THAT(r.value, WithinRel(kPi / 3, 1e-10));
}

TEST_CASE("theta kernel values and scaling", "[kernel]") {
    CHECK_THAT(smr::kernel_alpha_theta(1.0, 1.0, kPi / 4, 0.0), WithinAbs(0.5, 1e-15));
    // Independent evaluation: 2 * 4^{1/4} / (8 cosh(2 ln 4)).
    CHECK_THAT(smr::kernel_alpha_theta(4.0, 1.0, kPi / 4, 0.25), WithinAbs(0.0440222121, 1e-10));
    CHECK_THAT(smr::kernel_alpha_theta(4.0, 4.0, kPi / 4, 0.0), WithinAbs(0.25, 1e-15));
    for (double c : {0.3, 4.0, 17.0}) {
        CHECK_THAT(smr::kernel_alpha_theta(c * 1.3, c * 0.7, kPi / 3, 0.2),
                   WithinRel(smr::kernel_alpha_theta(1.3, 0.7, kPi / 3, 0.2) / std::sqrt(c),
                             1e-13));
    }
}

TEST_CASE("theta kernel derivative matches finite differences", "[kernel]") {
    const double u = 1.7;
    const double t = 0.9;
    const double h = 1e-6;
    const double fd = (smr::kernel_alpha_theta(u, t + h, kPi / 4, 0.3) -
                       smr::kernel_alpha_theta(u, t - h, kPi / 4, 0.3)) /
                      (2 * h);
    CHECK_THAT(smr::kernel_alpha_theta_dt(u, t, kPi / 4, 0.3), WithinRel(fd, 1e-8));
}

TEST_CASE("K-class seminorms", "[kclass]") {
    const auto one = smr::kclass_seminorm(smr::exponential_kernel(1.0, 1.0));
    CHECK_THAT(one.value, WithinAbs(0.8862269255, 1e-9));
    CHECK(one.is_member);
    const auto two = smr::kclass_seminorm(smr::exponential_kernel(2.0, 1.0));
    CHECK_THAT(two.value, WithinAbs(1.7724538509, 1e-9));
    CHECK_FALSE(two.is_member);
    const auto zero = smr::kclass_seminorm(smr::zero_kernel());
    CHECK(zero.value == 0.0);
    CHECK(zero.is_member);
}

TEST_CASE("time seminorm of the theta kernel", "[kclass]") {
    const double v = smr::kalpha_theta_time_seminorm(kPi / 4, 0.0);
    CHECK(v > 0.0);
    CHECK_THAT(v, WithinRel(1.122742015324, 1e-9));
    CHECK_THAT(smr::kalpha_theta_time_seminorm_at(kPi / 4, 0.0, 1.0), WithinAbs(v, 1e-8));
    CHECK_THAT(smr::kalpha_theta_time_seminorm_at(kPi / 4, 0.0, 1.0),
               WithinAbs(smr::kalpha_theta_time_seminorm_at(kPi / 4, 0.0, 7.0), 1e-9));
}

TEST_CASE("time seminorm sweep stays bounded", "[kclass]") {
    // Independent mpmath evaluation.
    const double a1[] = {1.122742015324, 1.091197322776, 1.066011126742, 1.046306225757,
                         1.031415900337};
    const double t1[] = {0.0, 0.125, 0.25, 0.375, 0.5};
    for (int i = 0; i < 5; ++i) {
        CHECK_THAT(smr::kalpha_theta_time_seminorm(kPi / 4, t1[i]), WithinAbs(a1[i], 1e-8));
    }
}

TEST_CASE("Poisson reconstruction", "[poisson]") {
    const auto one = [](std::complex<double>) { return std::complex<double>(1.0, 0.0); };
    const auto ez = [](std::complex<double> z) { return std::exp(-z); };
    const auto rz = [](std::complex<double> z) { return 1.0 / (1.0 + z); };
    for (double s : {0.5, 1.0, 3.0}) {
        CHECK_THAT(smr::poisson_reconstruct(one, s, kPi / 3), WithinAbs(1.0, 1e-9));
    }
    CHECK_THAT(smr::poisson_reconstruct(ez, 1.0, kPi / 4), WithinAbs(std::exp(-1.0), 1e-8));
    CHECK_THAT(smr::poisson_reconstruct(rz, 3.0, kPi / 4), WithinAbs(0.25, 1e-8));
    CHECK_THAT(smr::poisson_reconstruct(one, 1.0, kPi / 4, smr::PoissonSign::kAlternating),
               WithinAbs(0.0, 1e-12));
}

TEST_CASE("scalar V", "[spoisson]") {
    CHECK(std::abs(smr::scalar_V(1e-12, 1.0, 0.0, kPi / 4)) < 1e-5);
    // Sign change of cos(u lambda sin alpha) at u lambda = pi / (2 sin alpha).
    const double root = kPi / (2.0 * std::sin(kPi / 4));
    CHECK_THAT(root, WithinAbs(2.2214415, 1e-7));
    CHECK(smr::scalar_V(root * 0.99, 1.0, 0.0, kPi / 4) > 0.0);
    CHECK(smr::scalar_V(root * 1.01, 1.0, 0.0, kPi / 4) < 0.0);
}

TEST_CASE("scalar Poisson identity", "[spoisson]") {
    const auto base = smr::spoisson_identity_check(1.0, 1.0, 0.0, kPi / 4);
    CHECK_THAT(base.lhs, WithinAbs(std::exp(-1.0), 1e-15));
    CHECK(base.abs_error <= 1e-8);
    const auto q = smr::spoisson_identity_check(2.0, 1.0, 0.25, kPi / 4);
    CHECK_THAT(q.lhs, WithinAbs(0.1313362886, 1e-10));
    CHECK(q.abs_error <= 1e-8);
    for (double c : {0.25, 4.0}) {
        const auto scaled = smr::spoisson_identity_check(2.0 * c, 1.0 / c, 0.25, kPi / 4);
        CHECK_THAT(scaled.abs_error, WithinAbs(q.abs_error, 1e-10));
    }
}

TEST_CASE("square-function constants", "[hinf]") {
    const std::vector<double> dil{0.1, 1.0, 10.0};
    const auto half = smr::hinf_square_constant(
        [](double t) { return std::complex<double>(std::sqrt(t) * std::exp(-t), 0.0); }, dil);
    CHECK_THAT(half.c_phi, WithinAbs(std::sqrt(0.5), 1e-10));
    CHECK(half.max_invariance_error <= 1e-10);
    const auto lin = smr::hinf_square_constant(
        [](double t) { return std::complex<double>(t * std::exp(-t), 0.0); }, dil);
    CHECK_THAT(lin.c_phi * lin.c_phi, WithinAbs(0.25, 1e-10));
}

TEST_CASE("square-function norm on a diagonal model", "[hinf]") {
    const auto m = smr::make_model({0.5, 3.0, 40.0}, 2.0);
    const smr::SpatialField x{{1.0, -2.0, 0.5}};
    const double n = smr::hinf_square_norm(
        m, [](double t) { return std::complex<double>(std::sqrt(t) * std::exp(-t), 0.0); }, x);
    CHECK_THAT(n, WithinRel(std::sqrt(0.5) * std::sqrt(1.0 + 4.0 + 0.25), 1e-9));
}
