// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "smr/error.hpp"
#include "smr/maxreg.hpp"
#include "smr/quadrature.hpp"

namespace smr {

namespace {

// (1/Gamma(theta)) int_a^b u^{theta-1} e^{-lambda u} du.
double fractional_weight(double a, double b, double lambda, double theta) {
    if (lambda == 0.0) {
        return (std::pow(b, theta) - std::pow(a, theta)) / std::tgamma(theta + 1.0);
    }
    const double xa = lambda * a;
    const double xb = lambda * b;
    const double diff = xa > 1.0
        ? boost::math::gamma_q(theta, xa) - boost::math::gamma_q(theta, xb)
        : boost::math::gamma_p(theta, xb) - boost::math::gamma_p(theta, xa);
    return std::pow(lambda, -theta) * diff;
}

}  // namespace

FieldPath fractional_integral(const SpectralModel& model, double theta, const FieldPath& f,
                              const TimeGrid& grid) {
    require(theta > 0.0 && theta < 1.0, "fractional_integral: theta must lie in (0, 1)");
    require(f.times() == grid.steps() + 1 && f.modes() == model.size(),
            "fractional_integral: path shape mismatch");
    const std::size_t n_steps = grid.steps();
    const double dt = grid.dt();
    const auto lambdas = model.eigenvalues();
    FieldPath out(n_steps + 1, model.size());
    std::vector<double> w(n_steps + 1, 0.0);
    for (std::size_t k = 0; k < model.size(); ++k) {
        for (std::size_t j = 1; j <= n_steps; ++j) {
            w[j] = fractional_weight(static_cast<double>(j - 1) * dt, static_cast<double>(j) * dt,
                                     lambdas[k], theta);
        }
        // Cell [t_i, t_{i+1}] carries the average of its endpoint values.
        for (std::size_t n = 1; n <= n_steps; ++n) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += w[n - i] * 0.5 * (f.at(i, k) + f.at(i + 1, k));
            }
            out.at(n, k) = s;
        }
    }
    return out;
}

BetaCheck beta_identity_check(double theta, double r, double t) {
    require(theta > 0.0 && theta < 1.0, "beta_identity_check: theta must lie in (0, 1)");
    require(r >= 0.0 && t > r, "beta_identity_check: need 0 <= r < t");
    const double len = t - r;
    // s = r + len x, so t - s = len (1 - x) and s - r = len x.
    const auto res = quad::integrate_unit_singular(
        [&](double x, double cx) {
            return std::pow(len * cx, theta - 1.0) * std::pow(len * x, -theta) * len;
        },
        1e-13);
    if (!res.converged) {
        throw NumericalError("beta_identity_check: quadrature did not converge");
    }
    BetaCheck out;
    out.raw = res.value;
    out.normalized = res.value / (std::tgamma(theta) * std::tgamma(1.0 - theta));
    return out;
}

double factorization_check(const SpectralModel& model, const StepProcess& g,
                           const NoisePath& noise, double theta) {
    require(theta >= 0.0 && theta < 0.5, "factorization_check: theta must lie in [0, 1/2)");
    if (theta == 0.0) {
        return 0.0;
    }
    const auto& grid = noise.grid();
    const auto v = stoch_convolution(model, g, noise, 0.5 - theta, theta);
    const auto lhs = fractional_integral(model, theta, v, grid);
    const auto rhs = stoch_convolution(model, g, noise, 0.5 - theta, 0.0);
    double err = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < rhs.data().size(); ++i) {
        const double d = lhs.data()[i] - rhs.data()[i];
        err += d * d;
        ref += rhs.data()[i] * rhs.data()[i];
    }
    require(ref > 0.0, "factorization_check: the direct convolution vanishes");
    return std::sqrt(err / ref);
}

SecondMoments factorization_second_moments(double lambda, double theta, double t) {
    require(lambda > 0.0, "factorization_second_moments: lambda must be positive");
    require(theta > 0.0 && theta < 0.5, "factorization_second_moments: theta must lie in (0, 1/2)");
    require(t > 0.0, "factorization_second_moments: t must be positive");
    const double power = std::pow(lambda, 1.0 - 2.0 * theta);
    SecondMoments out;
    out.direct = power * -std::expm1(-2.0 * lambda * t) / (2.0 * lambda);
    // Kernel of the factorized side: lambda^{1/2-theta} e^{-lambda (t-s)} times the
    // normalized beta integral over r in (s, t).
    const auto res = quad::integrate(
        [&](double s) {
            const double b = beta_identity_check(theta, s, t).normalized;
            const double k = b * std::exp(-lambda * (t - s));
            return power * k * k;
        },
        0.0, t, 1e-12);
    if (!res.converged) {
        throw NumericalError("factorization_second_moments: quadrature did not converge");
    }
    out.factorized = res.value;
    return out;
}

}  // namespace smr
