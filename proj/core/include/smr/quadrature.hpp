// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <vector>

namespace smr::quad {

using Integrand = std::function<double(double)>;

struct Result {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

/// Default absolute error target shared by every deterministic probe.
inline constexpr double kDefaultAbsTol = 1e-10;

/// Adaptive Gauss-Kronrod on a finite interval [a, b].
Result integrate(const Integrand& f, double a, double b, double abs_tol = kDefaultAbsTol);

/// Integral over [a, b] with 0 < a < b, performed in the variable x = ln t.
Result integrate_log(const Integrand& f, double a, double b, double abs_tol = kDefaultAbsTol);

/// Integral over (0, b] using t = b e^{-y}; handles integrable t^{-c} behaviour at 0.
Result integrate_from_zero(const Integrand& f, double b, double abs_tol = kDefaultAbsTol);

/// Integral over [a, inf) using t = a e^{y}.
Result integrate_to_infinity(const Integrand& f, double a, double abs_tol = kDefaultAbsTol);

/// Integral over (0, inf) split at the given positive breakpoints; every piece is
/// log-substituted, so features at widely separated scales are resolved without a
/// global grid. Breakpoints need not be sorted or unique.
Result integrate_half_line(const Integrand& f, std::span<const double> breakpoints,
                           double abs_tol = kDefaultAbsTol);

/// Integral over the real line of a function that decays exponentially in |x|.
Result integrate_real_line(const Integrand& f, double abs_tol = kDefaultAbsTol);

/// Integral over (0, 1) for integrands with algebraic endpoint singularities.
/// The callback receives (x, 1 - x) with the complement computed without cancellation.
Result integrate_unit_singular(const std::function<double(double, double)>& f,
                               double abs_tol = kDefaultAbsTol);

/// Fixed composite Gauss-Legendre rule in log-time on [t_min, t_max]; used where the
/// same integral is evaluated many times (e.g. per time point per Monte-Carlo path).
class LogTimeRule {
public:
    LogTimeRule(double t_min, double t_max, double panels_per_unit_log = 2.0);

    [[nodiscard]] std::span<const double> nodes() const { return nodes_; }
    /// Weights for dt (the Jacobian t is already folded in).
    [[nodiscard]] std::span<const double> weights() const { return weights_; }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

}  // namespace smr::quad
