// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "smr/spectral.hpp"

namespace smr {

/// Scalar kernel k on (0, inf) with its derivative.
struct KernelFn {
    std::function<double(double)> value;
    std::function<double(double)> derivative;
    bool decays = true;  // lim_{t -> inf} k(t) = 0
    std::string name;

    double operator()(double t) const { return value(t); }
};

/// c * exp(-rate * t).
KernelFn exponential_kernel(double c = 1.0, double rate = 1.0);
KernelFn zero_kernel();

/// Largest relative mismatch between k' and a central difference of k at the given
/// points (absolute when |k'| is tiny).
double derivative_mismatch(const KernelFn& kernel, std::span<const double> points);

/// (t/u)^{pi/2a} / ((t/u)^{pi/a} + 1) / u, evaluated as 1 / (2u cosh(pi/(2a) ln(t/u))).
double kernel_alpha(double u, double t, double alpha);

/// sqrt(u) (u/t)^theta k_alpha(u, t).
double kernel_alpha_theta(double u, double t, double alpha, double theta);

/// d/dt of kernel_alpha_theta.
double kernel_alpha_theta_dt(double u, double t, double alpha, double theta);

struct KClassResult {
    double value = 0.0;
    bool is_member = false;
    bool converged = true;
    std::string diagnostic;
};

/// int_0^inf sqrt(t) |k'(t)| dt and membership (value <= 1 and k decays).
KClassResult kclass_seminorm(const KernelFn& kernel);

/// int_0^inf sqrt(x) |h'(x)| dx, h(x) = x^{pi/2a - theta} / (x^{pi/a} + 1).
double kalpha_theta_time_seminorm(double alpha, double theta);

/// The same seminorm evaluated directly as int sqrt(t) |d/dt k_{a,theta}(u, t)| dt.
double kalpha_theta_time_seminorm_at(double alpha, double theta, double u);

/// Analytic function on a sector; only values on the rays arg z = +-alpha are used.
using SectorFunction = std::function<std::complex<double>(std::complex<double>)>;

enum class PoissonSign {
    kEqual,        // +1/(2 alpha) on both rays
    kAlternating,  // j/(2 alpha), j = -1, +1
};

/// f(s) from its values on the two rays via the k_alpha representation.
double poisson_reconstruct(const SectorFunction& f, double s, double alpha,
                           PoissonSign sign = PoissonSign::kEqual);

/// (1/Gamma(1-theta)) (1/(2 alpha)) sum_{j=+-1} phi_j(u lambda)^2 with
/// phi_j(z) = z^{1/4 - theta/2} exp(-z e^{i j alpha} / 2).
double scalar_V(double u, double lambda, double theta, double alpha);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_error = 0.0;
};

/// lhs = t^{-theta} lambda^{1/2-theta} e^{-lambda t} / Gamma(1-theta);
/// rhs = int_0^inf k_{alpha,theta}(u, t) V(u) du/u.
IdentityCheck spoisson_identity_check(double lambda, double t, double theta, double alpha);

using RealLineFunction = std::function<std::complex<double>(double)>;

struct SquareConstant {
    double c_phi = 0.0;
    double max_invariance_error = 0.0;  // over the sampled dilations
};

/// c_phi = (int_0^inf |phi(t)|^2 dt/t)^{1/2} and its dilation invariance.
SquareConstant hinf_square_constant(const RealLineFunction& phi,
                                    std::span<const double> dilations);

/// || (int_0^inf |phi(t A) x|^2 dt/t)^{1/2} ||_q for a diagonal model.
double hinf_square_norm(const SpectralModel& model, const RealLineFunction& phi,
                        const SpatialField& x);

}  // namespace smr
