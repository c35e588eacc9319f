// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "smr/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "smr/error.hpp"
#include "smr/quadrature.hpp"

namespace smr {

namespace {

double exponent_a(double alpha) { return std::numbers::pi / (2.0 * alpha); }

void validate_alpha(double alpha, double upper) {
    require(alpha > 0.0 && alpha < upper, "alpha out of range");
}

void validate_positive(double u, double t) {
    require(u > 0.0 && t > 0.0 && std::isfinite(u) && std::isfinite(t),
            "kernel arguments u, t must be > 0");
}

constexpr double kImagTolerance = 1e-12;

}  // namespace

KernelFn exponential_kernel(double c, double rate) {
    require(rate > 0.0, "exponential_kernel: rate must be > 0");
    KernelFn k;
    k.value = [c, rate](double t) { return c * std::exp(-rate * t); };
    k.derivative = [c, rate](double t) { return -c * rate * std::exp(-rate * t); };
    k.decays = true;
    k.name = "exp";
    return k;
}

KernelFn zero_kernel() {
    KernelFn k;
    k.value = [](double) { return 0.0; };
    k.derivative = [](double) { return 0.0; };
    k.decays = true;
    k.name = "zero";
    return k;
}

double derivative_mismatch(const KernelFn& kernel, std::span<const double> points) {
    double worst = 0.0;
    for (double t : points) {
        const double h = 1e-5 * std::max(t, 1e-3);
        const double fd = (kernel.value(t + h) - kernel.value(t - h)) / (2.0 * h);
        const double d = kernel.derivative(t);
        const double scale = std::max(std::abs(d), 1e-8);
        worst = std::max(worst, std::abs(fd - d) / scale);
    }
    return worst;
}

double kernel_alpha(double u, double t, double alpha) {
    validate_positive(u, t);
    validate_alpha(alpha, std::numbers::pi);
    const double x = exponent_a(alpha) * std::log(t / u);
    if (std::abs(x) > 700.0) {
        return 0.0;
    }
    return 1.0 / (2.0 * u * std::cosh(x));
}

double kernel_alpha_theta(double u, double t, double alpha, double theta) {
    require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
    return std::sqrt(u) * std::pow(u / t, theta) * kernel_alpha(u, t, alpha);
}

double kernel_alpha_theta_dt(double u, double t, double alpha, double theta) {
    const double k = kernel_alpha_theta(u, t, alpha, theta);
    const double a = exponent_a(alpha);
    return k * (-theta / t - a * std::tanh(a * std::log(t / u)) / t);
}

KClassResult kclass_seminorm(const KernelFn& kernel) {
    KClassResult out;
    if (!kernel.derivative) {
        out.converged = false;
        out.diagnostic = "kernel has no derivative";
        return out;
    }
    quad::Integrand f = [&](double t) { return std::sqrt(t) * std::abs(kernel.derivative(t)); };
    constexpr std::array<double, 3> breaks{0.1, 1.0, 10.0};
    quad::Result r;
    try {
        r = quad::integrate_half_line(f, breaks, 1e-12);
    } catch (const NumericalError& e) {
        out.converged = false;
        out.diagnostic = e.what();
        return out;
    }
    out.value = r.value;
    out.converged = r.converged && std::isfinite(r.value);
    if (!out.converged) {
        out.diagnostic = "quadrature did not converge (estimate " + std::to_string(r.value) +
                         ", error " + std::to_string(r.error) + ")";
    } else if (!kernel.decays) {
        out.diagnostic = "kernel does not vanish at infinity";
    }
    out.is_member = out.converged && kernel.decays && out.value <= 1.0;
    return out;
}

double kalpha_theta_time_seminorm(double alpha, double theta) {
    validate_alpha(alpha, std::numbers::pi);
    require(theta >= 0.0 && theta <= 1.0, "theta must lie in [0, 1]");
    const double a = exponent_a(alpha);
    const double b = a - theta;
    require(b > 0.0, "need pi/(2 alpha) - theta > 0");
    // h'(x) = h(x)/x * (b - 2a s), s = x^{2a}/(x^{2a}+1)
    quad::Integrand f = [a, b](double x) {
        const double lx = std::log(x);
        const double h = 1.0 / (std::exp(-b * lx) + std::exp((2.0 * a - b) * lx));
        const double s = 1.0 / (1.0 + std::exp(-2.0 * a * lx));
        return std::sqrt(x) * std::abs(h / x * (b - 2.0 * a * s));
    };
    const std::array<double, 2> breaks{1.0, std::pow(b / (2.0 * a - b), 1.0 / (2.0 * a))};
    const auto r = quad::integrate_half_line(f, breaks, 1e-12);
    if (!r.converged) {
        throw NumericalError("kalpha_theta_time_seminorm: quadrature did not converge");
    }
    return r.value;
}

double kalpha_theta_time_seminorm_at(double alpha, double theta, double u) {
    validate_alpha(alpha, std::numbers::pi);
    require(u > 0.0, "u must be > 0");
    const double a = exponent_a(alpha);
    const double b = a - theta;
    require(b > 0.0, "need pi/(2 alpha) - theta > 0");
    quad::Integrand f = [=](double t) {
        return std::sqrt(t) * std::abs(kernel_alpha_theta_dt(u, t, alpha, theta));
    };
    const std::array<double, 2> breaks{u, u * std::pow(b / (2.0 * a - b), 1.0 / (2.0 * a))};
    const auto r = quad::integrate_half_line(f, breaks, 1e-12);
    if (!r.converged) {
        throw NumericalError("kalpha_theta_time_seminorm_at: quadrature did not converge");
    }
    return r.value;
}

double poisson_reconstruct(const SectorFunction& f, double s, double alpha, PoissonSign sign) {
    require(s > 0.0, "poisson_reconstruct: s must be > 0");
    validate_alpha(alpha, std::numbers::pi / 2.0);
    const double a = exponent_a(alpha);
    // u = s e^x: k_alpha(u, s) du = dx / (2 cosh(a x)).
    double re = 0.0;
    double im = 0.0;
    double partial[2] = {0.0, 0.0};
    for (int j : {-1, 1}) {
        const double coeff = (sign == PoissonSign::kEqual ? 1.0 : static_cast<double>(j)) /
                             (2.0 * alpha);
        const std::complex<double> ray = std::polar(1.0, j * alpha);
        auto piece = [&](bool imag) {
            quad::Integrand g = [&, imag](double x) {
                const double w = 1.0 / (2.0 * std::cosh(a * x));
                if (w == 0.0) {
                    return 0.0;
                }
                const auto v = f(s * std::exp(x) * ray);
                return w * (imag ? v.imag() : v.real());
            };
            return quad::integrate_real_line(g, 1e-12);
        };
        const auto rr = piece(false);
        const auto ri = piece(true);
        if (!rr.converged || !ri.converged) {
            throw NumericalError("poisson_reconstruct: quadrature did not converge (partial sums " +
                                 std::to_string(partial[0]) + ", " +
                                 std::to_string(partial[1]) + ")");
        }
        re += coeff * rr.value;
        im += coeff * ri.value;
        partial[(j + 1) / 2] = coeff * rr.value;
    }
    if (sign == PoissonSign::kEqual && std::abs(im) > kImagTolerance * std::max(1.0, std::abs(re))) {
        throw NumericalError("poisson_reconstruct: imaginary residue " + std::to_string(im));
    }
    return re;
}

double scalar_V(double u, double lambda, double theta, double alpha) {
    require(u > 0.0 && lambda > 0.0, "scalar_V: u, lambda must be > 0");
    require(theta >= 0.0 && theta < 0.5, "scalar_V: theta must lie in [0, 1/2)");
    validate_alpha(alpha, std::numbers::pi / 2.0);
    const double z = u * lambda;
    std::complex<double> sum = 0.0;
    for (int j : {-1, 1}) {
        const std::complex<double> phi =
            std::pow(z, 0.25 - 0.5 * theta) * std::exp(-0.5 * z * std::polar(1.0, j * alpha));
        sum += phi * phi;
    }
    sum /= 2.0 * alpha * std::tgamma(1.0 - theta);
    if (std::abs(sum.imag()) > kImagTolerance * std::max(1.0, std::abs(sum.real()))) {
        throw NumericalError("scalar_V: imaginary residue");
    }
    return sum.real();
}

IdentityCheck spoisson_identity_check(double lambda, double t, double theta, double alpha) {
    require(lambda > 0.0 && t > 0.0, "spoisson_identity_check: lambda, t must be > 0");
    require(theta >= 0.0 && theta < 0.5, "theta must lie in [0, 1/2)");
    validate_alpha(alpha, std::numbers::pi / 2.0);
    IdentityCheck out;
    out.lhs = std::pow(t, -theta) * std::pow(lambda, 0.5 - theta) * std::exp(-lambda * t) /
              std::tgamma(1.0 - theta);
    quad::Integrand f = [&](double u) {
        const double v = scalar_V(u, lambda, theta, alpha);
        if (v == 0.0) {
            return 0.0;
        }
        return kernel_alpha_theta(u, t, alpha, theta) * v / u;
    };
    const std::array<double, 3> breaks{t, 1.0 / lambda,
                                       std::numbers::pi / (2.0 * lambda * std::sin(alpha))};
    const auto r = quad::integrate_half_line(f, breaks, 1e-13);
    if (!r.converged) {
        throw NumericalError("spoisson_identity_check: quadrature did not converge");
    }
    out.rhs = r.value;
    out.abs_error = std::abs(out.lhs - out.rhs);
    return out;
}

namespace {

double square_integral(const RealLineFunction& phi, double lambda) {
    quad::Integrand f = [&](double t) { return std::norm(phi(lambda * t)) / t; };
    const std::array<double, 1> breaks{1.0 / lambda};
    const auto r = quad::integrate_half_line(f, breaks, 1e-13);
    if (!r.converged || !std::isfinite(r.value)) {
        throw ValidationError("hinf_square_constant: |phi|^2 dt/t is not integrable");
    }
    return r.value;
}

}  // namespace

SquareConstant hinf_square_constant(const RealLineFunction& phi,
                                    std::span<const double> dilations) {
    SquareConstant out;
    const double c2 = square_integral(phi, 1.0);
    out.c_phi = std::sqrt(c2);
    for (double lambda : dilations) {
        require(lambda > 0.0, "hinf_square_constant: dilations must be > 0");
        out.max_invariance_error =
            std::max(out.max_invariance_error, std::abs(square_integral(phi, lambda) - c2));
    }
    return out;
}

double hinf_square_norm(const SpectralModel& model, const RealLineFunction& phi,
                        const SpatialField& x) {
    require(x.size() == model.size(), "hinf_square_norm: field length mismatch");
    const auto lambdas = model.eigenvalues();
    if (!model.has_physical_transform()) {
        std::vector<double> per_mode(x.size());
        for (std::size_t k = 0; k < x.size(); ++k) {
            per_mode[k] = std::abs(x[k]) * std::sqrt(square_integral(phi, lambdas[k]));
        }
        return lq_norm(per_mode, model.space_exponent());
    }
    // Pointwise square function on the physical grid; phi must be real on the half-line.
    quad::LogTimeRule rule(1e-8 / lambdas.back(), 60.0 / lambdas.front(), 4.0);
    std::vector<double> acc(model.physical_size(), 0.0);
    std::vector<double> scaled(x.size());
    for (std::size_t j = 0; j < rule.nodes().size(); ++j) {
        const double t = rule.nodes()[j];
        for (std::size_t k = 0; k < x.size(); ++k) {
            scaled[k] = phi(t * lambdas[k]).real() * x[k];
        }
        const auto values = model.to_physical(scaled);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += rule.weights()[j] / t * values[i] * values[i];
        }
    }
    for (double& v : acc) {
        v = std::sqrt(v);
    }
    return std::pow(model.cell_volume(), 1.0 / model.space_exponent()) *
           lq_norm(acc, model.space_exponent());
}

}  // namespace smr
