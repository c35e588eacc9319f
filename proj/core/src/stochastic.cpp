// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "smr/stochastic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "smr/error.hpp"

namespace smr {

//---------------------------------------------------------------------------//
// Noise
//---------------------------------------------------------------------------//

double NoisePath::brownian(std::size_t i, std::size_t h) const {
    double w = 0.0;
    for (std::size_t j = 0; j < i; ++j) {
        w += dw(j, h);
    }
    return w;
}

namespace {

// (1 - e^{-x}) / s without cancellation for small x.
double decay_integral(double rate, double dt) {
    return -std::expm1(-rate * dt) / rate;
}

Eigen::MatrixXd exact_exponential_factor(std::span<const double> lambdas, double dt) {
    const auto k = static_cast<Eigen::Index>(lambdas.size());
    Eigen::MatrixXd cov(k + 1, k + 1);
    for (Eigen::Index a = 0; a < k; ++a) {
        for (Eigen::Index b = 0; b < k; ++b) {
            cov(a, b) = decay_integral(lambdas[a] + lambdas[b], dt);
        }
        cov(a, k) = cov(k, a) = decay_integral(lambdas[a], dt);
    }
    cov(k, k) = dt;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success) {
        throw NumericalError("exact-exponential covariance: eigen-decomposition failed");
    }
    Eigen::VectorXd ev = eig.eigenvalues();
    const double top = ev.maxCoeff();
    for (Eigen::Index a = 0; a < ev.size(); ++a) {
        if (ev(a) < -1e-10 * top) {
            throw NumericalError("exact-exponential covariance is not positive semidefinite");
        }
        ev(a) = std::sqrt(std::max(ev(a), 0.0));
    }
    return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

NoisePath sample_noise(const TimeGrid& grid, std::size_t dims, std::uint64_t seed,
                       const SpectralModel* model, NoiseScheme scheme) {
    require(dims >= 1, "sample_noise: noise dimension m must be >= 1");
    NoisePath noise(grid, dims, seed);
    noise.scheme_ = scheme;
    CounterRng rng(seed);
    const double sd = std::sqrt(grid.dt());
    if (scheme == NoiseScheme::kMaruyama) {
        for (std::size_t i = 0; i < grid.steps(); ++i) {
            for (std::size_t h = 0; h < dims; ++h) {
                noise.dw(i, h) = sd * rng.normal();
            }
        }
        return noise;
    }
    require(model != nullptr, "sample_noise: exact-exponential scheme needs a model");
    const auto lambdas = model->eigenvalues();
    const std::size_t k = lambdas.size();
    const Eigen::MatrixXd factor = exact_exponential_factor(lambdas, grid.dt());
    noise.aux_lambdas_.assign(lambdas.begin(), lambdas.end());
    noise.xi_.assign(grid.steps() * k * dims, 0.0);
    Eigen::VectorXd z(static_cast<Eigen::Index>(k + 1));
    for (std::size_t i = 0; i < grid.steps(); ++i) {
        for (std::size_t h = 0; h < dims; ++h) {
            for (Eigen::Index a = 0; a < z.size(); ++a) {
                z(a) = rng.normal();
            }
            const Eigen::VectorXd v = factor * z;
            for (std::size_t a = 0; a < k; ++a) {
                noise.xi_[(i * k + a) * dims + h] = v(static_cast<Eigen::Index>(a));
            }
            noise.dw(i, h) = v(static_cast<Eigen::Index>(k));
        }
    }
    return noise;
}

NoisePath coarsen(const NoisePath& noise, std::size_t factor) {
    require(factor >= 1 && noise.grid().steps() % factor == 0,
            "coarsen: factor must divide the step count");
    NoisePath out(TimeGrid(noise.grid().horizon(), noise.grid().steps() / factor), noise.dims(),
                  noise.seed());
    for (std::size_t i = 0; i < out.grid().steps(); ++i) {
        for (std::size_t h = 0; h < noise.dims(); ++h) {
            double sum = 0.0;
            for (std::size_t j = 0; j < factor; ++j) {
                sum += noise.dw(i * factor + j, h);
            }
            out.dw(i, h) = sum;
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
// Step processes
//---------------------------------------------------------------------------//

StepProcess StepProcess::refined(std::size_t factor) const {
    require(factor >= 1, "StepProcess::refined: factor must be >= 1");
    StepProcess out(cells_ * factor, modes_, dims_);
    const std::size_t block = modes_ * dims_;
    for (std::size_t i = 0; i < out.cells_; ++i) {
        std::copy_n(values_.begin() + static_cast<std::ptrdiff_t>((i / factor) * block), block,
                    out.values_.begin() + static_cast<std::ptrdiff_t>(i * block));
    }
    return out;
}

StepProcess StepProcess::scaled(double c) const {
    StepProcess out = *this;
    for (double& v : out.values_) {
        v *= c;
    }
    return out;
}

StepProcess constant_process(std::size_t cells, std::size_t modes, std::size_t dims, double c) {
    StepProcess g(cells, modes, dims);
    std::fill(g.values().begin(), g.values().end(), c);
    return g;
}

StepProcess random_process(std::size_t cells, std::size_t modes, std::size_t dims,
                           std::uint64_t seed) {
    StepProcess g(cells, modes, dims);
    CounterRng rng(seed);
    for (double& v : g.values()) {
        v = rng.normal();
    }
    return g;
}

StepProcess IntegrandSpec::realize(const NoisePath& noise) const {
    if (feedback == 0.0) {
        return base;
    }
    require(base.cells() == noise.grid().steps() && base.dims() == noise.dims(),
            "IntegrandSpec: shape does not match the noise");
    StepProcess g = base;
    std::vector<double> w(noise.dims(), 0.0);
    for (std::size_t i = 0; i < g.cells(); ++i) {
        for (std::size_t h = 0; h < g.dims(); ++h) {
            const double factor = 1.0 + feedback * std::tanh(w[h]);
            for (std::size_t k = 0; k < g.modes(); ++k) {
                g.at(i, k, h) *= factor;
            }
        }
        for (std::size_t h = 0; h < g.dims(); ++h) {
            w[h] += noise.dw(i, h);
        }
    }
    return g;
}

//---------------------------------------------------------------------------//
// Integrals
//---------------------------------------------------------------------------//

namespace {

void check_shapes(const StepProcess& g, const NoisePath& noise) {
    require(g.cells() == noise.grid().steps(), "step process cell count differs from the grid");
    require(g.dims() == noise.dims(), "step process noise dimension differs from the noise");
}

}  // namespace

SpatialField ito_integral(const StepProcess& g, const NoisePath& noise, double t) {
    check_shapes(g, noise);
    const auto n = noise.grid().index_of(t);
    require(n.has_value(), "ito_integral: t must be a grid point");
    SpatialField out{std::vector<double>(g.modes(), 0.0)};
    for (std::size_t i = 0; i < *n; ++i) {
        for (std::size_t k = 0; k < g.modes(); ++k) {
            double s = 0.0;
            for (std::size_t h = 0; h < g.dims(); ++h) {
                s += g.at(i, k, h) * noise.dw(i, h);
            }
            out[k] += s;
        }
    }
    return out;
}

FieldPath stoch_convolution(const SpectralModel& model, const StepProcess& g,
                            const NoisePath& noise, double gamma, double theta,
                            NoiseScheme scheme) {
    check_shapes(g, noise);
    require(g.modes() == model.size(), "step process mode count differs from the model");
    require(theta >= 0.0 && theta < 0.5, "stoch_convolution: theta must lie in [0, 1/2)");
    const auto& grid = noise.grid();
    const std::size_t n_steps = grid.steps();
    const std::size_t k_modes = model.size();
    const double dt = grid.dt();
    const auto lambdas = model.eigenvalues();
    FieldPath u(n_steps + 1, k_modes);

    // Per-cell forcing sum_h G dW (or xi).
    std::vector<double> forcing(n_steps * k_modes, 0.0);
    if (scheme == NoiseScheme::kExactExponential) {
        require(theta == 0.0, "exact-exponential scheme supports theta = 0 only");
        require(noise.has_aux() && noise.aux_modes() == k_modes,
                "exact-exponential scheme needs noise sampled with this model");
        for (std::size_t k = 0; k < k_modes; ++k) {
            require(noise.aux_eigenvalues()[k] == lambdas[k],
                    "noise auxiliaries were sampled for a different model");
        }
        for (std::size_t i = 0; i < n_steps; ++i) {
            for (std::size_t k = 0; k < k_modes; ++k) {
                double s = 0.0;
                for (std::size_t h = 0; h < g.dims(); ++h) {
                    s += g.at(i, k, h) * noise.xi(i, k, h);
                }
                forcing[i * k_modes + k] = s;
            }
        }
    } else {
        for (std::size_t i = 0; i < n_steps; ++i) {
            for (std::size_t k = 0; k < k_modes; ++k) {
                double s = 0.0;
                for (std::size_t h = 0; h < g.dims(); ++h) {
                    s += g.at(i, k, h) * noise.dw(i, h);
                }
                forcing[i * k_modes + k] = s;
            }
        }
    }

    for (std::size_t k = 0; k < k_modes; ++k) {
        const double lambda = lambdas[k];
        const double power = std::pow(lambda, gamma);
        const double decay = std::exp(-lambda * dt);
        if (theta == 0.0) {
            double state = 0.0;
            for (std::size_t n = 0; n < n_steps; ++n) {
                const double f = forcing[n * k_modes + k];
                state = scheme == NoiseScheme::kExactExponential ? decay * state + f
                                                                 : decay * (state + f);
                u.at(n + 1, k) = power * state;
            }
            continue;
        }
        // weight[j] for lag t_n - t_i = j dt; the last cell (j = 1) uses the midpoint lag
        // inside the theta factor.
        const double norm = 1.0 / std::tgamma(1.0 - theta);
        std::vector<double> weight(n_steps + 1, 0.0);
        for (std::size_t j = 1; j <= n_steps; ++j) {
            const double lag = static_cast<double>(j) * dt;
            const double theta_lag = j == 1 ? 0.5 * dt : lag;
            weight[j] = norm * std::pow(theta_lag, -theta) * power * std::exp(-lambda * lag);
        }
        for (std::size_t n = 1; n <= n_steps; ++n) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += weight[n - i] * forcing[i * k_modes + k];
            }
            u.at(n, k) = s;
        }
    }
    return u;
}

FieldPath propagate_variance(const SpectralModel& model, const StepProcess& g,
                             const TimeGrid& grid, double gamma, NoiseScheme scheme) {
    require(g.cells() == grid.steps() && g.modes() == model.size(),
            "propagate_variance: shape mismatch");
    const auto lambdas = model.eigenvalues();
    FieldPath v(grid.steps() + 1, model.size());
    const double dt = grid.dt();
    for (std::size_t k = 0; k < model.size(); ++k) {
        const double lambda = lambdas[k];
        const double decay2 = std::exp(-2.0 * lambda * dt);
        const double power2 = std::pow(lambda, 2.0 * gamma);
        const double cell_var = scheme == NoiseScheme::kExactExponential
                                    ? decay_integral(2.0 * lambda, dt)
                                    : dt;
        double state = 0.0;
        for (std::size_t n = 0; n < grid.steps(); ++n) {
            double g2 = 0.0;
            for (std::size_t h = 0; h < g.dims(); ++h) {
                g2 += g.at(n, k, h) * g.at(n, k, h);
            }
            state = scheme == NoiseScheme::kExactExponential ? decay2 * state + g2 * cell_var
                                                             : decay2 * (state + g2 * cell_var);
            v.at(n + 1, k) = power2 * state;
        }
    }
    return v;
}

//---------------------------------------------------------------------------//
// Norms of step processes
//---------------------------------------------------------------------------//

double square_function_norm(const StepProcess& g, const TimeGrid& grid, double q) {
    require(g.cells() == grid.steps(), "square_function_norm: cell count mismatch");
    std::vector<double> per_mode(g.modes(), 0.0);
    for (std::size_t i = 0; i < g.cells(); ++i) {
        for (std::size_t k = 0; k < g.modes(); ++k) {
            for (std::size_t h = 0; h < g.dims(); ++h) {
                per_mode[k] += grid.dt() * g.at(i, k, h) * g.at(i, k, h);
            }
        }
    }
    for (double& v : per_mode) {
        v = std::sqrt(v);
    }
    return lq_norm(per_mode, q);
}

double square_function_norm(const SpectralModel& model, const StepProcess& g,
                            const TimeGrid& grid) {
    require(g.modes() == model.size(), "square_function_norm: mode count mismatch");
    if (!model.has_physical_transform()) {
        return square_function_norm(g, grid, model.space_exponent());
    }
    require(g.cells() == grid.steps(), "square_function_norm: cell count mismatch");
    std::vector<double> acc(model.physical_size(), 0.0);
    std::vector<double> coeffs(g.modes());
    for (std::size_t i = 0; i < g.cells(); ++i) {
        for (std::size_t h = 0; h < g.dims(); ++h) {
            for (std::size_t k = 0; k < g.modes(); ++k) {
                coeffs[k] = g.at(i, k, h);
            }
            const auto values = model.to_physical(coeffs);
            for (std::size_t j = 0; j < acc.size(); ++j) {
                acc[j] += grid.dt() * values[j] * values[j];
            }
        }
    }
    for (double& v : acc) {
        v = std::sqrt(v);
    }
    return std::pow(model.cell_volume(), 1.0 / model.space_exponent()) *
           lq_norm(acc, model.space_exponent());
}

std::vector<double> step_space_norms(const SpectralModel& model, const StepProcess& g) {
    require(g.modes() == model.size(), "step_space_norms: mode count mismatch");
    std::vector<double> out(g.cells(), 0.0);
    std::vector<double> coeffs(g.modes());
    for (std::size_t i = 0; i < g.cells(); ++i) {
        if (g.dims() == 1) {
            for (std::size_t k = 0; k < g.modes(); ++k) {
                coeffs[k] = g.at(i, k, 0);
            }
            out[i] = space_norm(model, coeffs);
            continue;
        }
        if (!model.has_physical_transform()) {
            for (std::size_t k = 0; k < g.modes(); ++k) {
                double s = 0.0;
                for (std::size_t h = 0; h < g.dims(); ++h) {
                    s += g.at(i, k, h) * g.at(i, k, h);
                }
                coeffs[k] = std::sqrt(s);
            }
            out[i] = lq_norm(coeffs, model.space_exponent());
            continue;
        }
        std::vector<double> acc(model.physical_size(), 0.0);
        for (std::size_t h = 0; h < g.dims(); ++h) {
            for (std::size_t k = 0; k < g.modes(); ++k) {
                coeffs[k] = g.at(i, k, h);
            }
            const auto values = model.to_physical(coeffs);
            for (std::size_t j = 0; j < acc.size(); ++j) {
                acc[j] += values[j] * values[j];
            }
        }
        for (double& v : acc) {
            v = std::sqrt(v);
        }
        out[i] = std::pow(model.cell_volume(), 1.0 / model.space_exponent()) *
                 lq_norm(acc, model.space_exponent());
    }
    return out;
}

double step_norm(const SpectralModel& model, const StepProcess& g, const TimeGrid& grid,
                 double p) {
    require(g.cells() == grid.steps(), "step_norm: cell count mismatch");
    require(p >= 1.0, "step_norm: p must be >= 1");
    const auto norms = step_space_norms(model, g);
    double sum = 0.0;
    for (double v : norms) {
        sum += grid.dt() * std::pow(v, p);
    }
    return std::pow(sum, 1.0 / p);
}

//---------------------------------------------------------------------------//
// Ito isomorphism probe
//---------------------------------------------------------------------------//

RatioStatistic ito_isomorphism_ratio(const SpectralModel& model, const IntegrandSpec& g,
                                     const TimeGrid& grid, double p, const MonteCarloSpec& mc) {
    require(p > 1.0 && std::isfinite(p), "ito_isomorphism_ratio: p must lie in (1, inf)");
    require(g.base.cells() == grid.steps() && g.base.modes() == model.size(),
            "ito_isomorphism_ratio: integrand shape mismatch");
    require(mc.paths >= 1, "ito_isomorphism_ratio: need at least one path");
    const bool deterministic = g.deterministic();
    const double fixed_den =
        deterministic ? std::pow(square_function_norm(model, g.base, grid), p) : 0.0;
    require(!deterministic || fixed_den > 0.0, "ito_isomorphism_ratio: G = 0");

    struct Sample {
        double num = 0.0;
        double den = 0.0;
    };
    const auto samples = map_paths(mc.paths, mc.seed, mc.threads, [&](std::size_t, std::uint64_t s) {
        const auto noise = sample_noise(grid, g.base.dims(), s);
        const auto realized = g.realize(noise);
        const auto integral = ito_integral(realized, noise, grid.horizon());
        Sample out;
        out.num = std::pow(space_norm(model, integral.coeffs), p);
        out.den = deterministic ? fixed_den : std::pow(square_function_norm(model, realized, grid), p);
        return out;
    });
    std::vector<double> num(samples.size());
    std::vector<double> den(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        num[i] = samples[i].num;
        den[i] = samples[i].den;
    }
    const auto nm = mean_estimate(num);
    const auto dm = mean_estimate(den);
    require(dm.mean > 0.0, "ito_isomorphism_ratio: G = 0 on every path");
    const auto ratio = moment_ratio(num, den, p);

    RatioStatistic out;
    out.numerator = std::pow(nm.mean, 1.0 / p);
    out.denominator = std::pow(dm.mean, 1.0 / p);
    out.ratio = ratio.mean;
    out.stderr_ratio = ratio.stderr_mean;
    out.horizon = grid.horizon();
    out.steps = grid.steps();
    out.dt = grid.dt();
    out.n_mc = mc.paths;
    out.modes = model.size();
    out.p = p;
    out.q = model.space_exponent();
    out.theta = 0.0;
    out.gamma = 0.0;
    return out;
}

EnsembleRange ito_isomorphism_range(const SpectralModel& model,
                                    const std::vector<IntegrandSpec>& ensemble,
                                    const TimeGrid& grid, double p, const MonteCarloSpec& mc) {
    require(!ensemble.empty(), "ito_isomorphism_range: empty ensemble");
    EnsembleRange out;
    for (std::size_t e = 0; e < ensemble.size(); ++e) {
        MonteCarloSpec member = mc;
        member.seed = derive_seed(mc.seed ^ 0x5EED5EED5EED5EEDULL, e);
        out.members.push_back(ito_isomorphism_ratio(model, ensemble[e], grid, p, member));
    }
    out.min_ratio = out.max_ratio = out.members.front().ratio;
    for (const auto& m : out.members) {
        out.min_ratio = std::min(out.min_ratio, m.ratio);
        out.max_ratio = std::max(out.max_ratio, m.ratio);
    }
    return out;
}

}  // namespace smr
