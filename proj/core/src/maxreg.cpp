// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "smr/maxreg.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "smr/error.hpp"
#include "smr/quadrature.hpp"
#include "smr/rng.hpp"

namespace smr {

//---------------------------------------------------------------------------//
// Deterministic integrands
//---------------------------------------------------------------------------//

PiecewiseSignal PiecewiseSignal::from_process(const StepProcess& g, const TimeGrid& grid) {
    require(g.cells() == grid.steps(), "piecewise signal: cell count differs from the grid");
    PiecewiseSignal s;
    s.modes = g.modes();
    s.breaks.resize(grid.steps() + 1);
    for (std::size_t i = 0; i <= grid.steps(); ++i) {
        s.breaks[i] = grid.edge(i);
    }
    s.power.assign(grid.steps() * g.modes(), 0.0);
    for (std::size_t i = 0; i < g.cells(); ++i) {
        for (std::size_t k = 0; k < g.modes(); ++k) {
            double acc = 0.0;
            for (std::size_t h = 0; h < g.dims(); ++h) {
                acc += g.at(i, k, h) * g.at(i, k, h);
            }
            s.at(i, k) = acc;
        }
    }
    return s;
}

namespace {

// Per-piece error target relative to the data norm.
constexpr double kRelTol = 1e-13;

void check_signal(const PiecewiseSignal& s) {
    require(s.breaks.size() >= 2 && s.breaks.front() == 0.0,
            "piecewise signal: breakpoints must start at 0 and hold at least one piece");
    for (std::size_t j = 1; j < s.breaks.size(); ++j) {
        require(s.breaks[j] > s.breaks[j - 1], "piecewise signal: breakpoints must increase");
    }
    require(s.power.size() == s.pieces() * s.modes, "piecewise signal: power size mismatch");
    for (double v : s.power) {
        require(v >= 0.0 && std::isfinite(v), "piecewise signal: powers must be finite and >= 0");
    }
}

// int_a^b u^{-2 theta} e^{-2 lambda u} du for 0 <= a < b.
double weighted_exp_integral(double a, double b, double lambda, double theta) {
    const double c = 2.0 * lambda;
    if (theta == 0.0) {
        return std::exp(-c * a) * -std::expm1(-c * (b - a)) / c;
    }
    const double s = 1.0 - 2.0 * theta;
    const double xa = c * a;
    const double xb = c * b;
    const double diff = xa > 1.0
        ? boost::math::gamma_q(s, xa) - boost::math::gamma_q(s, xb)
        : boost::math::gamma_p(s, xb) - boost::math::gamma_p(s, xa);
    return std::pow(c, -s) * std::tgamma(s) * diff;
}

std::vector<double> integration_breaks(const PiecewiseSignal& s, std::span<const double> lambdas) {
    std::vector<double> out(s.breaks.begin() + 1, s.breaks.end());
    const double end = s.breaks.back();
    for (double lambda : lambdas) {
        out.push_back(0.5 / lambda);
        out.push_back(1.0 / lambda);
        out.push_back(end + 1.0 / lambda);
        out.push_back(end + 10.0 / lambda);
    }
    return out;
}

double checked(const quad::Result& r, const char* what) {
    if (!r.converged || !std::isfinite(r.value)) {
        throw NumericalError(std::string(what) + ": quadrature did not converge");
    }
    return r.value;
}

}  // namespace

ModeVariance::ModeVariance(const PiecewiseSignal& signal, std::size_t mode, double lambda,
                           double theta, double gamma)
    : signal_(&signal), mode_(mode), lambda_(lambda), theta_(theta) {
    require(mode < signal.modes, "mode variance: mode out of range");
    require(lambda > 0.0, "mode variance: eigenvalue must be positive");
    require(theta >= 0.0 && theta < 0.5, "mode variance: theta must lie in [0, 1/2)");
    const double g = std::tgamma(1.0 - theta);
    scale_ = std::pow(lambda, 2.0 * gamma) / (g * g);
    if (theta == 0.0) {
        const std::size_t pieces = signal.pieces();
        at_breaks_.assign(pieces + 1, 0.0);
        for (std::size_t j = 0; j < pieces; ++j) {
            const double len = signal.breaks[j + 1] - signal.breaks[j];
            at_breaks_[j + 1] = std::exp(-2.0 * lambda * len) * at_breaks_[j] +
                                signal.at(j, mode) * weighted_exp_integral(0.0, len, lambda, 0.0);
        }
    }
}

double ModeVariance::operator()(double t) const {
    const auto& b = signal_->breaks;
    if (t <= 0.0) {
        return 0.0;
    }
    if (theta_ == 0.0) {
        const auto it = std::upper_bound(b.begin(), b.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - b.begin()) - 1;
        const double tau = t - b[j];
        double v = std::exp(-2.0 * lambda_ * tau) * at_breaks_[j];
        if (j < signal_->pieces()) {
            v += signal_->at(j, mode_) * weighted_exp_integral(0.0, tau, lambda_, 0.0);
        }
        return scale_ * v;
    }
    double v = 0.0;
    for (std::size_t j = 0; j < signal_->pieces() && b[j] < t; ++j) {
        const double c = signal_->at(j, mode_);
        if (c == 0.0) {
            continue;
        }
        const double lo = std::max(0.0, t - b[j + 1]);
        v += c * weighted_exp_integral(lo, t - b[j], lambda_, theta_);
    }
    return scale_ * v;
}

double signal_norm_power(const PiecewiseSignal& signal, double p, double q) {
    check_signal(signal);
    double total = 0.0;
    for (std::size_t j = 0; j < signal.pieces(); ++j) {
        double inner = 0.0;
        for (std::size_t k = 0; k < signal.modes; ++k) {
            inner += std::pow(signal.at(j, k), 0.5 * q);
        }
        total += (signal.breaks[j + 1] - signal.breaks[j]) * std::pow(inner, p / q);
    }
    return total;
}

double square_function_power(const PiecewiseSignal& signal, std::span<const double> lambdas,
                             double p, double q, double theta, double gamma) {
    check_signal(signal);
    require(lambdas.size() == signal.modes, "square function: eigenvalue count mismatch");
    std::vector<ModeVariance> vars;
    vars.reserve(signal.modes);
    for (std::size_t k = 0; k < signal.modes; ++k) {
        vars.emplace_back(signal, k, lambdas[k], theta, gamma);
    }
    const auto f = [&](double t) {
        double inner = 0.0;
        for (const auto& v : vars) {
            inner += std::pow(v(t), 0.5 * q);
        }
        return std::pow(inner, p / q);
    };
    const auto breaks = integration_breaks(signal, lambdas);
    const double tol = kRelTol * static_cast<double>(breaks.size()) * signal_norm_power(signal, p, q);
    return checked(quad::integrate_half_line(f, breaks, tol), "square function");
}

double gaussian_abs_moment(double q) {
    require(q > -1.0, "gaussian moment: q must exceed -1");
    return std::pow(2.0, 0.5 * q) * std::tgamma(0.5 * (q + 1.0)) / std::sqrt(std::numbers::pi);
}

double gaussian_moment_power(const PiecewiseSignal& signal, std::span<const double> lambdas,
                             double q, double theta, double gamma) {
    check_signal(signal);
    require(lambdas.size() == signal.modes, "gaussian moment: eigenvalue count mismatch");
    const double scale = signal_norm_power(signal, q, q);
    double total = 0.0;
    for (std::size_t k = 0; k < signal.modes; ++k) {
        const ModeVariance v(signal, k, lambdas[k], theta, gamma);
        const std::span<const double> one(&lambdas[k], 1);
        const auto breaks = integration_breaks(signal, one);
        const double tol = kRelTol * static_cast<double>(breaks.size()) * scale /
                           static_cast<double>(signal.modes);
        total += checked(
            quad::integrate_half_line([&](double t) { return std::pow(v(t), 0.5 * q); }, breaks,
                                      tol),
            "gaussian moment");
    }
    return gaussian_abs_moment(q) * total;
}

//---------------------------------------------------------------------------//
// Maximal-regularity probes
//---------------------------------------------------------------------------//

std::string check_maxreg_exponents(double p, double q) {
    const bool ok = (p > 2.0 && std::isfinite(p)) || (p == 2.0 && q == 2.0) ||
                    (p == 2.0 && q > 2.0);
    require(ok, "exponents violate the hypothesis p ∈ (2,∞) or p = q = 2");
    return p == 2.0 && q > 2.0 ? kOutsideHypotheses : "";
}

namespace {

StepProcess shift_modes(const SpectralModel& model, const StepProcess& g, double delta) {
    if (delta == 0.0) {
        return g;
    }
    StepProcess out = g;
    const auto lambdas = model.eigenvalues();
    for (std::size_t i = 0; i < g.cells(); ++i) {
        for (std::size_t k = 0; k < g.modes(); ++k) {
            const double f = std::pow(lambdas[k], delta);
            for (std::size_t h = 0; h < g.dims(); ++h) {
                out.at(i, k, h) *= f;
            }
        }
    }
    return out;
}

// int_0^inf E|U_k(t)|^2 dt summed over modes, by Fubini in closed form.
double second_moment_integral(const PiecewiseSignal& signal, std::span<const double> lambdas,
                              double theta, double gamma) {
    const double g = std::tgamma(1.0 - theta);
    const double s = 1.0 - 2.0 * theta;
    double total = 0.0;
    for (std::size_t k = 0; k < signal.modes; ++k) {
        const double lambda = lambdas[k];
        double mass = 0.0;
        for (std::size_t j = 0; j < signal.pieces(); ++j) {
            mass += signal.at(j, k) * (signal.breaks[j + 1] - signal.breaks[j]);
        }
        total += mass * std::pow(lambda, 2.0 * gamma) * std::tgamma(s) *
                 std::pow(2.0 * lambda, -s) / (g * g);
    }
    return total;
}

bool is_zero(const StepProcess& g) {
    return std::all_of(g.values().begin(), g.values().end(), [](double v) { return v == 0.0; });
}

// int_T^inf ||U(t)||^p dt for the continuation of the discrete convolution after T.
class TailRule {
public:
    TailRule(const SpectralModel& model, const TimeGrid& grid)
        : rule_(1e-7 / model.eigenvalues().back(), 60.0 / model.eigenvalues().front(), 3.0),
          t_min_(1e-7 / model.eigenvalues().back()), grid_(grid) {}

    double operator()(const SpectralModel& model, const FieldPath& u, const StepProcess& g,
                      const NoisePath& noise, double gamma, double theta, double p) const {
        const auto lambdas = model.eigenvalues();
        const std::size_t n_steps = grid_.steps();
        const std::size_t k_modes = model.size();
        const auto last = u.row(n_steps);
        double total = t_min_ * std::pow(space_norm(model, last), p);
        std::vector<double> forcing;
        if (theta > 0.0) {
            forcing.assign(n_steps * k_modes, 0.0);
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
        const double norm = theta > 0.0 ? 1.0 / std::tgamma(1.0 - theta) : 1.0;
        std::vector<double> x(k_modes);
        const auto nodes = rule_.nodes();
        const auto weights = rule_.weights();
        for (std::size_t m = 0; m < nodes.size(); ++m) {
            const double tau = nodes[m];
            for (std::size_t k = 0; k < k_modes; ++k) {
                const double lambda = lambdas[k];
                if (theta == 0.0) {
                    x[k] = std::exp(-lambda * tau) * last[k];
                    continue;
                }
                const double power = std::pow(lambda, gamma);
                double s = 0.0;
                for (std::size_t i = 0; i < n_steps; ++i) {
                    const double lag = grid_.horizon() + tau - grid_.edge(i);
                    s += std::pow(lag, -theta) * std::exp(-lambda * lag) * forcing[i * k_modes + k];
                }
                x[k] = norm * power * s;
            }
            total += weights[m] * std::pow(space_norm(model, x), p);
        }
        return total;
    }

private:
    quad::LogTimeRule rule_;
    double t_min_;
    TimeGrid grid_;
};

RatioStatistic solution_ratio(const SpectralModel& model, const IntegrandSpec& g,
                              const TimeGrid& grid, double p, double theta, double gamma,
                              double delta, const MonteCarloSpec& mc, const char* name) {
    const double q = model.space_exponent();
    const std::string flag = check_maxreg_exponents(p, q);
    require(theta >= 0.0 && theta < 0.5, std::string(name) + ": theta must lie in [0, 1/2)");
    require(g.base.cells() == grid.steps() && g.base.modes() == model.size(),
            std::string(name) + ": integrand shape mismatch");
    require(!is_zero(g.base), std::string(name) + ": G must be nonzero");
    require(mc.paths >= 1, std::string(name) + ": need at least one path");

    RatioStatistic out;
    out.horizon = grid.horizon();
    out.steps = grid.steps();
    out.dt = grid.dt();
    out.modes = model.size();
    out.p = p;
    out.q = q;
    out.theta = theta;
    out.gamma = gamma;
    out.flag = flag;

    const bool exact = g.deterministic() && p == q && (theta == 0.0 || p == 2.0) &&
                       (!model.has_physical_transform() || q == 2.0);
    if (exact) {
        const auto signal = PiecewiseSignal::from_process(g.base, grid);
        const auto data = PiecewiseSignal::from_process(shift_modes(model, g.base, delta), grid);
        const double num = theta == 0.0
            ? gaussian_moment_power(signal, model.eigenvalues(), q, theta, gamma)
            : second_moment_integral(signal, model.eigenvalues(), theta, gamma);
        const double den = signal_norm_power(data, p, q);
        out.numerator = std::pow(num, 1.0 / p);
        out.denominator = std::pow(den, 1.0 / p);
        out.ratio = out.numerator / out.denominator;
        out.n_mc = 0;
        return out;
    }

    const TailRule tail(model, grid);
    const double dt = grid.dt();
    struct Sample {
        double num = 0.0;
        double den = 0.0;
    };
    const auto samples = map_paths(mc.paths, mc.seed, mc.threads, [&](std::size_t, std::uint64_t s) {
        const auto noise = sample_noise(grid, g.base.dims(), s);
        const auto realized = g.realize(noise);
        const auto u = stoch_convolution(model, realized, noise, gamma, theta);
        Sample r;
        for (std::size_t n = 0; n < grid.steps(); ++n) {
            r.num += dt * std::pow(space_norm(model, u.row(n)), p);
        }
        r.num += tail(model, u, realized, noise, gamma, theta, p);
        r.den = std::pow(step_norm(model, shift_modes(model, realized, delta), grid, p), p);
        return r;
    });
    std::vector<double> num(samples.size());
    std::vector<double> den(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        num[i] = samples[i].num;
        den[i] = samples[i].den;
    }
    const auto nm = mean_estimate(num);
    const auto dm = mean_estimate(den);
    require(dm.mean > 0.0, std::string(name) + ": G = 0 on every path");
    const auto ratio = moment_ratio(num, den, p);
    out.numerator = std::pow(nm.mean, 1.0 / p);
    out.denominator = std::pow(dm.mean, 1.0 / p);
    out.ratio = ratio.mean;
    out.stderr_ratio = ratio.stderr_mean;
    out.n_mc = mc.paths;
    return out;
}

}  // namespace

RatioStatistic maxreg_ratio(const SpectralModel& model, const IntegrandSpec& g,
                            const TimeGrid& grid, double p, double theta,
                            const MonteCarloSpec& mc) {
    return solution_ratio(model, g, grid, p, theta, 0.5 - theta, 0.0, mc, "maxreg_ratio");
}

RatioStatistic higher_regularity_shift(const SpectralModel& model, const IntegrandSpec& g,
                                       const TimeGrid& grid, double delta, double p,
                                       const MonteCarloSpec& mc) {
    require(delta >= 0.0 && std::isfinite(delta), "higher_regularity_shift: delta must be >= 0");
    require(model.invertible(), "higher_regularity_shift: the model must be invertible");
    auto out = solution_ratio(model, g, grid, p, 0.0, 0.5 + delta, delta, mc,
                              "higher_regularity_shift");
    return out;
}

std::vector<IntegrandSpec> standard_ensemble(std::size_t modes, const TimeGrid& grid,
                                             std::size_t dims, std::size_t count,
                                             std::uint64_t seed, double feedback) {
    require(modes >= 1 && dims >= 1 && count >= 1, "standard_ensemble: empty shape");
    const std::size_t cells = grid.steps();
    std::vector<IntegrandSpec> out;
    out.reserve(count);
    for (std::size_t e = 0; e < count; ++e) {
        const std::uint64_t s = derive_seed(seed, e);
        IntegrandSpec member;
        switch (e % 5) {
            case 0:
                member.base = constant_process(cells, modes, dims, 1.0);
                break;
            case 1:
                member.base = random_process(cells, modes, dims, s);
                break;
            case 2: {
                CounterRng rng(s);
                const std::size_t a = static_cast<std::size_t>(rng.uniform() * 0.5 * cells);
                const std::size_t b = std::min(cells, a + 1 + static_cast<std::size_t>(
                                                                  rng.uniform() * 0.5 * cells));
                member.base = StepProcess(cells, modes, dims);
                for (std::size_t i = a; i < b; ++i) {
                    for (std::size_t k = 0; k < modes; ++k) {
                        for (std::size_t h = 0; h < dims; ++h) {
                            member.base.at(i, k, h) = 1.0;
                        }
                    }
                }
                break;
            }
            case 3: {
                const std::size_t k = (e / 5) % modes;
                member.base = StepProcess(cells, modes, dims);
                for (std::size_t i = 0; i < cells; ++i) {
                    member.base.at(i, modes - 1 - k, 0) = 1.0;
                }
                break;
            }
            default:
                member.base = random_process(cells, modes, dims, s);
                member.feedback = feedback;
                break;
        }
        out.push_back(std::move(member));
    }
    return out;
}

ConstantEstimate estimate_constant(const SpectralModel& model,
                                   const std::vector<IntegrandSpec>& ensemble,
                                   const TimeGrid& grid, double p, double theta,
                                   const MonteCarloSpec& mc, std::size_t refinements) {
    require(!ensemble.empty(), "estimate_constant: empty ensemble");
    ConstantEstimate out;
    out.ensemble = "standard(" + std::to_string(ensemble.size()) + ")";
    for (std::size_t e = 0; e < ensemble.size(); ++e) {
        MonteCarloSpec member = mc;
        member.seed = derive_seed(mc.seed ^ 0x5EED5EED5EED5EEDULL, e);
        out.members.push_back(maxreg_ratio(model, ensemble[e], grid, p, theta, member));
        if (e == 0 || out.members.back().ratio > out.members[out.witness].ratio) {
            out.witness = e;
        }
    }
    out.sup = out.members[out.witness];
    const auto& w = ensemble[out.witness];
    MonteCarloSpec wmc = mc;
    wmc.seed = derive_seed(mc.seed ^ 0x5EED5EED5EED5EEDULL, out.witness);
    std::size_t factor = 1;
    for (std::size_t r = 0; r <= refinements; ++r) {
        IntegrandSpec refined{w.base.refined(factor), w.feedback};
        out.dt_trace.push_back(maxreg_ratio(model, refined, grid.refined(factor), p, theta, wmc));
        MonteCarloSpec more = wmc;
        more.paths = wmc.paths * factor;
        out.mc_trace.push_back(maxreg_ratio(model, w, grid, p, theta, more));
        factor *= 2;
    }
    return out;
}

namespace {

std::vector<double> ladder_breaks(int modes) {
    std::vector<double> b{0.0};
    for (int j = modes + 1; j >= 0; --j) {
        b.push_back(std::pow(4.0, -j));
    }
    return b;
}

}  // namespace

ConstantEstimate estimate_constant_dyadic(int modes, double q, std::size_t count,
                                          std::uint64_t seed) {
    require(q >= 2.0 && std::isfinite(q), "estimate_constant_dyadic: q must lie in [2, inf)");
    require(count >= 1, "estimate_constant_dyadic: empty ensemble");
    const auto lambdas = dyadic_ladder(modes);
    const std::size_t k_modes = lambdas.size();
    const auto breaks = ladder_breaks(modes);
    ConstantEstimate out;
    out.ensemble = "dyadic(" + std::to_string(count) + ")";
    for (std::size_t e = 0; e < count; ++e) {
        PiecewiseSignal s;
        if (e == 0) {
            s = default_witness(modes, q);
        } else {
            s.breaks = breaks;
            s.modes = k_modes;
            s.power.assign(s.pieces() * k_modes, 0.0);
            CounterRng rng(derive_seed(seed, e));
            for (std::size_t j = 0; j < s.pieces(); ++j) {
                for (std::size_t k = 0; k < k_modes; ++k) {
                    switch (e % 3) {
                        case 1:  // each mode active on its own scale
                            s.at(j, k) = (j == k_modes - k) ? lambdas[k] : 0.0;
                            break;
                        case 2:
                            s.at(j, k) = std::exp(2.0 * rng.normal());
                            break;
                        default:
                            s.at(j, k) = rng.uniform() < 0.3 ? std::exp(rng.normal()) : 0.0;
                            break;
                    }
                }
            }
            if (std::all_of(s.power.begin(), s.power.end(), [](double v) { return v == 0.0; })) {
                s.at(0, 0) = 1.0;
            }
        }
        const double num = gaussian_moment_power(s, lambdas, q, 0.0, 0.5);
        const double den = signal_norm_power(s, q, q);
        RatioStatistic r;
        r.numerator = std::pow(num, 1.0 / q);
        r.denominator = std::pow(den, 1.0 / q);
        r.ratio = r.numerator / r.denominator;
        r.horizon = s.breaks.back();
        r.modes = k_modes;
        r.p = q;
        r.q = q;
        r.gamma = 0.5;
        out.members.push_back(r);
        if (e == 0 || r.ratio > out.members[out.witness].ratio) {
            out.witness = e;
        }
    }
    out.sup = out.members[out.witness];
    return out;
}

MaximalEstimate maximal_estimate_probe(const SpectralModel& model, const IntegrandSpec& g,
                                       const TimeGrid& grid, double p, const MonteCarloSpec& mc) {
    require(model.invertible(), "maximal_estimate_probe: the model must be invertible");
    require(p > 2.0 && std::isfinite(p), "maximal_estimate_probe: p must lie in (2, inf)");
    require(g.base.cells() == grid.steps() && g.base.modes() == model.size(),
            "maximal_estimate_probe: integrand shape mismatch");
    require(mc.paths >= 1, "maximal_estimate_probe: need at least one path");
    const InterpNormEvaluator norm(model, 0.5 - 1.0 / p, p);
    struct Sample {
        double sup = 0.0;
        double end = 0.0;
        double den = 0.0;
    };
    const auto samples = map_paths(mc.paths, mc.seed, mc.threads, [&](std::size_t, std::uint64_t s) {
        const auto noise = sample_noise(grid, g.base.dims(), s);
        const auto realized = g.realize(noise);
        const auto u = stoch_convolution(model, realized, noise, 0.0, 0.0);
        Sample r;
        for (std::size_t n = 0; n <= grid.steps(); ++n) {
            r.sup = std::max(r.sup, norm(u.row(n)));
        }
        r.end = std::pow(norm(u.row(grid.steps())), p);
        r.sup = std::pow(r.sup, p);
        r.den = std::pow(step_norm(model, realized, grid, p), p);
        return r;
    });
    std::vector<double> sup(samples.size());
    std::vector<double> end(samples.size());
    std::vector<double> den(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        sup[i] = samples[i].sup;
        end[i] = samples[i].end;
        den[i] = samples[i].den;
    }
    MaximalEstimate out;
    auto& st = out.stat;
    st.numerator = std::pow(mean_estimate(sup).mean, 1.0 / p);
    st.denominator = std::pow(mean_estimate(den).mean, 1.0 / p);
    out.endpoint_numerator = std::pow(mean_estimate(end).mean, 1.0 / p);
    if (st.denominator > 0.0) {
        const auto ratio = moment_ratio(sup, den, p);
        st.ratio = ratio.mean;
        st.stderr_ratio = ratio.stderr_mean;
    }
    st.horizon = grid.horizon();
    st.steps = grid.steps();
    st.dt = grid.dt();
    st.n_mc = mc.paths;
    st.modes = model.size();
    st.p = p;
    st.q = model.space_exponent();
    st.theta = 0.5 - 1.0 / p;
    st.gamma = 0.0;
    return out;
}

}  // namespace smr
