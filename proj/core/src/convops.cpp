// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "smr/convops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "smr/error.hpp"
#include "smr/parallel.hpp"
#include "smr/quadrature.hpp"
#include "smr/rng.hpp"

namespace smr {

namespace {

// forcing[n * K + k] = sum_h G[n][k][h] dW[n][h].
std::vector<double> cell_forcing(const StepProcess& g, const NoisePath& noise) {
    require(g.cells() == noise.grid().steps(), "step process cell count differs from the grid");
    require(g.dims() == noise.dims(), "step process noise dimension differs from the noise");
    std::vector<double> f(g.cells() * g.modes(), 0.0);
    for (std::size_t i = 0; i < g.cells(); ++i) {
        for (std::size_t k = 0; k < g.modes(); ++k) {
            double s = 0.0;
            for (std::size_t h = 0; h < g.dims(); ++h) {
                s += g.at(i, k, h) * noise.dw(i, h);
            }
            f[i * g.modes() + k] = s;
        }
    }
    return f;
}

// prefix[(n) * K + k] = sum_{i<n} forcing[i][k], n = 0..N.
std::vector<double> prefix_sums(const std::vector<double>& forcing, std::size_t cells,
                                std::size_t modes) {
    std::vector<double> p((cells + 1) * modes, 0.0);
    for (std::size_t n = 0; n < cells; ++n) {
        for (std::size_t k = 0; k < modes; ++k) {
            p[(n + 1) * modes + k] = p[n * modes + k] + forcing[n * modes + k];
        }
    }
    return p;
}

}  // namespace

//---------------------------------------------------------------------------//
// J(r), I(k)
//---------------------------------------------------------------------------//

std::size_t window_cells(double r, double dt) {
    return static_cast<std::size_t>(std::llround(r / dt));
}

FieldPath apply_J(double r, const StepProcess& g, const NoisePath& noise) {
    const double dt = noise.grid().dt();
    require(std::isfinite(r) && r >= dt * (1.0 - 1e-9), "apply_J: window r must be >= dt");
    const std::size_t w = window_cells(r, dt);
    const auto forcing = cell_forcing(g, noise);
    const auto prefix = prefix_sums(forcing, g.cells(), g.modes());
    const double scale = 1.0 / std::sqrt(r);
    FieldPath out(g.cells() + 1, g.modes());
    for (std::size_t n = 1; n <= g.cells(); ++n) {
        const std::size_t start = n > w ? n - w : 0;
        for (std::size_t k = 0; k < g.modes(); ++k) {
            out.at(n, k) = scale * (prefix[n * g.modes() + k] - prefix[start * g.modes() + k]);
        }
    }
    return out;
}

FieldPath apply_I(const KernelFn& kernel, const StepProcess& g, const NoisePath& noise) {
    const auto forcing = cell_forcing(g, noise);
    const std::size_t n_steps = g.cells();
    const double dt = noise.grid().dt();
    std::vector<double> weight(n_steps + 1, 0.0);
    for (std::size_t j = 1; j <= n_steps; ++j) {
        weight[j] = kernel.value(static_cast<double>(j) * dt);
    }
    FieldPath out(n_steps + 1, g.modes());
    for (std::size_t n = 1; n <= n_steps; ++n) {
        for (std::size_t i = 0; i < n; ++i) {
            const double w = weight[n - i];
            if (w == 0.0) {
                continue;
            }
            for (std::size_t k = 0; k < g.modes(); ++k) {
                out.at(n, k) += w * forcing[i * g.modes() + k];
            }
        }
    }
    return out;
}

FieldPath reduction_quadrature(const KernelFn& kernel, const StepProcess& g,
                               const NoisePath& noise) {
    const std::size_t n_steps = g.cells();
    const std::size_t modes = g.modes();
    const double dt = noise.grid().dt();
    // sqrt(r) from the kernel side cancels r^{-1/2} inside J(r).
    quad::Integrand dk = [&](double r) { return kernel.derivative(r); };
    // cell[w] = int over the r-cell whose snapped window has w cells.
    std::vector<double> cell(n_steps + 1, 0.0);
    for (std::size_t w = 1; w <= n_steps; ++w) {
        const auto res = quad::integrate(dk, (static_cast<double>(w) - 0.5) * dt,
                                         (static_cast<double>(w) + 0.5) * dt, 1e-14);
        if (!res.converged) {
            throw NumericalError("reduction_quadrature: r-cell quadrature did not converge");
        }
        cell[w] = res.value;
    }
    const auto tail = quad::integrate_to_infinity(dk, (static_cast<double>(n_steps) + 0.5) * dt,
                                                  1e-14);
    if (!tail.converged) {
        throw NumericalError("reduction_quadrature: tail quadrature did not converge");
    }
    // beyond[n] = int over all r whose window covers every cell before t_n.
    std::vector<double> beyond(n_steps + 2, 0.0);
    beyond[n_steps + 1] = tail.value;
    for (std::size_t n = n_steps + 1; n-- > 1;) {
        beyond[n] = beyond[n + 1] + cell[n];
    }

    const auto forcing = cell_forcing(g, noise);
    const auto prefix = prefix_sums(forcing, n_steps, modes);
    FieldPath out(n_steps + 1, modes);
    for (std::size_t n = 1; n <= n_steps; ++n) {
        for (std::size_t k = 0; k < modes; ++k) {
            const double total = prefix[n * modes + k];
            double s = -beyond[n] * total;
            for (std::size_t w = 1; w < n; ++w) {
                s -= cell[w] * (total - prefix[(n - w) * modes + k]);
            }
            out.at(n, k) = s;
        }
    }
    return out;
}

double reduction_mismatch(const KernelFn& kernel, const StepProcess& g, const NoisePath& noise) {
    const auto direct = apply_I(kernel, g, noise);
    const auto reduced = reduction_quadrature(kernel, g, noise);
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t n = 1; n < direct.times(); ++n) {
        for (std::size_t k = 0; k < direct.modes(); ++k) {
            const double d = direct.at(n, k) - reduced.at(n, k);
            diff += d * d;
            ref += direct.at(n, k) * direct.at(n, k);
        }
    }
    require(ref > 0.0, "reduction_mismatch: I(k)G vanishes identically");
    return std::sqrt(diff / ref);
}

//---------------------------------------------------------------------------//
// Rademacher sums
//---------------------------------------------------------------------------//

double block_norm(const NormBlock& x, double p, double q) {
    require(x.paths >= 1, "block_norm: empty block");
    double sum = 0.0;
    for (std::size_t w = 0; w < x.paths; ++w) {
        for (std::size_t n = 0; n < x.times; ++n) {
            const std::span<const double> row(x.data.data() + (w * x.times + n) * x.modes,
                                              x.modes);
            sum += x.dt * std::pow(lq_norm(row, q), p);
        }
    }
    return std::pow(sum / static_cast<double>(x.paths), 1.0 / p);
}

namespace {

void check_same_shape(std::span<const NormBlock> xs) {
    require(!xs.empty(), "empty block family");
    for (const auto& x : xs) {
        require(x.paths == xs[0].paths && x.times == xs[0].times && x.modes == xs[0].modes,
                "blocks in one Rademacher sum must share a shape");
    }
}

// Visits sign vectors for the first `count` blocks; r_0 = +1 by symmetry of the norm.
template <class Visit>
void for_each_sign(std::size_t count, const SignAverage& signs, Visit&& visit) {
    std::vector<double> r(count, 1.0);
    if (count <= signs.exact_limit) {
        const std::uint64_t total = count == 0 ? 1 : (std::uint64_t{1} << (count - 1));
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            for (std::size_t n = 1; n < count; ++n) {
                r[n] = ((mask >> (n - 1)) & 1U) != 0 ? -1.0 : 1.0;
            }
            visit(std::span<const double>(r));
        }
        return;
    }
    CounterRng rng(mix64(signs.seed ^ 0xA5A5A5A5A5A5A5A5ULL));
    for (std::size_t s = 0; s < signs.samples; ++s) {
        for (std::size_t n = 1; n < count; ++n) {
            r[n] = rng.rademacher();
        }
        visit(std::span<const double>(r));
    }
}

double signed_sum_norm(std::span<const NormBlock> xs, std::span<const double> r, double p,
                       double q, NormBlock& scratch) {
    std::fill(scratch.data.begin(), scratch.data.end(), 0.0);
    for (std::size_t n = 0; n < xs.size(); ++n) {
        const double c = r[n];
        const auto& src = xs[n].data;
        for (std::size_t j = 0; j < src.size(); ++j) {
            scratch.data[j] += c * src[j];
        }
    }
    return block_norm(scratch, p, q);
}

}  // namespace

double rademacher_norm(std::span<const NormBlock> xs, double p, double q,
                       const SignAverage& signs) {
    check_same_shape(xs);
    NormBlock scratch(xs[0].paths, xs[0].times, xs[0].modes, xs[0].dt);
    double sum = 0.0;
    std::size_t count = 0;
    for_each_sign(xs.size(), signs, [&](std::span<const double> r) {
        const double v = signed_sum_norm(xs, r, p, q, scratch);
        sum += v * v;
        ++count;
    });
    return std::sqrt(sum / static_cast<double>(count));
}

double square_sum_norm(std::span<const NormBlock> xs, double p, double q) {
    check_same_shape(xs);
    NormBlock s(xs[0].paths, xs[0].times, xs[0].modes, xs[0].dt);
    for (const auto& x : xs) {
        for (std::size_t j = 0; j < x.data.size(); ++j) {
            s.data[j] += x.data[j] * x.data[j];
        }
    }
    for (double& v : s.data) {
        v = std::sqrt(v);
    }
    return block_norm(s, p, q);
}

double khintchine_upper(double q) {
    require(q >= 2.0, "khintchine_upper: q must be >= 2");
    return std::sqrt(2.0) * std::pow(std::tgamma(0.5 * (q + 1.0)) / std::sqrt(std::numbers::pi), 1.0 / q);
}

double rbound_ratio(std::span<const NormBlock> inputs, std::span<const NormBlock> outputs,
                    double p, double q, const SignAverage& signs) {
    require(inputs.size() == outputs.size(), "rbound_ratio: input/output count mismatch");
    const double den = rademacher_norm(inputs, p, q, signs);
    require(den > 0.0, "rbound_ratio: zero input configuration");
    return rademacher_norm(outputs, p, q, signs) / den;
}

//---------------------------------------------------------------------------//
// rbound_estimate
//---------------------------------------------------------------------------//

namespace {

StepProcess make_input(InputKind kind, std::size_t cells, std::size_t modes, CounterRng& rng) {
    StepProcess g(cells, modes, 1);
    if (kind == InputKind::kGaussian) {
        for (double& v : g.values()) {
            v = rng.normal();
        }
        return g;
    }
    // A short burst on one mode.
    const auto i0 = static_cast<std::size_t>(rng.uniform() * static_cast<double>(cells)) % cells;
    const auto k0 = static_cast<std::size_t>(rng.uniform() * static_cast<double>(modes)) % modes;
    const std::size_t len =
        1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(cells / 4 + 1));
    for (std::size_t i = i0; i < std::min(cells, i0 + len); ++i) {
        g.at(i, k0, 0) = 1.0;
    }
    return g;
}

NormBlock deterministic_block(const StepProcess& g, double dt) {
    NormBlock b(1, g.cells(), g.modes(), dt);
    for (std::size_t i = 0; i < g.cells(); ++i) {
        for (std::size_t k = 0; k < g.modes(); ++k) {
            b.at(0, i, k) = g.at(i, k, 0);
        }
    }
    return b;
}

// Sign-averaged norms of every prefix sum X_1 + ... + X_j, j = 1..N. Sampled prefixes
// share one stream of sign vectors and are accumulated incrementally.
std::vector<double> prefix_rademacher_norms(const std::vector<NormBlock>& xs, double p, double q,
                                            const SignAverage& signs) {
    const std::size_t count = xs.size();
    std::vector<double> out(count, 0.0);
    const std::size_t exact = std::min(count, signs.exact_limit);
    for (std::size_t j = 1; j <= exact; ++j) {
        out[j - 1] = rademacher_norm(std::span<const NormBlock>(xs.data(), j), p, q, signs);
    }
    if (count <= signs.exact_limit) {
        return out;
    }
    NormBlock sum(xs[0].paths, xs[0].times, xs[0].modes, xs[0].dt);
    std::vector<double> acc(count, 0.0);
    CounterRng rng(mix64(signs.seed ^ 0xA5A5A5A5A5A5A5A5ULL));
    for (std::size_t s = 0; s < signs.samples; ++s) {
        std::fill(sum.data.begin(), sum.data.end(), 0.0);
        for (std::size_t n = 0; n < count; ++n) {
            const double r = n == 0 ? 1.0 : rng.rademacher();
            const auto& src = xs[n].data;
            for (std::size_t j = 0; j < src.size(); ++j) {
                sum.data[j] += r * src[j];
            }
            if (n + 1 > signs.exact_limit) {
                const double v = block_norm(sum, p, q);
                acc[n] += v * v;
            }
        }
    }
    for (std::size_t n = signs.exact_limit; n < count; ++n) {
        out[n] = std::sqrt(acc[n] / static_cast<double>(signs.samples));
    }
    return out;
}

}  // namespace

RboundResult rbound_estimate(const OperatorFamilySpec& family, const RboundEnsembleSpec& ensemble,
                             std::size_t trials, const SignAverage& signs) {
    require(trials >= 1, "rbound_estimate: trials must be >= 1");
    require(family.p >= 1.0 && family.q >= 1.0, "rbound_estimate: exponents must be >= 1");
    std::size_t members = 0;
    switch (family.kind) {
        case FamilyKind::kIdentity:
            members = std::max<std::size_t>(1, family.parameters.size());
            break;
        case FamilyKind::kScalar:
        case FamilyKind::kJ:
            members = family.parameters.size();
            break;
        case FamilyKind::kI:
            members = family.kernels.size();
            break;
    }
    require(members >= 1, "rbound_estimate: empty family");
    const TimeGrid& grid = ensemble.grid;
    const double dt = grid.dt();
    if (family.kind == FamilyKind::kJ) {
        for (double r : family.parameters) {
            require(r >= dt * (1.0 - 1e-9), "rbound_estimate: J window below dt");
        }
    }
    const bool stochastic = family.kind == FamilyKind::kJ || family.kind == FamilyKind::kI;

    RboundResult result;
    result.exact_signs = members <= signs.exact_limit;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        CounterRng rng(derive_seed(ensemble.seed, trial));
        InputKind kind = ensemble.inputs;
        if (kind == InputKind::kMixed) {
            kind = trial % 2 == 0 ? InputKind::kGaussian : InputKind::kSpiked;
        }
        std::vector<StepProcess> gs;
        std::vector<NormBlock> in;
        for (std::size_t n = 0; n < members; ++n) {
            gs.push_back(make_input(kind, grid.steps(), ensemble.modes, rng));
            in.push_back(deterministic_block(gs.back(), dt));
        }

        std::vector<NormBlock> out;
        if (!stochastic) {
            for (std::size_t n = 0; n < members; ++n) {
                NormBlock b = in[n];
                const double c = family.kind == FamilyKind::kScalar ? family.parameters[n] : 1.0;
                for (double& v : b.data) {
                    v *= c;
                }
                out.push_back(std::move(b));
            }
        } else {
            for (std::size_t n = 0; n < members; ++n) {
                out.emplace_back(ensemble.paths, grid.steps(), ensemble.modes, dt);
            }
            const std::uint64_t noise_master = derive_seed(ensemble.seed ^ 0x6E6F697365ULL, trial);
            parallel_for(ensemble.paths, ensemble.threads, [&](std::size_t w) {
                const auto noise = sample_noise(grid, 1, derive_seed(noise_master, w));
                for (std::size_t n = 0; n < members; ++n) {
                    const FieldPath y = family.kind == FamilyKind::kJ
                                            ? apply_J(family.parameters[n], gs[n], noise)
                                            : apply_I(family.kernels[n], gs[n], noise);
                    for (std::size_t t = 0; t < grid.steps(); ++t) {
                        for (std::size_t k = 0; k < ensemble.modes; ++k) {
                            out[n].at(w, t, k) = y.at(t, k);
                        }
                    }
                }
            });
        }

        // Candidates: every prefix of the member list and every singleton.
        SignAverage trial_signs = signs;
        trial_signs.seed = derive_seed(signs.seed, trial);
        const auto in_norms = prefix_rademacher_norms(in, family.p, family.q, trial_signs);
        const auto out_norms = prefix_rademacher_norms(out, family.p, family.q, trial_signs);
        double best = 0.0;
        for (std::size_t j = 0; j < members; ++j) {
            require(in_norms[j] > 0.0, "rbound_estimate: zero input configuration");
            best = std::max(best, out_norms[j] / in_norms[j]);
            const double single_in = block_norm(in[j], family.p, family.q);
            if (single_in > 0.0) {
                best = std::max(best, block_norm(out[j], family.p, family.q) / single_in);
            }
        }
        result.per_trial.push_back(best);
        result.r_hat = std::max(result.r_hat, best);
    }
    return result;
}

//---------------------------------------------------------------------------//
// Maximal functions
//---------------------------------------------------------------------------//

std::vector<double> one_sided_maximal(std::span<const double> f) {
    const std::size_t n = f.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + std::abs(f[i]);
    }
    std::vector<double> m(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double best = 0.0;
        for (std::size_t j = i + 1; j <= n; ++j) {
            best = std::max(best, (prefix[j] - prefix[i]) / static_cast<double>(j - i));
        }
        m[i] = best;
    }
    return m;
}

VectorStepFunction maximal_vector(const VectorStepFunction& f) {
    VectorStepFunction out{f.cells, f.components, std::vector<double>(f.data.size(), 0.0)};
    std::vector<double> column(f.cells);
    for (std::size_t k = 0; k < f.components; ++k) {
        for (std::size_t n = 0; n < f.cells; ++n) {
            column[n] = f.at(n, k);
        }
        const auto m = one_sided_maximal(column);
        for (std::size_t n = 0; n < f.cells; ++n) {
            out.at(n, k) = m[n];
        }
    }
    return out;
}

double lr_ls_norm(const VectorStepFunction& f, double r, double s, double dt) {
    double sum = 0.0;
    for (std::size_t n = 0; n < f.cells; ++n) {
        const std::span<const double> row(f.data.data() + n * f.components, f.components);
        sum += dt * std::pow(lq_norm(row, s), r);
    }
    return std::pow(sum, 1.0 / r);
}

std::vector<VectorStepFunction> random_step_functions(std::size_t count, std::size_t cells,
                                                      std::size_t components,
                                                      std::uint64_t seed) {
    require(cells >= 1 && components >= 1, "random_step_functions: empty shape");
    std::vector<VectorStepFunction> out;
    out.reserve(count);
    for (std::size_t e = 0; e < count; ++e) {
        CounterRng rng(derive_seed(seed, e));
        VectorStepFunction f{cells, components, std::vector<double>(cells * components, 0.0)};
        for (std::size_t k = 0; k < components; ++k) {
            const int plateaus = 1 + static_cast<int>(rng.uniform() * 3.0);
            for (int j = 0; j < plateaus; ++j) {
                const auto a = static_cast<std::size_t>(rng.uniform() * static_cast<double>(cells)) % cells;
                const auto len = 1 + static_cast<std::size_t>(rng.uniform() * static_cast<double>(cells / 4 + 1));
                const double height = std::exp(rng.normal());
                for (std::size_t n = a; n < std::min(cells, a + len); ++n) {
                    f.at(n, k) += height;
                }
            }
        }
        out.push_back(std::move(f));
    }
    return out;
}

RatioStatistic fefferman_stein_check(double r, double s,
                                     std::span<const VectorStepFunction> ensemble, double dt) {
    require(r > 1.0 && std::isfinite(r), "fefferman_stein_check: r must lie in (1, inf)");
    require(s > 1.0, "fefferman_stein_check: s must lie in (1, inf]");
    require(!ensemble.empty(), "fefferman_stein_check: empty ensemble");
    RatioStatistic best;
    best.ratio = -1.0;
    for (const auto& f : ensemble) {
        const double den = lr_ls_norm(f, r, s, dt);
        if (den == 0.0) {
            continue;
        }
        const double num = lr_ls_norm(maximal_vector(f), r, s, dt);
        if (num / den > best.ratio) {
            best.numerator = num;
            best.denominator = den;
            best.ratio = num / den;
        }
    }
    require(best.ratio >= 0.0, "fefferman_stein_check: every member vanishes");
    best.p = r;
    best.q = s;
    best.modes = ensemble.front().components;
    best.steps = ensemble.front().cells;
    best.dt = dt;
    best.horizon = dt * static_cast<double>(best.steps);
    best.n_mc = ensemble.size();
    return best;
}

std::vector<double> forward_average(std::span<const double> psi, std::size_t w) {
    require(w >= 1, "forward_average: window must be >= 1 cell");
    const std::size_t n = psi.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + psi[i];
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (prefix[std::min(n, i + w)] - prefix[i]) / static_cast<double>(w);
    }
    return out;
}

std::vector<double> backward_average(std::span<const double> phi, std::size_t w) {
    require(w >= 1, "backward_average: window must be >= 1 cell");
    const std::size_t n = phi.size();
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + phi[i];
    }
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t start = j + 1 > w ? j + 1 - w : 0;
        out[j] = (prefix[j + 1] - prefix[start]) / static_cast<double>(w);
    }
    return out;
}

namespace {

std::size_t grid_window(double delta, double dt) {
    const double cells = delta / dt;
    const double nearest = std::round(cells);
    require(nearest >= 1.0 && std::abs(cells - nearest) <= 1e-9 * nearest,
            "delta must be a positive multiple of dt");
    return static_cast<std::size_t>(nearest);
}

}  // namespace

DualityCheck duality_pair_check(double delta, std::span<const double> psi,
                                std::span<const double> phi, double dt) {
    require(psi.size() == phi.size(), "duality_pair_check: length mismatch");
    const std::size_t w = grid_window(delta, dt);
    const auto tpsi = forward_average(psi, w);
    const auto tphi = backward_average(phi, w);
    DualityCheck out;
    for (std::size_t i = 0; i < psi.size(); ++i) {
        out.lhs += dt * tpsi[i] * phi[i];
        out.rhs += dt * psi[i] * tphi[i];
    }
    return out;
}

SumBound dual_sum_bound(std::span<const VectorStepFunction> fs, std::span<const double> deltas,
                        double r, double s, double dt) {
    require(fs.size() == deltas.size() && !fs.empty(), "dual_sum_bound: size mismatch");
    require(r > 1.0 && s > 1.0, "dual_sum_bound: r, s must exceed 1");
    const double rc = r / (r - 1.0);
    const double sc = std::isinf(s) ? 1.0 : s / (s - 1.0);
    const std::size_t cells = fs[0].cells;
    const std::size_t comps = fs[0].components;
    VectorStepFunction lhs{cells, comps, std::vector<double>(cells * comps, 0.0)};
    VectorStepFunction rhs = lhs;
    std::vector<double> column(cells);
    for (std::size_t n = 0; n < fs.size(); ++n) {
        require(fs[n].cells == cells && fs[n].components == comps, "dual_sum_bound: shape mismatch");
        const std::size_t w = grid_window(deltas[n], dt);
        for (std::size_t k = 0; k < comps; ++k) {
            for (std::size_t i = 0; i < cells; ++i) {
                column[i] = std::abs(fs[n].at(i, k));
                rhs.at(i, k) += column[i];
            }
            const auto avg = backward_average(column, w);
            for (std::size_t i = 0; i < cells; ++i) {
                lhs.at(i, k) += avg[i];
            }
        }
    }
    return {lr_ls_norm(lhs, rc, sc, dt), lr_ls_norm(rhs, rc, sc, dt)};
}

//---------------------------------------------------------------------------//
// Multipliers
//---------------------------------------------------------------------------//

double multiplier_rbound(const DiagonalMultiplier& m, double q, std::size_t trials,
                         std::uint64_t seed) {
    require(m.cells >= 1 && m.modes >= 1, "multiplier_rbound: empty family");
    // Singleton spikes attain max |m(i, k)|.
    double best = 0.0;
    for (double v : m.values) {
        best = std::max(best, std::abs(v));
    }
    const std::size_t members = std::min<std::size_t>(m.cells, 8);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        CounterRng rng(derive_seed(seed, trial));
        std::vector<NormBlock> in;
        std::vector<NormBlock> out;
        for (std::size_t n = 0; n < members; ++n) {
            const auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(m.cells)) % m.cells;
            NormBlock x(1, 1, m.modes, 1.0);
            NormBlock y(1, 1, m.modes, 1.0);
            for (std::size_t k = 0; k < m.modes; ++k) {
                x.at(0, 0, k) = rng.normal();
                y.at(0, 0, k) = m.at(i, k) * x.at(0, 0, k);
            }
            in.push_back(std::move(x));
            out.push_back(std::move(y));
        }
        best = std::max(best, rbound_ratio(in, out, q, q, SignAverage{}));
    }
    return best;
}

MultiplierCheck multiplier_bound_check(const DiagonalMultiplier& m, const StepProcess& g,
                                       const TimeGrid& grid, double q, double r_hat) {
    require(m.cells == g.cells() && m.modes == g.modes(), "multiplier_bound_check: shape mismatch");
    StepProcess mg = g;
    for (std::size_t i = 0; i < g.cells(); ++i) {
        for (std::size_t k = 0; k < g.modes(); ++k) {
            for (std::size_t h = 0; h < g.dims(); ++h) {
                mg.at(i, k, h) *= m.at(i, k);
            }
        }
    }
    MultiplierCheck out;
    out.lhs = square_function_norm(mg, grid, q);
    out.g_norm = square_function_norm(g, grid, q);
    out.r_hat = r_hat;
    out.rhs = r_hat * out.g_norm;
    return out;
}

}  // namespace smr
