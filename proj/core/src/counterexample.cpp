// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "smr/error.hpp"
#include "smr/maxreg.hpp"
#include "smr/quadrature.hpp"

namespace smr {

namespace {

constexpr int kMaxLadder = 24;

void check_ladder(int modes) {
    require(modes >= 1, "ladder: need at least one mode");
    require(modes <= kMaxLadder, "ladder: K must not exceed 24 (eigenvalues 4^K overflow the "
                                 "double-precision range of the probe)");
}

double ratio2_of(const PiecewiseSignal& s, std::span<const double> lambdas, double q) {
    return square_function_power(s, lambdas, 2.0, q, 0.0, 0.5) / signal_norm_power(s, 2.0, q);
}

}  // namespace

std::vector<double> dyadic_ladder(int modes) {
    check_ladder(modes);
    std::vector<double> out(static_cast<std::size_t>(modes));
    for (int k = 1; k <= modes; ++k) {
        out[static_cast<std::size_t>(k - 1)] = std::ldexp(1.0, 2 * k);
    }
    return out;
}

double window_constant() { return 0.5 * (std::exp(-1.0) - std::exp(-2.0)); }

PiecewiseSignal default_witness(int modes, double q) {
    check_ladder(modes);
    require(q > 2.0 && std::isfinite(q), "witness: q must lie in (2, inf)");
    const double eps = std::ldexp(1.0, -2 * (modes + 1));
    const double v = std::pow(static_cast<double>(modes), -2.0 / q);
    PiecewiseSignal s;
    s.breaks = {0.0, eps};
    s.modes = static_cast<std::size_t>(modes);
    s.power.assign(s.modes, v / eps);
    return s;
}

std::vector<CounterexampleRow> counterexample_probe(double q, std::span<const int> ks,
                                                    std::size_t search_sweeps) {
    require(q > 2.0 && std::isfinite(q), "counterexample_probe: q must lie in (2, inf)");
    require(!ks.empty(), "counterexample_probe: no K values");
    std::vector<CounterexampleRow> rows;
    for (int k_modes : ks) {
        check_ladder(k_modes);
        const auto lambdas = dyadic_ladder(k_modes);
        const auto w = default_witness(k_modes, q);
        CounterexampleRow row;
        row.modes = k_modes;
        row.ratio2 = ratio2_of(w, lambdas, q);
        row.lower_bound = window_constant() * std::pow(static_cast<double>(k_modes), 1.0 - 2.0 / q);
        row.control_ratio = std::pow(
            gaussian_moment_power(w, lambdas, q, 0.0, 0.5) / signal_norm_power(w, q, q), 1.0 / q);
        if (search_sweeps > 0) {
            row.search_ratio2 = counterexample_search(q, k_modes, search_sweeps);
        }
        rows.push_back(row);
    }
    return rows;
}

double counterexample_search(double q, int modes, std::size_t sweeps, PiecewiseSignal* best) {
    check_ladder(modes);
    require(q > 2.0 && std::isfinite(q), "counterexample_search: q must lie in (2, inf)");
    const auto lambdas = dyadic_ladder(modes);
    const auto start = default_witness(modes, q);

    // Dyadic pieces [0, 4^{-K-1}], [4^{-j-1}, 4^{-j}], ..., [1/4, 1].
    PiecewiseSignal s;
    s.breaks = {0.0};
    for (int j = modes + 1; j >= 0; --j) {
        s.breaks.push_back(std::ldexp(1.0, -2 * j));
    }
    s.modes = start.modes;
    s.power.assign(s.pieces() * s.modes, 0.0);
    for (std::size_t k = 0; k < s.modes; ++k) {
        s.at(0, k) = start.at(0, k);
    }
    double value = ratio2_of(s, lambdas, q);
    for (std::size_t sweep = 0; sweep < sweeps; ++sweep) {
        bool improved = false;
        for (std::size_t j = 0; j < s.pieces(); ++j) {
            for (std::size_t k = 0; k < s.modes; ++k) {
                const double old = s.at(j, k);
                // Same mass as the witness on this piece.
                const double ref = start.at(0, k) * s.breaks[1] / (s.breaks[j + 1] - s.breaks[j]);
                for (double trial_value : {4.0 * old, 0.25 * old, 1.5 * old, old / 1.5, 0.0, ref}) {
                    if (trial_value == old) {
                        continue;
                    }
                    s.at(j, k) = trial_value;
                    if (signal_norm_power(s, 2.0, q) <= 0.0) {
                        s.at(j, k) = old;
                        continue;
                    }
                    const double trial = ratio2_of(s, lambdas, q);
                    if (trial > value * (1.0 + 1e-9)) {
                        value = trial;
                        improved = true;
                        break;
                    }
                    s.at(j, k) = old;
                }
            }
        }
        if (!improved) {
            break;
        }
    }
    if (best != nullptr) {
        *best = s;
    }
    return value;
}

double deterministic_l1_probe(double q, std::span<const double> v) {
    require(q > 2.0 && std::isfinite(q), "deterministic_l1_probe: q must lie in (2, inf)");
    const int modes = static_cast<int>(v.size());
    const auto lambdas = dyadic_ladder(modes);
    const double r = 0.5 * q;
    double norm = 0.0;
    for (double x : v) {
        require(x >= 0.0 && std::isfinite(x), "deterministic_l1_probe: v must be nonnegative");
        norm += std::pow(x, r);
    }
    require(std::abs(std::pow(norm, 1.0 / r) - 1.0) <= 1e-9,
            "deterministic_l1_probe: v must have unit l^{q/2} norm");
    const auto f = [&](double t) {
        double s = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            s += std::pow(lambdas[k] * std::exp(-2.0 * lambdas[k] * t) * v[k], r);
        }
        return 2.0 * std::pow(s, 1.0 / r);
    };
    std::vector<double> breaks;
    for (double lambda : lambdas) {
        breaks.push_back(0.5 / lambda);
        breaks.push_back(1.0 / lambda);
    }
    const auto res = quad::integrate_half_line(f, breaks, 1e-12);
    if (!res.converged) {
        throw NumericalError("deterministic_l1_probe: quadrature did not converge");
    }
    return res.value;
}

}  // namespace smr
