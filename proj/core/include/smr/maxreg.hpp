// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "smr/spectral.hpp"
#include "smr/statistics.hpp"
#include "smr/stochastic.hpp"

namespace smr {

//---------------------------------------------------------------------------//
// Deterministic integrands
//---------------------------------------------------------------------------//

/// Deterministic integrand with scalar noise, piecewise constant on arbitrary
/// breakpoints 0 = b_0 < ... < b_J and zero after b_J. `power(j, k)` holds
/// sum_h |g_{k,h}|^2 on [b_j, b_{j+1}).
struct PiecewiseSignal {
    std::vector<double> breaks;
    std::size_t modes = 0;
    std::vector<double> power;

    [[nodiscard]] std::size_t pieces() const noexcept {
        return breaks.empty() ? 0 : breaks.size() - 1;
    }
    [[nodiscard]] double at(std::size_t j, std::size_t k) const { return power[j * modes + k]; }
    double& at(std::size_t j, std::size_t k) { return power[j * modes + k]; }

    static PiecewiseSignal from_process(const StepProcess& g, const TimeGrid& grid);
};

/// Variance of one mode of A^gamma S_theta <> g at time t, for eigenvalue lambda:
/// lambda^{2 gamma} / Gamma(1-theta)^2 int_0^t (t-s)^{-2 theta} e^{-2 lambda (t-s)} |g(s)|^2 ds.
class ModeVariance {
public:
    ModeVariance(const PiecewiseSignal& signal, std::size_t mode, double lambda, double theta,
                 double gamma);
    double operator()(double t) const;

private:
    const PiecewiseSignal* signal_;
    std::size_t mode_;
    double lambda_;
    double theta_;
    double scale_;
    std::vector<double> at_breaks_;  // theta = 0: variance at each breakpoint
};

/// int_0^inf ||g(t)||_{l^q}^p dt (p-th power of the L^p(l^q) norm).
double signal_norm_power(const PiecewiseSignal& signal, double p, double q);

/// int_0^inf (sum_k sigma_k(t)^q)^{p/q} dt with sigma_k^2 the mode variances.
double square_function_power(const PiecewiseSignal& signal, std::span<const double> lambdas,
                             double p, double q, double theta, double gamma);

/// E int_0^inf ||U(t)||_q^q dt = m_q int sum_k sigma_k(t)^q dt (Gaussian absolute moments).
double gaussian_moment_power(const PiecewiseSignal& signal, std::span<const double> lambdas,
                             double q, double theta, double gamma);

/// E|N(0,1)|^q.
double gaussian_abs_moment(double q);

//---------------------------------------------------------------------------//
// Maximal-regularity probes
//---------------------------------------------------------------------------//

inline constexpr const char* kOutsideHypotheses = "outside theorem hypotheses";

/// Validates the exponent pair: p in (2, inf) or p = q = 2; p = 2 < q passes with a flag.
std::string check_maxreg_exponents(double p, double q);

/// (E ||A^{1/2-theta} S_theta <> G||_{L^p(R+; L^q)}^p)^{1/p} / (E ||G||_{L^p(L^q(H))}^p)^{1/p}.
/// The solution norm includes the free decay after T. Deterministic G with p = q (on a
/// transform-free model, or q = 2) is evaluated exactly without sampling.
RatioStatistic maxreg_ratio(const SpectralModel& model, const IntegrandSpec& g,
                            const TimeGrid& grid, double p, double theta,
                            const MonteCarloSpec& mc);

/// ||A^{1/2+delta} S <> G|| / ||A^delta G|| in the same norms.
RatioStatistic higher_regularity_shift(const SpectralModel& model, const IntegrandSpec& g,
                                       const TimeGrid& grid, double delta, double p,
                                       const MonteCarloSpec& mc);

struct ConstantEstimate {
    RatioStatistic sup;
    std::size_t witness = 0;
    std::vector<RatioStatistic> members;
    std::vector<RatioStatistic> dt_trace;  // witness under successive grid refinement
    std::vector<RatioStatistic> mc_trace;  // witness under successive path doubling
    std::string ensemble;
};

/// Standard test ensemble on a grid: constant, random, windowed, single-mode,
/// and (when feedback != 0) adapted members.
std::vector<IntegrandSpec> standard_ensemble(std::size_t modes, const TimeGrid& grid,
                                             std::size_t dims, std::size_t count,
                                             std::uint64_t seed, double feedback = 0.5);

/// Sup of maxreg_ratio over the ensemble plus refinement traces of the witness.
ConstantEstimate estimate_constant(const SpectralModel& model,
                                   const std::vector<IntegrandSpec>& ensemble,
                                   const TimeGrid& grid, double p, double theta,
                                   const MonteCarloSpec& mc, std::size_t refinements = 2);

/// Dyadic-ladder variant for p = q: exact moments over piecewise signals at the
/// ladder's scales (no time grid).
ConstantEstimate estimate_constant_dyadic(int modes, double q, std::size_t count,
                                          std::uint64_t seed);

/// (E max_n ||U(t_n)||_{D_A(1/2-1/p, p)}^p)^{1/p} / (E ||G||^p)^{1/p} with U = S <> G.
struct MaximalEstimate {
    RatioStatistic stat;
    double endpoint_numerator = 0.0;  // (E ||U(T)||^p)^{1/p} in the same norm
};

MaximalEstimate maximal_estimate_probe(const SpectralModel& model, const IntegrandSpec& g,
                                       const TimeGrid& grid, double p, const MonteCarloSpec& mc);

//---------------------------------------------------------------------------//
// Counterexample ladder
//---------------------------------------------------------------------------//

/// Default witness: g_k = sqrt(v_k / eps) on [0, eps], v_k = K^{-2/q}, eps = 4^{-K-1}.
PiecewiseSignal default_witness(int modes, double q);

/// Closed-form per-window contribution (e^{-1} - e^{-2}) / 2.
double window_constant();

struct CounterexampleRow {
    int modes = 0;
    double ratio2 = 0.0;        // p = 2 square-function side over data side
    double lower_bound = 0.0;   // window_constant() * K^{1-2/q}
    double control_ratio = 0.0; // p = q exact-moment ratio on the same witness
    double search_ratio2 = 0.0; // best ratio^2 after coordinate ascent (0 if not run)
};

/// Deterministic evaluation on the ladder lambda_k = 4^k for each K.
std::vector<CounterexampleRow> counterexample_probe(double q, std::span<const int> ks,
                                                    std::size_t search_sweeps = 0);

/// Coordinate ascent over signals on dyadic pieces; returns the best ratio^2.
double counterexample_search(double q, int modes, std::size_t sweeps,
                             PiecewiseSignal* best = nullptr);

/// 2 int_0^inf ||Lambda e^{-2 Lambda t} v||_{l^{q/2}} dt on lambda_k = 4^k.
double deterministic_l1_probe(double q, std::span<const double> v);

/// Ladder 4^k, k = 1..K (K <= 24).
std::vector<double> dyadic_ladder(int modes);

//---------------------------------------------------------------------------//
// Factorization
//---------------------------------------------------------------------------//

/// (1/Gamma(theta)) int_0^t (t-s)^{theta-1} S(t-s) f(s) ds at every grid point, with f
/// piecewise constant (left-endpoint value f(t_i) on [t_i, t_{i+1})) and the kernel
/// integrated exactly on each cell.
FieldPath fractional_integral(const SpectralModel& model, double theta, const FieldPath& f,
                              const TimeGrid& grid);

struct BetaCheck {
    double raw = 0.0;
    double normalized = 0.0;
};

/// int_r^t (t-s)^{theta-1} (s-r)^{-theta} ds and its value over Gamma(theta) Gamma(1-theta).
BetaCheck beta_identity_check(double theta, double r, double t);

/// Relative L^2-in-time error between C^{-theta}(A^{1/2-theta} S_theta <> G) and
/// A^{1/2-theta} S <> G on one noise path.
double factorization_check(const SpectralModel& model, const StepProcess& g,
                           const NoisePath& noise, double theta);

struct SecondMoments {
    double factorized = 0.0;
    double direct = 0.0;
};

/// Second moments at time t of both sides for one mode with G = 1, by double integrals.
SecondMoments factorization_second_moments(double lambda, double theta, double t);

}  // namespace smr
