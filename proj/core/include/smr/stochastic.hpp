// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <type_traits>
#include <vector>

#include "smr/parallel.hpp"
#include "smr/rng.hpp"
#include "smr/spectral.hpp"
#include "smr/statistics.hpp"

namespace smr {

enum class NoiseScheme { kMaruyama, kExactExponential };

/// Brownian increments dW[i][h] ~ N(0, dt), plus, for the exact-exponential scheme,
/// xi[i][k][h] = int_{t_i}^{t_{i+1}} e^{-lambda_k (t_{i+1} - s)} dW_h(s).
class NoisePath {
public:
    NoisePath(TimeGrid grid, std::size_t dims, std::uint64_t seed)
        : grid_(grid), dims_(dims), seed_(seed), dw_(grid.steps() * dims, 0.0) {}

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t dims() const noexcept { return dims_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
    [[nodiscard]] NoiseScheme scheme() const noexcept { return scheme_; }

    double& dw(std::size_t i, std::size_t h) { return dw_[i * dims_ + h]; }
    [[nodiscard]] double dw(std::size_t i, std::size_t h) const { return dw_[i * dims_ + h]; }

    [[nodiscard]] bool has_aux() const noexcept { return !xi_.empty(); }
    [[nodiscard]] std::size_t aux_modes() const noexcept { return aux_lambdas_.size(); }
    [[nodiscard]] std::span<const double> aux_eigenvalues() const noexcept { return aux_lambdas_; }
    [[nodiscard]] double xi(std::size_t i, std::size_t k, std::size_t h) const {
        return xi_[(i * aux_lambdas_.size() + k) * dims_ + h];
    }

    /// W_h(t_i).
    [[nodiscard]] double brownian(std::size_t i, std::size_t h) const;

private:
    friend NoisePath sample_noise(const TimeGrid&, std::size_t, std::uint64_t,
                                  const SpectralModel*, NoiseScheme);
    friend NoisePath coarsen(const NoisePath&, std::size_t);

    TimeGrid grid_;
    std::size_t dims_;
    std::uint64_t seed_;
    NoiseScheme scheme_ = NoiseScheme::kMaruyama;
    std::vector<double> dw_;
    std::vector<double> aux_lambdas_;
    std::vector<double> xi_;
};

/// Draws one noise path. The exact-exponential scheme needs the model; its (K+1)x(K+1)
/// per-cell covariance is factored once and reused across cells.
NoisePath sample_noise(const TimeGrid& grid, std::size_t dims, std::uint64_t seed,
                       const SpectralModel* model = nullptr,
                       NoiseScheme scheme = NoiseScheme::kMaruyama);

/// Same Brownian path on a grid with `factor` times fewer cells (Maruyama data only).
NoisePath coarsen(const NoisePath& noise, std::size_t factor);

/// Adapted step process; value G[i][k][h] on [t_i, t_{i+1}).
class StepProcess {
public:
    StepProcess() = default;
    StepProcess(std::size_t cells, std::size_t modes, std::size_t dims)
        : cells_(cells), modes_(modes), dims_(dims), values_(cells * modes * dims, 0.0) {}

    [[nodiscard]] std::size_t cells() const noexcept { return cells_; }
    [[nodiscard]] std::size_t modes() const noexcept { return modes_; }
    [[nodiscard]] std::size_t dims() const noexcept { return dims_; }

    double& at(std::size_t i, std::size_t k, std::size_t h) {
        return values_[(i * modes_ + k) * dims_ + h];
    }
    [[nodiscard]] double at(std::size_t i, std::size_t k, std::size_t h) const {
        return values_[(i * modes_ + k) * dims_ + h];
    }

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

    /// Copy with every cell repeated `factor` times (same process on a finer grid).
    [[nodiscard]] StepProcess refined(std::size_t factor) const;
    /// Copy scaled by c.
    [[nodiscard]] StepProcess scaled(double c) const;

private:
    std::size_t cells_ = 0;
    std::size_t modes_ = 0;
    std::size_t dims_ = 0;
    std::vector<double> values_;
};

/// Constant value c on every cell, mode and dimension.
StepProcess constant_process(std::size_t cells, std::size_t modes, std::size_t dims, double c);

/// Independent standard normal values, one per entry, drawn from `seed`.
StepProcess random_process(std::size_t cells, std::size_t modes, std::size_t dims,
                           std::uint64_t seed);

/// Base process with an optional adapted feedback factor 1 + c tanh(W_h(t_i)).
struct IntegrandSpec {
    StepProcess base;
    double feedback = 0.0;

    [[nodiscard]] bool deterministic() const noexcept { return feedback == 0.0; }
    /// The process seen along one noise path.
    [[nodiscard]] StepProcess realize(const NoisePath& noise) const;
};

/// sum_{i: t_{i+1} <= t} sum_h G[i][.][h] dW[i][h].
SpatialField ito_integral(const StepProcess& g, const NoisePath& noise, double t);

/// A^gamma S_theta <> G at the grid points t_0..t_N; S_theta(t) = t^{-theta} S(t) / Gamma(1-theta).
FieldPath stoch_convolution(const SpectralModel& model, const StepProcess& g,
                            const NoisePath& noise, double gamma, double theta,
                            NoiseScheme scheme = NoiseScheme::kMaruyama);

/// Noise-free variance propagation of the scheme for deterministic G; returns the
/// per-mode variances of U(t_n), n = 0..N.
FieldPath propagate_variance(const SpectralModel& model, const StepProcess& g,
                             const TimeGrid& grid, double gamma, NoiseScheme scheme);

/// || (sum_i dt sum_h G[i][k][h]^2)^{1/2} ||_{l^q over k}.
double square_function_norm(const StepProcess& g, const TimeGrid& grid, double q);

/// Same square function with the outer norm taken in the model's space.
double square_function_norm(const SpectralModel& model, const StepProcess& g,
                            const TimeGrid& grid);

/// || (sum_h G_h^2)^{1/2} ||_q on every cell, in the model's space.
std::vector<double> step_space_norms(const SpectralModel& model, const StepProcess& g);

/// L^p(0,T; L^q(H)) norm of G in the model's space.
double step_norm(const SpectralModel& model, const StepProcess& g, const TimeGrid& grid,
                 double p);

/// Runs f(path_index, path_seed) for every path and returns the results in path order.
template <class F>
auto map_paths(std::size_t paths, std::uint64_t master_seed, unsigned threads, F&& f) {
    using R = std::invoke_result_t<F&, std::size_t, std::uint64_t>;
    std::vector<R> out(paths);
    parallel_for(paths, threads,
                 [&](std::size_t i) { out[i] = f(i, derive_seed(master_seed, i)); });
    return out;
}

struct MonteCarloSpec {
    std::size_t paths = 2000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// (E ||int_0^T G dW||_q^p)^{1/p} / (E ||G||_{sq}^p)^{1/p}.
RatioStatistic ito_isomorphism_ratio(const SpectralModel& model, const IntegrandSpec& g,
                                     const TimeGrid& grid, double p, const MonteCarloSpec& mc);

struct EnsembleRange {
    std::vector<RatioStatistic> members;
    double min_ratio = 0.0;
    double max_ratio = 0.0;
};

EnsembleRange ito_isomorphism_range(const SpectralModel& model,
                                    const std::vector<IntegrandSpec>& ensemble,
                                    const TimeGrid& grid, double p, const MonteCarloSpec& mc);

}  // namespace smr
