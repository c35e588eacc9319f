// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "smr/kernels.hpp"
#include "smr/spectral.hpp"
#include "smr/statistics.hpp"
#include "smr/stochastic.hpp"

namespace smr {

//---------------------------------------------------------------------------//
// Windowed integrals
//---------------------------------------------------------------------------//

/// Number of cells in the snapped window of length r.
std::size_t window_cells(double r, double dt);

/// J(r)G(t_n) = r^{-1/2} int_{(t_n - r) v 0}^{t_n} G dW, window snapped to whole cells.
FieldPath apply_J(double r, const StepProcess& g, const NoisePath& noise);

/// I(k)G(t_n) = sum_{i<n} k(t_n - t_i) sum_h G[i][.][h] dW[i][h].
FieldPath apply_I(const KernelFn& kernel, const StepProcess& g, const NoisePath& noise);

/// -int_0^inf sqrt(r) k'(r) J(r)G dr at every grid point, with J(r) taken on its snapped
/// window; the r-integral runs cell by cell plus a tail beyond T.
FieldPath reduction_quadrature(const KernelFn& kernel, const StepProcess& g,
                               const NoisePath& noise);

/// Relative L^2 (time x modes) mismatch between apply_I and reduction_quadrature.
double reduction_mismatch(const KernelFn& kernel, const StepProcess& g, const NoisePath& noise);

//---------------------------------------------------------------------------//
// Empirical R-bounds
//---------------------------------------------------------------------------//

/// Samples X(path, time, mode) of a random field over a time grid with step dt.
struct NormBlock {
    std::size_t paths = 0;
    std::size_t times = 0;
    std::size_t modes = 0;
    double dt = 1.0;
    std::vector<double> data;

    NormBlock() = default;
    NormBlock(std::size_t paths_, std::size_t times_, std::size_t modes_, double dt_)
        : paths(paths_), times(times_), modes(modes_), dt(dt_),
          data(paths_ * times_ * modes_, 0.0) {}

    double& at(std::size_t w, std::size_t n, std::size_t k) {
        return data[(w * times + n) * modes + k];
    }
    [[nodiscard]] double at(std::size_t w, std::size_t n, std::size_t k) const {
        return data[(w * times + n) * modes + k];
    }
};

/// (E sum_n dt ||X(n)||_q^p)^{1/p}.
double block_norm(const NormBlock& x, double p, double q);

struct SignAverage {
    std::size_t exact_limit = 10;    // enumerate all 2^N sign vectors up to this N
    std::size_t samples = 256;       // sampled sign vectors beyond it
    std::uint64_t seed = 0;
};

/// (E_r ||sum_n r_n X_n||^2)^{1/2} in block_norm.
double rademacher_norm(std::span<const NormBlock> xs, double p, double q,
                       const SignAverage& signs);

/// ||(sum_n |X_n|^2)^{1/2}|| in block_norm.
double square_sum_norm(std::span<const NormBlock> xs, double p, double q);

/// Upper Khintchine constant for L^q moments of Rademacher sums.
double khintchine_upper(double q);

/// Empirical R-bound from precomputed pairs (x_n, T_n x_n) on one configuration.
double rbound_ratio(std::span<const NormBlock> inputs, std::span<const NormBlock> outputs,
                    double p, double q, const SignAverage& signs);

enum class FamilyKind { kIdentity, kScalar, kJ, kI };

struct OperatorFamilySpec {
    FamilyKind kind = FamilyKind::kJ;
    std::vector<double> parameters;  // scalars c_n, or windows r_n
    std::vector<KernelFn> kernels;   // for kI
    double p = 3.0;
    double q = 4.0;
};

enum class InputKind { kGaussian, kSpiked, kMixed };

struct RboundEnsembleSpec {
    TimeGrid grid{1.0, 64};
    std::size_t modes = 4;
    std::size_t paths = 64;  // noise paths per configuration
    InputKind inputs = InputKind::kMixed;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct RboundResult {
    double r_hat = 0.0;
    std::vector<double> per_trial;
    bool exact_signs = false;
};

/// max over trials of the sign-averaged output/input ratio for family members
/// T_1..T_N applied to N independent inputs. A lower estimate of the R-bound.
RboundResult rbound_estimate(const OperatorFamilySpec& family, const RboundEnsembleSpec& ensemble,
                             std::size_t trials, const SignAverage& signs = {});

//---------------------------------------------------------------------------//
// Maximal functions and duality
//---------------------------------------------------------------------------//

/// M(f)(t_i) = max_{w >= 1} (1/w) sum_{j=i}^{i+w-1} |f_j| over windows inside the grid.
std::vector<double> one_sided_maximal(std::span<const double> f);

/// Cell-valued vector function: f(n, k), n = 0..cells-1.
struct VectorStepFunction {
    std::size_t cells = 0;
    std::size_t components = 0;
    std::vector<double> data;

    [[nodiscard]] double at(std::size_t n, std::size_t k) const { return data[n * components + k]; }
    double& at(std::size_t n, std::size_t k) { return data[n * components + k]; }
};

/// Componentwise one-sided maximal function.
VectorStepFunction maximal_vector(const VectorStepFunction& f);

/// ||(sum_k |f_k|^s)^{1/s}||_{L^r} with cell width dt.
double lr_ls_norm(const VectorStepFunction& f, double r, double s, double dt);

/// Random step functions: each component is a sum of a few random plateaus.
std::vector<VectorStepFunction> random_step_functions(std::size_t count, std::size_t cells,
                                                      std::size_t components, std::uint64_t seed);

/// sup over the ensemble of ||M f|| / ||f|| in L^r(l^s).
RatioStatistic fefferman_stein_check(double r, double s,
                                     std::span<const VectorStepFunction> ensemble, double dt);

/// T(delta) psi(t_i) = (1/w) sum_{j=i}^{i+w-1} psi_j (zero beyond the grid).
std::vector<double> forward_average(std::span<const double> psi, std::size_t w);
/// T*(delta) phi(t_j) = (1/w) sum_{i=j-w+1}^{j} phi_i (zero before t_0).
std::vector<double> backward_average(std::span<const double> phi, std::size_t w);

struct DualityCheck {
    double lhs = 0.0;  // <T(delta) psi, phi>
    double rhs = 0.0;  // <psi, T*(delta) phi>
};

DualityCheck duality_pair_check(double delta, std::span<const double> psi,
                                std::span<const double> phi, double dt);

struct SumBound {
    double lhs = 0.0;  // || sum_n T*(delta_n) |f_n| ||
    double rhs = 0.0;  // || sum_n |f_n| ||
};

/// Both sides of the dual sum bound in L^{r'}(l^{s'}) for conjugates of (r, s).
SumBound dual_sum_bound(std::span<const VectorStepFunction> fs, std::span<const double> deltas,
                        double r, double s, double dt);

//---------------------------------------------------------------------------//
// Multipliers
//---------------------------------------------------------------------------//

/// Diagonal multiplier M(t_i) = diag(values(i, k)).
struct DiagonalMultiplier {
    std::size_t cells = 0;
    std::size_t modes = 0;
    std::vector<double> values;

    [[nodiscard]] double at(std::size_t i, std::size_t k) const { return values[i * modes + k]; }
};

struct MultiplierCheck {
    double lhs = 0.0;      // ||M G|| in L^q(L^2(dt))
    double g_norm = 0.0;   // ||G|| in L^q(L^2(dt))
    double r_hat = 0.0;
    double rhs = 0.0;      // r_hat * g_norm
};

/// R-bound of {M(t_i)} on l^q estimated from random and spiked configurations.
double multiplier_rbound(const DiagonalMultiplier& m, double q, std::size_t trials,
                         std::uint64_t seed);

MultiplierCheck multiplier_bound_check(const DiagonalMultiplier& m, const StepProcess& g,
                                       const TimeGrid& grid, double q, double r_hat);

}  // namespace smr
