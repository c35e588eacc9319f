// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace smr {

//---------------------------------------------------------------------------//
// Time discretization
//---------------------------------------------------------------------------//

/// Uniform grid on [0, T] with cell edges t_i = i * dt, i = 0..N.
class TimeGrid {
public:
    TimeGrid(double horizon, std::size_t steps);

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] std::size_t steps() const noexcept { return steps_; }
    [[nodiscard]] double dt() const noexcept { return horizon_ / static_cast<double>(steps_); }
    [[nodiscard]] double edge(std::size_t i) const noexcept {
        return static_cast<double>(i) * dt();
    }

    /// Index of the grid point equal to t (relative tolerance 1e-9), if any.
    [[nodiscard]] std::optional<std::size_t> index_of(double t) const noexcept;

    /// Same horizon, steps multiplied by `factor`.
    [[nodiscard]] TimeGrid refined(std::size_t factor) const;

    friend bool operator==(const TimeGrid&, const TimeGrid&) = default;

private:
    double horizon_;
    std::size_t steps_;
};

//---------------------------------------------------------------------------//
// Fields
//---------------------------------------------------------------------------//

/// Mode coefficients x_k of an element of L^q(O).
struct SpatialField {
    std::vector<double> coeffs;

    [[nodiscard]] std::size_t size() const noexcept { return coeffs.size(); }
    double& operator[](std::size_t k) { return coeffs[k]; }
    double operator[](std::size_t k) const { return coeffs[k]; }
};

/// A field sampled at the grid points t_0..t_N; row n holds the K mode coefficients.
class FieldPath {
public:
    FieldPath() = default;
    FieldPath(std::size_t times, std::size_t modes)
        : times_(times), modes_(modes), data_(times * modes, 0.0) {}

    [[nodiscard]] std::size_t times() const noexcept { return times_; }
    [[nodiscard]] std::size_t modes() const noexcept { return modes_; }

    double& at(std::size_t n, std::size_t k) { return data_[n * modes_ + k]; }
    [[nodiscard]] double at(std::size_t n, std::size_t k) const { return data_[n * modes_ + k]; }

    std::span<double> row(std::size_t n) { return {data_.data() + n * modes_, modes_}; }
    [[nodiscard]] std::span<const double> row(std::size_t n) const {
        return {data_.data() + n * modes_, modes_};
    }

    [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
    std::span<double> data() noexcept { return data_; }

private:
    std::size_t times_ = 0;
    std::size_t modes_ = 0;
    std::vector<double> data_;
};

/// Exponents of a mixed L^p(0,T; L^q) norm. `sup` replaces the time integral by a
/// maximum over grid points.
struct MixedNormSpec {
    double time_exponent = 2.0;
    double space_exponent = 2.0;
    bool sup = false;
    std::optional<double> expectation_exponent;  // defaults to time_exponent

    [[nodiscard]] double expectation() const {
        return expectation_exponent.value_or(time_exponent);
    }
};

//---------------------------------------------------------------------------//
// Spectral model
//---------------------------------------------------------------------------//

/// Counting measure on the modes; the space is l^q.
struct NoTransform {};

/// -1/2 Laplacian + shift on the torus [0, 2 pi)^d, real trigonometric basis with
/// per-axis frequencies -n/2+1..n/2 (sine/cosine pairs, cosine only at Nyquist).
/// With shift == 0 the constant mode is dropped.
struct FourierTorus {
    int dim = 1;
    int n = 16;
    double shift = 1.0;
};

/// -1/2 Laplacian on (0, pi) with Dirichlet conditions, basis sqrt(2/pi) sin(k x).
struct DirichletSine {
    int n = 16;
};

using Transform = std::variant<NoTransform, FourierTorus, DirichletSine>;

/// Diagonal realization of a sectorial operator A with eigenvalues lambda_1 <= ... <= lambda_K.
/// Physical samples (when a transform is attached) live on a grid with 2n points per
/// axis, which integrates squares of retained modes exactly.
class SpectralModel {
public:
    [[nodiscard]] std::span<const double> eigenvalues() const noexcept { return eigenvalues_; }
    [[nodiscard]] std::size_t size() const noexcept { return eigenvalues_.size(); }
    [[nodiscard]] double space_exponent() const noexcept { return q_; }
    [[nodiscard]] const Transform& transform() const noexcept { return transform_; }
    [[nodiscard]] bool invertible() const noexcept { return invertible_; }
    [[nodiscard]] bool has_physical_transform() const noexcept {
        return !std::holds_alternative<NoTransform>(transform_);
    }

    /// Number of physical sample points (0 without a transform).
    [[nodiscard]] std::size_t physical_size() const noexcept;
    /// Quadrature weight of each physical sample point.
    [[nodiscard]] double cell_volume() const noexcept { return cell_volume_; }

    /// Synthesizes physical samples from mode coefficients.
    [[nodiscard]] std::vector<double> to_physical(std::span<const double> coeffs) const;
    /// Projects physical samples onto the retained modes.
    [[nodiscard]] std::vector<double> from_physical(std::span<const double> values) const;

    /// Physical samples of d/dx_axis of the field (Fourier torus only).
    [[nodiscard]] std::vector<double> derivative(std::span<const double> coeffs, int axis) const;

    /// Signed frequency multi-index of each mode (Fourier torus only); positive entries
    /// denote cosines, negative entries sines.
    [[nodiscard]] std::span<const std::vector<int>> mode_indices() const noexcept {
        return mode_indices_;
    }

    /// Same model with a different space exponent.
    [[nodiscard]] SpectralModel with_space_exponent(double q) const;

private:
    friend SpectralModel make_model(std::vector<double>, double);
    friend SpectralModel make_model(const Transform&, double);

    [[nodiscard]] std::vector<double> synthesize(std::span<const double> coeffs,
                                                 int derivative_axis) const;

    std::vector<double> eigenvalues_;
    double q_ = 2.0;
    Transform transform_;
    bool invertible_ = true;

    // Separable synthesis data.
    int dim_ = 0;
    std::size_t basis_count_ = 0;    // 1-D basis functions per axis
    std::size_t samples_per_axis_ = 0;
    std::vector<double> basis_;       // samples_per_axis x basis_count, row-major
    std::vector<double> dbasis_;      // derivative samples (torus)
    std::vector<std::size_t> slot_;   // mode -> flat index in the basis_count^dim tensor
    std::vector<std::vector<int>> mode_indices_;
    double cell_volume_ = 1.0;
};

/// Diagonal model on l^q. Rejects nonpositive or decreasing eigenvalues and q < 2.
SpectralModel make_model(std::vector<double> eigenvalues, double q);

/// Model with a physical transform; eigenvalues are derived from the transform.
SpectralModel make_model(const Transform& transform, double q);

/// lambda_k = base^k for k = 1..K.
SpectralModel make_geometric_ladder(int modes, double q, double base = 4.0);

//---------------------------------------------------------------------------//
// Operators and norms
//---------------------------------------------------------------------------//

/// Coefficients e^{-lambda_k t} x_k.
SpatialField apply_semigroup(const SpectralModel& model, double t, const SpatialField& x);

/// Coefficients lambda_k^gamma x_k.
SpatialField apply_fractional_power(const SpectralModel& model, double gamma,
                                    const SpatialField& x);

/// l^q norm of raw coefficients (counting measure).
double lq_norm(std::span<const double> values, double q);

/// Norm of a field in the model's space: l^q on coefficients, or the L^q norm of the
/// physical samples when a transform is attached.
double space_norm(const SpectralModel& model, std::span<const double> coeffs);

/// L^p(0,T; l^q) norm with left-endpoint evaluation on each cell; path has N+1 rows.
double mixed_norm(const FieldPath& path, const TimeGrid& grid, const MixedNormSpec& spec);

/// Same, with spatial norms taken in the model's space.
double mixed_norm(const SpectralModel& model, const FieldPath& path, const TimeGrid& grid,
                  const MixedNormSpec& spec);

/// Norm of x in the real interpolation space between L^q and D(A) of order theta, via
/// ||x||_q + (int_0^inf (t^{1-theta} ||A S(t) x||_q)^p dt/t)^{1/p}.
double interp_norm(const SpectralModel& model, double theta, double p, const SpatialField& x);

/// Fixed-rule version of interp_norm for repeated evaluation on one model.
class InterpNormEvaluator {
public:
    InterpNormEvaluator(const SpectralModel& model, double theta, double p);
    [[nodiscard]] double operator()(std::span<const double> coeffs) const;

private:
    const SpectralModel* model_;
    double theta_;
    double p_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    double unit_norm_ = 0.0;  // single-mode models: the norm is |x| times this
};

/// L^q norm of |grad x| for a Fourier-torus model.
double gradient_norm(const SpectralModel& model, const SpatialField& x, double q);

}  // namespace smr
