// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "smr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "smr/error.hpp"
#include "smr/quadrature.hpp"

namespace smr {

//---------------------------------------------------------------------------//
// TimeGrid
//---------------------------------------------------------------------------//

TimeGrid::TimeGrid(double horizon, std::size_t steps) : horizon_(horizon), steps_(steps) {
    require(std::isfinite(horizon) && horizon > 0.0, "TimeGrid: horizon T must be > 0");
    require(steps >= 1, "TimeGrid: steps N must be >= 1");
}

std::optional<std::size_t> TimeGrid::index_of(double t) const noexcept {
    if (!(t >= 0.0) || t > horizon_ * (1.0 + 1e-12)) {
        return std::nullopt;
    }
    const double position = t / dt();
    const double nearest = std::round(position);
    if (std::abs(position - nearest) > 1e-9 * std::max(1.0, nearest)) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(nearest);
}

TimeGrid TimeGrid::refined(std::size_t factor) const {
    require(factor >= 1, "TimeGrid::refined: factor must be >= 1");
    return TimeGrid(horizon_, steps_ * factor);
}

//---------------------------------------------------------------------------//
// Model construction
//---------------------------------------------------------------------------//

namespace {

void validate_q(double q) {
    require(std::isfinite(q) && q >= 2.0, "space exponent q must lie in [2, inf)");
}

// Signed 1-D frequencies of the real trigonometric basis with n functions.
std::vector<int> torus_frequencies(int n) {
    std::vector<int> s{0};
    const int top = n / 2;
    for (int m = 1; static_cast<int>(s.size()) < n; ++m) {
        s.push_back(m);
        if (static_cast<int>(s.size()) < n && !(n % 2 == 0 && m == top)) {
            s.push_back(-m);
        }
    }
    return s;
}

// out = matrix (rows x cols) applied along `axis` of a tensor with extents `dims`.
std::vector<double> apply_axis(std::span<const double> in, std::vector<std::size_t>& dims,
                               std::size_t axis, std::span<const double> matrix,
                               std::size_t rows, std::size_t cols) {
    std::size_t outer = 1;
    for (std::size_t a = 0; a < axis; ++a) {
        outer *= dims[a];
    }
    std::size_t inner = 1;
    for (std::size_t a = axis + 1; a < dims.size(); ++a) {
        inner *= dims[a];
    }
    std::vector<double> out(outer * rows * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t r = 0; r < rows; ++r) {
            double* dst = out.data() + (o * rows + r) * inner;
            for (std::size_t c = 0; c < cols; ++c) {
                const double m = matrix[r * cols + c];
                if (m == 0.0) {
                    continue;
                }
                const double* src = in.data() + (o * cols + c) * inner;
                for (std::size_t i = 0; i < inner; ++i) {
                    dst[i] += m * src[i];
                }
            }
        }
    }
    dims[axis] = rows;
    return out;
}

}  // namespace

SpectralModel make_model(std::vector<double> eigenvalues, double q) {
    require(!eigenvalues.empty(), "make_model: at least one eigenvalue required");
    for (std::size_t k = 0; k < eigenvalues.size(); ++k) {
        require(std::isfinite(eigenvalues[k]) && eigenvalues[k] > 0.0,
                "make_model: eigenvalues must be finite and > 0 (entry " + std::to_string(k) +
                    ")");
        if (k > 0) {
            require(eigenvalues[k] >= eigenvalues[k - 1],
                    "make_model: eigenvalues must be nondecreasing (entry " +
                        std::to_string(k) + ")");
        }
    }
    validate_q(q);
    SpectralModel model;
    model.eigenvalues_ = std::move(eigenvalues);
    model.q_ = q;
    model.transform_ = NoTransform{};
    model.invertible_ = model.eigenvalues_.front() > 0.0;
    return model;
}

SpectralModel make_model(const Transform& transform, double q) {
    validate_q(q);
    SpectralModel model;
    model.q_ = q;
    model.transform_ = transform;

    if (const auto* torus = std::get_if<FourierTorus>(&transform)) {
        require(torus->dim >= 1 && torus->dim <= 3, "fourier-torus: dimension must be 1, 2 or 3");
        require(torus->n >= 2, "fourier-torus: n must be >= 2");
        require(std::isfinite(torus->shift) && torus->shift >= 0.0,
                "fourier-torus: shift w must be >= 0");
        const auto freqs = torus_frequencies(torus->n);
        const std::size_t n = freqs.size();
        const std::size_t m = 2 * n;
        model.dim_ = torus->dim;
        model.basis_count_ = n;
        model.samples_per_axis_ = m;
        model.basis_.assign(m * n, 0.0);
        model.dbasis_.assign(m * n, 0.0);
        const double c0 = 1.0 / std::sqrt(2.0 * std::numbers::pi);
        const double c1 = 1.0 / std::sqrt(std::numbers::pi);
        for (std::size_t j = 0; j < m; ++j) {
            const double x = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
            for (std::size_t b = 0; b < n; ++b) {
                const int s = freqs[b];
                const double f = std::abs(s);
                double value = c0;
                double deriv = 0.0;
                if (s > 0) {
                    value = c1 * std::cos(f * x);
                    deriv = -f * c1 * std::sin(f * x);
                } else if (s < 0) {
                    value = c1 * std::sin(f * x);
                    deriv = f * c1 * std::cos(f * x);
                }
                model.basis_[j * n + b] = value;
                model.dbasis_[j * n + b] = deriv;
            }
        }
        model.cell_volume_ =
            std::pow(2.0 * std::numbers::pi / static_cast<double>(m), torus->dim);

        std::size_t total = 1;
        for (int a = 0; a < torus->dim; ++a) {
            total *= n;
        }
        struct Entry {
            double lambda;
            std::size_t flat;
            std::vector<int> index;
        };
        std::vector<Entry> entries;
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::vector<int> index(static_cast<std::size_t>(torus->dim));
            std::size_t rest = flat;
            double lambda = torus->shift;
            bool all_zero = true;
            for (int a = torus->dim - 1; a >= 0; --a) {
                const int s = freqs[rest % n];
                rest /= n;
                index[static_cast<std::size_t>(a)] = s;
                lambda += 0.5 * static_cast<double>(s) * static_cast<double>(s);
                all_zero = all_zero && s == 0;
            }
            if (all_zero && torus->shift == 0.0) {
                continue;
            }
            entries.push_back({lambda, flat, std::move(index)});
        }
        std::stable_sort(entries.begin(), entries.end(),
                         [](const Entry& a, const Entry& b) { return a.lambda < b.lambda; });
        for (auto& e : entries) {
            model.eigenvalues_.push_back(e.lambda);
            model.slot_.push_back(e.flat);
            model.mode_indices_.push_back(std::move(e.index));
        }
        model.invertible_ = torus->shift > 0.0;
        return model;
    }

    if (const auto* dirichlet = std::get_if<DirichletSine>(&transform)) {
        require(dirichlet->n >= 1, "dirichlet-sine: n must be >= 1");
        const auto n = static_cast<std::size_t>(dirichlet->n);
        const std::size_t m = 2 * n;  // interval count; interior samples 1..m-1
        model.dim_ = 1;
        model.basis_count_ = n;
        model.samples_per_axis_ = m - 1;
        model.basis_.assign((m - 1) * n, 0.0);
        const double c = std::sqrt(2.0 / std::numbers::pi);
        for (std::size_t j = 1; j < m; ++j) {
            const double x = std::numbers::pi * static_cast<double>(j) / static_cast<double>(m);
            for (std::size_t k = 1; k <= n; ++k) {
                model.basis_[(j - 1) * n + (k - 1)] = c * std::sin(static_cast<double>(k) * x);
            }
        }
        model.cell_volume_ = std::numbers::pi / static_cast<double>(m);
        for (std::size_t k = 1; k <= n; ++k) {
            model.eigenvalues_.push_back(0.5 * static_cast<double>(k * k));
            model.slot_.push_back(k - 1);
        }
        model.invertible_ = true;
        return model;
    }

    throw ValidationError("make_model: a transform-free model needs explicit eigenvalues");
}

SpectralModel make_geometric_ladder(int modes, double q, double base) {
    require(modes >= 1, "geometric ladder: need at least one mode");
    require(base > 1.0, "geometric ladder: base must exceed 1");
    std::vector<double> lambdas;
    for (int k = 1; k <= modes; ++k) {
        const double value = std::pow(base, k);
        require(std::isfinite(value), "geometric ladder: eigenvalue overflow");
        lambdas.push_back(value);
    }
    return make_model(std::move(lambdas), q);
}

SpectralModel SpectralModel::with_space_exponent(double q) const {
    validate_q(q);
    SpectralModel copy = *this;
    copy.q_ = q;
    return copy;
}

std::size_t SpectralModel::physical_size() const noexcept {
    if (!has_physical_transform()) {
        return 0;
    }
    std::size_t total = 1;
    for (int a = 0; a < dim_; ++a) {
        total *= samples_per_axis_;
    }
    return total;
}

std::vector<double> SpectralModel::synthesize(std::span<const double> coeffs,
                                              int derivative_axis) const {
    require(coeffs.size() == size(), "field length does not match the model's mode count");
    require(has_physical_transform(), "model has no physical transform");
    std::size_t total = 1;
    for (int a = 0; a < dim_; ++a) {
        total *= basis_count_;
    }
    std::vector<double> tensor(total, 0.0);
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        tensor[slot_[k]] = coeffs[k];
    }
    std::vector<std::size_t> dims(static_cast<std::size_t>(dim_), basis_count_);
    for (int a = 0; a < dim_; ++a) {
        const auto& matrix = (a == derivative_axis) ? dbasis_ : basis_;
        tensor = apply_axis(tensor, dims, static_cast<std::size_t>(a), matrix, samples_per_axis_,
                            basis_count_);
    }
    return tensor;
}

std::vector<double> SpectralModel::to_physical(std::span<const double> coeffs) const {
    return synthesize(coeffs, -1);
}

std::vector<double> SpectralModel::derivative(std::span<const double> coeffs, int axis) const {
    require(std::holds_alternative<FourierTorus>(transform_),
            "derivative: requires a fourier-torus model");
    require(axis >= 0 && axis < dim_, "derivative: axis out of range");
    return synthesize(coeffs, axis);
}

std::vector<double> SpectralModel::from_physical(std::span<const double> values) const {
    require(has_physical_transform(), "model has no physical transform");
    require(values.size() == physical_size(), "physical sample count mismatch");
    // Analysis matrix: weighted transpose of the synthesis matrix.
    const double h = std::holds_alternative<FourierTorus>(transform_)
                         ? 2.0 * std::numbers::pi / static_cast<double>(samples_per_axis_)
                         : cell_volume_;
    std::vector<double> analysis(basis_count_ * samples_per_axis_);
    for (std::size_t b = 0; b < basis_count_; ++b) {
        for (std::size_t j = 0; j < samples_per_axis_; ++j) {
            analysis[b * samples_per_axis_ + j] = h * basis_[j * basis_count_ + b];
        }
    }
    std::vector<double> tensor(values.begin(), values.end());
    std::vector<std::size_t> dims(static_cast<std::size_t>(dim_), samples_per_axis_);
    for (int a = 0; a < dim_; ++a) {
        tensor = apply_axis(tensor, dims, static_cast<std::size_t>(a), analysis, basis_count_,
                            samples_per_axis_);
    }
    std::vector<double> coeffs(size());
    for (std::size_t k = 0; k < size(); ++k) {
        coeffs[k] = tensor[slot_[k]];
    }
    return coeffs;
}

//---------------------------------------------------------------------------//
// Operators
//---------------------------------------------------------------------------//

SpatialField apply_semigroup(const SpectralModel& model, double t, const SpatialField& x) {
    require(t >= 0.0, "apply_semigroup: t must be >= 0");
    require(x.size() == model.size(), "apply_semigroup: field length mismatch");
    SpatialField out = x;
    const auto lambdas = model.eigenvalues();
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] *= std::exp(-lambdas[k] * t);
    }
    return out;
}

SpatialField apply_fractional_power(const SpectralModel& model, double gamma,
                                    const SpatialField& x) {
    require(std::isfinite(gamma), "apply_fractional_power: exponent must be finite");
    require(x.size() == model.size(), "apply_fractional_power: field length mismatch");
    SpatialField out = x;
    const auto lambdas = model.eigenvalues();
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] *= std::pow(lambdas[k], gamma);
    }
    return out;
}

double lq_norm(std::span<const double> values, double q) {
    double scale = 0.0;
    for (double v : values) {
        scale = std::max(scale, std::abs(v));
    }
    if (std::isinf(q) || scale == 0.0) {
        return scale;
    }
    const double inv = 1.0 / scale;
    double sum = 0.0;
    if (q == 2.0 || q == 4.0) {
        for (double v : values) {
            const double a = v * inv;
            const double a2 = a * a;
            sum += q == 2.0 ? a2 : a2 * a2;
        }
    } else {
        for (double v : values) {
            sum += std::pow(std::abs(v) * inv, q);
        }
    }
    return scale * std::pow(sum, 1.0 / q);
}

double space_norm(const SpectralModel& model, std::span<const double> coeffs) {
    require(coeffs.size() == model.size(), "space_norm: field length mismatch");
    if (!model.has_physical_transform()) {
        return lq_norm(coeffs, model.space_exponent());
    }
    const auto values = model.to_physical(coeffs);
    return std::pow(model.cell_volume(), 1.0 / model.space_exponent()) *
           lq_norm(values, model.space_exponent());
}

namespace {

template <class RowNorm>
double mixed_norm_impl(const FieldPath& path, const TimeGrid& grid, const MixedNormSpec& spec,
                       RowNorm&& row_norm) {
    require(grid.steps() >= 1, "mixed_norm: empty grid");
    require(path.times() == grid.steps() + 1,
            "mixed_norm: path must hold N+1 grid-point samples");
    if (spec.sup) {
        double m = 0.0;
        for (std::size_t n = 0; n < path.times(); ++n) {
            m = std::max(m, row_norm(path.row(n)));
        }
        return m;
    }
    const double p = spec.time_exponent;
    require(p >= 1.0 && std::isfinite(p), "mixed_norm: time exponent must lie in [1, inf)");
    double sum = 0.0;
    for (std::size_t n = 0; n < grid.steps(); ++n) {
        sum += grid.dt() * std::pow(row_norm(path.row(n)), p);
    }
    return std::pow(sum, 1.0 / p);
}

}  // namespace

double mixed_norm(const FieldPath& path, const TimeGrid& grid, const MixedNormSpec& spec) {
    require(spec.space_exponent >= 1.0, "mixed_norm: space exponent must be >= 1");
    return mixed_norm_impl(path, grid, spec, [&](std::span<const double> row) {
        return lq_norm(row, spec.space_exponent);
    });
}

double mixed_norm(const SpectralModel& model, const FieldPath& path, const TimeGrid& grid,
                  const MixedNormSpec& spec) {
    require(spec.space_exponent == model.space_exponent(),
            "mixed_norm: norm exponent q differs from the model's q");
    require(path.modes() == model.size(), "mixed_norm: mode count mismatch");
    return mixed_norm_impl(path, grid, spec, [&](std::span<const double> row) {
        return space_norm(model, row);
    });
}

//---------------------------------------------------------------------------//
// Interpolation norm
//---------------------------------------------------------------------------//

namespace {

void validate_interp(double theta, double p) {
    require(theta > 0.0 && theta < 1.0, "interp_norm: theta must lie in (0, 1)");
    require(p > 1.0 && std::isfinite(p), "interp_norm: p must lie in (1, inf)");
}

double decayed_norm(const SpectralModel& model, std::span<const double> coeffs, double t,
                    std::vector<double>& scratch) {
    const auto lambdas = model.eigenvalues();
    for (std::size_t k = 0; k < coeffs.size(); ++k) {
        scratch[k] = lambdas[k] * std::exp(-lambdas[k] * t) * coeffs[k];
    }
    return space_norm(model, scratch);
}

}  // namespace

double interp_norm(const SpectralModel& model, double theta, double p, const SpatialField& x) {
    validate_interp(theta, p);
    require(x.size() == model.size(), "interp_norm: field length mismatch");
    const double base = space_norm(model, x.coeffs);
    if (base == 0.0) {
        return 0.0;
    }
    std::vector<double> scratch(x.size());
    const double power = (1.0 - theta) * p - 1.0;
    quad::Integrand f = [&](double t) {
        const double n = decayed_norm(model, x.coeffs, t, scratch);
        if (n == 0.0) {
            return 0.0;
        }
        return std::exp(power * std::log(t) + p * std::log(n));
    };
    std::vector<double> breakpoints;
    for (double lambda : model.eigenvalues()) {
        breakpoints.push_back(1.0 / lambda);
    }
    const auto result = quad::integrate_half_line(f, breakpoints, 1e-12);
    if (!result.converged) {
        throw NumericalError("interp_norm: quadrature did not converge");
    }
    return base + std::pow(std::max(result.value, 0.0), 1.0 / p);
}

InterpNormEvaluator::InterpNormEvaluator(const SpectralModel& model, double theta, double p)
    : model_(&model), theta_(theta), p_(p) {
    validate_interp(theta, p);
    const auto lambdas = model.eigenvalues();
    const double t_min = 1e-7 / lambdas.back();
    const double t_max = 60.0 / lambdas.front();
    quad::LogTimeRule rule(t_min, t_max, 3.0);
    nodes_.assign(rule.nodes().begin(), rule.nodes().end());
    weights_.assign(rule.weights().begin(), rule.weights().end());
    // Contribution of (0, t_min) with S(t) ~ I, folded into a node at t_min.
    const double a = (1.0 - theta) * p;
    nodes_.push_back(t_min);
    weights_.push_back(t_min / a);
    if (model.size() == 1 && !model.has_physical_transform()) {
        const std::vector<double> one{1.0};
        unit_norm_ = (*this)(one);
    }
}

double InterpNormEvaluator::operator()(std::span<const double> coeffs) const {
    if (unit_norm_ > 0.0) {
        return std::abs(coeffs[0]) * unit_norm_;
    }
    const double base = space_norm(*model_, coeffs);
    if (base == 0.0) {
        return 0.0;
    }
    std::vector<double> scratch(coeffs.size());
    const double power = (1.0 - theta_) * p_ - 1.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j) {
        const double t = nodes_[j];
        const double n = decayed_norm(*model_, coeffs, t, scratch);
        if (n > 0.0) {
            sum += weights_[j] * std::exp(power * std::log(t) + p_ * std::log(n));
        }
    }
    return base + std::pow(sum, 1.0 / p_);
}

//---------------------------------------------------------------------------//
// Gradient
//---------------------------------------------------------------------------//

double gradient_norm(const SpectralModel& model, const SpatialField& x, double q) {
    const auto* torus = std::get_if<FourierTorus>(&model.transform());
    require(torus != nullptr, "gradient_norm: requires a fourier-torus model");
    require(q >= 1.0, "gradient_norm: q must be >= 1");
    std::vector<double> magnitude2(model.physical_size(), 0.0);
    for (int axis = 0; axis < torus->dim; ++axis) {
        const auto d = model.derivative(x.coeffs, axis);
        for (std::size_t j = 0; j < d.size(); ++j) {
            magnitude2[j] += d[j] * d[j];
        }
    }
    for (double& v : magnitude2) {
        v = std::sqrt(v);
    }
    return std::pow(model.cell_volume(), 1.0 / q) * lq_norm(magnitude2, q);
}

}  // namespace smr
