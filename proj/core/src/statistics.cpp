// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "smr/statistics.hpp"

#include <cmath>

#include "smr/error.hpp"

namespace smr {

MeanEstimate mean_estimate(std::span<const double> samples) {
    require(!samples.empty(), "mean_estimate: empty sample");
    const auto n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double v : samples) {
        mean += v;
    }
    mean /= n;
    if (samples.size() < 2) {
        return {mean, 0.0};
    }
    double ss = 0.0;
    for (double v : samples) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

MeanEstimate moment_ratio(std::span<const double> x, std::span<const double> y, double p) {
    require(x.size() == y.size() && !x.empty(), "moment_ratio: sample size mismatch");
    const auto n = static_cast<double>(x.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    require(my > 0.0, "moment_ratio: zero denominator");
    const double r = mx / my;
    if (x.size() < 2) {
        return {std::pow(r, 1.0 / p), 0.0};
    }
    // Variance of r via the linearization x - r y.
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = (x[i] - mx) - r * (y[i] - my);
        ss += d * d;
    }
    const double var_r = ss / (n - 1.0) / n / (my * my);
    const double value = std::pow(r, 1.0 / p);
    const double se = r > 0.0 ? value / (p * r) * std::sqrt(var_r) : 0.0;
    return {value, se};
}

}  // namespace smr
