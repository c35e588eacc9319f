// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <string>

namespace smr {

/// One inequality probe: ratio = numerator / denominator with grid and MC metadata.
struct RatioStatistic {
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    double stderr_ratio = 0.0;  // 0 for deterministic evaluations

    double horizon = 0.0;
    std::size_t steps = 0;
    double dt = 0.0;
    std::size_t n_mc = 0;
    std::size_t modes = 0;

    double p = 2.0;
    double q = 2.0;
    double theta = 0.0;
    double gamma = 0.5;

    std::string flag;  // e.g. "outside theorem hypotheses"
};

/// Mean and standard error of a sample.
struct MeanEstimate {
    double mean = 0.0;
    double stderr_mean = 0.0;
};

MeanEstimate mean_estimate(std::span<const double> samples);

/// (mean(x) / mean(y))^{1/p} with a delta-method standard error; x and y are per-path
/// p-th powers (y may be constant). Returns {ratio, stderr}.
MeanEstimate moment_ratio(std::span<const double> x, std::span<const double> y, double p);

}  // namespace smr
