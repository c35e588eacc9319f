// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "smr/rng.hpp"

#include <cmath>
#include <numbers>

namespace smr {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t path_index) noexcept {
    constexpr std::uint64_t kStep = 0xD1B54A32D192ED03ULL;  // odd
    return mix64(mix64(master) + (path_index + 1) * kStep);
}

double CounterRng::normal() noexcept {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
}

}  // namespace smr
