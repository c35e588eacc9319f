// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "smr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "smr/error.hpp"

namespace smr::quad {
namespace {

constexpr unsigned kKronrodPoints = 21;
constexpr unsigned kGaussPoints = 10;
constexpr std::size_t kMaxIntervals = 4000;

// Gauss-Kronrod 21 rule from Boost.Math; the embedded Gauss nodes are located once.
struct Rule {
    std::vector<double> nodes;     // Kronrod abscissae, nodes[0] == 0
    std::vector<double> kweights;
    std::vector<double> gweights;  // same indexing as nodes, zero where not a Gauss node

    Rule() {
        using GK = boost::math::quadrature::gauss_kronrod<double, kKronrodPoints>;
        using G = boost::math::quadrature::gauss<double, kGaussPoints>;
        const auto& kx = GK::abscissa();
        const auto& kw = GK::weights();
        nodes.assign(kx.begin(), kx.end());
        kweights.assign(kw.begin(), kw.end());
        gweights.assign(nodes.size(), 0.0);
        const auto& gx = G::abscissa();
        const auto& gw = G::weights();
        for (std::size_t j = 0; j < gx.size(); ++j) {
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (std::abs(nodes[i] - gx[j]) < 1e-14) {
                    gweights[i] = gw[j];
                }
            }
        }
    }
};

const Rule& rule() {
    static const Rule instance;
    return instance;
}

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment apply_rule(const Integrand& f, double a, double b) {
    const Rule& r = rule();
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double f0 = f(mid);
    double kronrod = r.kweights[0] * f0;
    double gauss = r.gweights[0] * f0;
    for (std::size_t i = 1; i < r.nodes.size(); ++i) {
        const double dx = half * r.nodes[i];
        const double pair = f(mid - dx) + f(mid + dx);
        kronrod += r.kweights[i] * pair;
        gauss += r.gweights[i] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

// Maps [0, inf) onto [0, 1) through y = u / (1 - u).
Integrand compactify(const Integrand& g) {
    return [g](double u) {
        const double one_minus = 1.0 - u;
        const double y = u / one_minus;
        const double v = g(y);
        if (v == 0.0) {
            return 0.0;
        }
        return v / (one_minus * one_minus);
    };
}

}  // namespace

Result integrate(const Integrand& f, double a, double b, double abs_tol) {
    if (a == b) {
        return {};
    }
    require(std::isfinite(a) && std::isfinite(b), "integrate: finite limits required");
    if (b < a) {
        Result r = integrate(f, b, a, abs_tol);
        r.value = -r.value;
        return r;
    }
    std::priority_queue<Segment> queue;
    Segment first = apply_rule(f, a, b);
    double total = first.value;
    double total_error = first.error;
    queue.push(first);
    while (total_error > abs_tol && queue.size() < kMaxIntervals) {
        if (total_error <= 64.0 * std::numeric_limits<double>::epsilon() * std::abs(total)) {
            break;
        }
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            queue.push(worst);
            break;
        }
        Segment left = apply_rule(f, worst.a, mid);
        Segment right = apply_rule(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
    }
    // Re-sum to shed accumulated cancellation in the running totals.
    double value = 0.0;
    double error = 0.0;
    bool finite = true;
    while (!queue.empty()) {
        value += queue.top().value;
        error += queue.top().error;
        finite = finite && std::isfinite(queue.top().value);
        queue.pop();
    }
    const bool converged = finite && (error <= abs_tol ||
                                      error <= 1e3 * std::numeric_limits<double>::epsilon() *
                                                   std::abs(value));
    return {value, error, converged};
}

Result integrate_log(const Integrand& f, double a, double b, double abs_tol) {
    require(a > 0.0 && b > 0.0, "integrate_log: positive limits required");
    return integrate(
        [&f](double x) {
            const double t = std::exp(x);
            return f(t) * t;
        },
        std::log(a), std::log(b), abs_tol);
}

Result integrate_from_zero(const Integrand& f, double b, double abs_tol) {
    require(b > 0.0, "integrate_from_zero: positive upper limit required");
    Integrand g = [&f, b](double y) {
        const double t = b * std::exp(-y);
        if (t == 0.0) {
            return 0.0;
        }
        return f(t) * t;
    };
    return integrate(compactify(g), 0.0, 1.0, abs_tol);
}

Result integrate_to_infinity(const Integrand& f, double a, double abs_tol) {
    require(a > 0.0, "integrate_to_infinity: positive lower limit required");
    Integrand g = [&f, a](double y) {
        const double t = a * std::exp(y);
        if (!std::isfinite(t)) {
            return 0.0;
        }
        const double v = f(t);
        return v == 0.0 ? 0.0 : v * t;
    };
    return integrate(compactify(g), 0.0, 1.0, abs_tol);
}

Result integrate_half_line(const Integrand& f, std::span<const double> breakpoints,
                           double abs_tol) {
    std::vector<double> bps;
    for (double x : breakpoints) {
        if (x > 0.0 && std::isfinite(x)) {
            bps.push_back(x);
        }
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end(),
                          [](double x, double y) { return std::abs(x - y) <= 1e-14 * y; }),
              bps.end());
    if (bps.empty()) {
        bps.push_back(1.0);
    }
    const double piece_tol = abs_tol / static_cast<double>(bps.size() + 1);
    Result total = integrate_from_zero(f, bps.front(), piece_tol);
    auto accumulate = [&total](const Result& r) {
        total.value += r.value;
        total.error += r.error;
        total.converged = total.converged && r.converged;
    };
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
        accumulate(integrate_log(f, bps[i], bps[i + 1], piece_tol));
    }
    accumulate(integrate_to_infinity(f, bps.back(), piece_tol));
    return total;
}

Result integrate_real_line(const Integrand& f, double abs_tol) {
    Integrand folded = [&f](double y) { return f(y) + f(-y); };
    return integrate(compactify(folded), 0.0, 1.0, abs_tol);
}

Result integrate_unit_singular(const std::function<double(double, double)>& f, double abs_tol) {
    // Left half: x = e^{-y} / 2; right half: 1 - x = e^{-y} / 2.
    Integrand left = [&f](double y) {
        const double x = 0.5 * std::exp(-y);
        return x == 0.0 ? 0.0 : f(x, 1.0 - x) * x;
    };
    Integrand right = [&f](double y) {
        const double c = 0.5 * std::exp(-y);
        return c == 0.0 ? 0.0 : f(1.0 - c, c) * c;
    };
    Result l = integrate(compactify(left), 0.0, 1.0, 0.5 * abs_tol);
    Result r = integrate(compactify(right), 0.0, 1.0, 0.5 * abs_tol);
    return {l.value + r.value, l.error + r.error, l.converged && r.converged};
}

LogTimeRule::LogTimeRule(double t_min, double t_max, double panels_per_unit_log) {
    require(t_min > 0.0 && t_max > t_min, "LogTimeRule: need 0 < t_min < t_max");
    require(panels_per_unit_log > 0.0, "LogTimeRule: panel density must be positive");
    using G = boost::math::quadrature::gauss<double, kGaussPoints>;
    const auto& gx = G::abscissa();
    const auto& gw = G::weights();
    const double x0 = std::log(t_min);
    const double x1 = std::log(t_max);
    const auto panels =
        static_cast<std::size_t>(std::ceil((x1 - x0) * panels_per_unit_log));
    const double width = (x1 - x0) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = x0 + (static_cast<double>(p) + 0.5) * width;
        const double half = 0.5 * width;
        for (std::size_t j = 0; j < gx.size(); ++j) {
            for (int sign : {-1, 1}) {
                const double x = mid + sign * half * gx[j];
                const double t = std::exp(x);
                nodes_.push_back(t);
                weights_.push_back(gw[j] * half * t);
            }
        }
    }
}

}  // namespace smr::quad
