// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "smr/convops.hpp"
#include "smr/error.hpp"
#include "smr/harness.hpp"
#include "smr/kernels.hpp"
#include "smr/maxreg.hpp"
#include "smr/stochastic.hpp"

namespace {

using smr::harness::Json;
using Clock = std::chrono::steady_clock;

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 20261019;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Probes of the full default suite keyed by experiment, plus the CSV text per thread count.
struct Suite {
    std::map<std::string, smr::harness::ResultRecord> records;
    std::map<std::string, std::string> csv1;
    std::map<std::string, std::string> csv8;
};

const Json& probe(const smr::harness::ResultRecord& rec, const std::string& name) {
    for (const auto& p : rec.probes) {
        if (p["probe"] == name) {
            return p;
        }
    }
    throw smr::ValidationError("missing probe " + name);
}

Outcome exact_constant() {
    const auto t0 = Clock::now();
    const smr::TimeGrid grid(1.0, 1000);
    const std::vector<smr::SpectralModel> models{
        smr::make_model({1.0}, 2.0), smr::make_model({0.3, 2.0, 7.0, 50.0}, 2.0),
        smr::make_geometric_ladder(8, 2.0)};
    double worst = 0.0;
    for (std::size_t m = 0; m < models.size(); ++m) {
        for (std::uint64_t s = 0; s < 3; ++s) {
            const smr::IntegrandSpec g{
                smr::random_process(grid.steps(), models[m].size(), 1 + s, smr::derive_seed(kSeed, s)),
                0.0};
            const auto r = smr::maxreg_ratio(models[m], g, grid, 2.0, 0.0, {});
            worst = std::max(worst, std::abs(r.ratio * r.ratio / 0.5 - 1.0));
        }
    }
    const double secs = seconds_since(t0) / 9.0;
    return {worst <= 1e-3 && secs < 5.0,
            fmt("max rel error of ratio^2 vs 0.5 = %.3e, %.3f s per probe", worst, secs)};
}

Outcome poisson() {
    const auto t0 = Clock::now();
    const double e = smr::poisson_reconstruct([](std::complex<double> z) { return std::exp(-z); },
                                              1.0, kPi / 4);
    const double one = smr::poisson_reconstruct(
        [](std::complex<double>) { return std::complex<double>(1.0, 0.0); }, 1.0, kPi / 4);
    const double secs = seconds_since(t0);
    const double e_err = std::abs(e - std::exp(-1.0));
    const double one_err = std::abs(one - 1.0);
    return {e_err <= 1e-8 && one_err <= 1e-9 && secs < 1.0,
            fmt("exp(-z): %.10f (err %.2e); 1: err %.2e; %.3f s", e, e_err, one_err, secs)};
}

Outcome spoisson() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (double lambda : {0.5, 2.0, 8.0}) {
        for (double t : {0.25, 1.0, 3.0}) {
            for (double theta : {0.0, 0.25}) {
                for (double alpha : {kPi / 4, kPi / 3}) {
                    worst = std::max(worst,
                                     smr::spoisson_identity_check(lambda, t, theta, alpha).abs_error);
                }
            }
        }
    }
    const double secs = seconds_since(t0);
    return {worst <= 1e-8 && secs < 5.0, fmt("max abs error %.2e over 36 points, %.3f s", worst, secs)};
}

Outcome kclass() {
    const auto a = smr::kclass_seminorm(smr::exponential_kernel(1.0, 1.0));
    const auto b = smr::kclass_seminorm(smr::exponential_kernel(2.0, 1.0));
    const bool ok = std::abs(a.value - 0.8862269) <= 1e-7 + 1e-8 && a.is_member &&
                    std::abs(a.value - std::sqrt(kPi) / 2) <= 1e-8 &&
                    std::abs(b.value - std::sqrt(kPi)) <= 1e-8 && !b.is_member;
    return {ok, fmt("e^-t: %.10f member=%d; 2e^-t: %.10f member=%d", a.value, a.is_member,
                    b.value, b.is_member)};
}

Outcome ou() {
    const double target = -std::expm1(-2.0) / 2.0;
    const auto model = smr::make_model({1.0}, 2.0);
    const smr::TimeGrid grid(1.0, 1000);
    const auto g = smr::constant_process(1000, 1, 1, 1.0);
    const auto sq = smr::map_paths(10000, kSeed, 1, [&](std::size_t, std::uint64_t s) {
        const auto u = smr::stoch_convolution(model, g, smr::sample_noise(grid, 1, s), 0.0, 0.0);
        return u.at(1000, 0) * u.at(1000, 0);
    });
    const auto m = smr::mean_estimate(sq);
    const auto var =
        smr::propagate_variance(model, g, grid, 0.0, smr::NoiseScheme::kExactExponential);
    double worst = 0.0;
    for (std::size_t n = 0; n <= 1000; ++n) {
        worst = std::max(worst, std::abs(var.at(n, 0) + std::expm1(-2.0 * grid.edge(n)) / 2.0));
    }
    const double z = std::abs(m.mean - target) / m.stderr_mean;
    return {z <= 3.0 && worst <= 1e-12,
            fmt("MC %.6f +- %.6f (%.2f SE from 0.4323324); propagation max error %.2e", m.mean,
                m.stderr_mean, z, worst)};
}

Outcome reduction() {
    const auto kernel = smr::exponential_kernel(1.0, 1.0);
    const std::array<std::size_t, 3> steps{250, 500, 1000};
    std::array<double, 3> err{};
    for (std::size_t l = 0; l < steps.size(); ++l) {
        const auto e = smr::map_paths(100, kSeed, 1, [&](std::size_t, std::uint64_t s) {
            const auto fine = smr::sample_noise(smr::TimeGrid(1.0, steps.back()), 1, s);
            const auto noise = smr::coarsen(fine, steps.back() / steps[l]);
            return smr::reduction_mismatch(kernel, smr::constant_process(steps[l], 1, 1, 1.0), noise);
        });
        err[l] = smr::mean_estimate(e).mean;
    }
    const double f1 = err[0] / err[1];
    const double f2 = err[1] / err[2];
    const auto in = [](double f) { return f >= 1.3 && f <= 2.8; };
    return {in(f1) && in(f2), fmt("mismatch %.3e, %.3e, %.3e; halving factors %.3f, %.3f", err[0],
                                  err[1], err[2], f1, f2)};
}

Outcome counterexample(const Suite& suite) {
    const auto& rec = suite.records.at("counterexample");
    bool lower = true;
    std::string ladder;
    for (int k : {8, 12, 16, 20, 24}) {
        const auto& w = probe(rec, "witness-K" + std::to_string(k));
        const double r2 = w["ratio2"].get<double>();
        const double bound = 0.1162721 * std::sqrt(static_cast<double>(k));
        lower = lower && r2 > bound;
        ladder += fmt(" K=%d:%.4f>%.4f", k, r2, bound);
    }
    const double growth = probe(rec, "witness-K24")["ratio2"].get<double>() /
                          probe(rec, "witness-K8")["ratio2"].get<double>();
    const double c8 = probe(rec, "control-K8")["ratio"].get<double>();
    double cmin = c8;
    double cmax = c8;
    for (int k : {12, 16, 20, 24}) {
        const double c = probe(rec, "control-K" + std::to_string(k))["ratio"].get<double>();
        cmin = std::min(cmin, c);
        cmax = std::max(cmax, c);
    }
    const double variation = (cmax - cmin) / cmax;
    const bool ok = lower && growth >= 1.5 && variation <= 0.10;
    return {ok, fmt("ratio2%s; growth %.4f; p=4 control %.4f..%.4f (variation %.1f%%, limit 10%%)",
                    ladder.c_str(), growth, cmin, cmax, 100.0 * variation)};
}

Outcome beta() {
    double worst = 0.0;
    for (double theta : {0.25, 0.5, 0.75}) {
        for (auto [r, t] : {std::pair{0.0, 1.0}, std::pair{2.0, 5.0}}) {
            worst = std::max(worst, std::abs(smr::beta_identity_check(theta, r, t).normalized - 1.0));
        }
    }
    const double raw = smr::beta_identity_check(0.5, 0.0, 1.0).raw;
    return {worst <= 1e-10 && std::abs(raw - kPi) <= 1e-10,
            fmt("normalized max error %.2e; raw(1/2) = %.12f", worst, raw)};
}

Outcome factorization(const Suite& suite) {
    const auto& rec = suite.records.at("factorization");
    const auto& a = probe(rec, "error-N250");
    const auto& b = probe(rec, "error-N500");
    const auto& c = probe(rec, "error-N1000");
    const auto band = [](const Json& x, const Json& y) {
        const double sx = x["stderr"].get<double>();
        const double sy = y["stderr"].get<double>();
        return y["ratio"].get<double>() < x["ratio"].get<double>() + 2.0 * std::hypot(sx, sy);
    };
    return {band(a, b) && band(b, c),
            fmt("errors at dt 4e-3, 2e-3, 1e-3: %.4e, %.4e, %.4e", a["ratio"].get<double>(),
                b["ratio"].get<double>(), c["ratio"].get<double>())};
}

Outcome fefferman_stein(const Suite& suite) {
    const auto& rec = suite.records.at("maximal-fn");
    const double s8 = probe(rec, "fefferman-stein-K8")["ratio"].get<double>();
    const double s64 = probe(rec, "fefferman-stein-K64")["ratio"].get<double>();
    return {std::isfinite(s8) && std::isfinite(s64) && s64 <= 2.0 * s8,
            fmt("sup ratio K=8: %.4f, K=64: %.4f over %zu functions", s8, s64,
                static_cast<std::size_t>(probe(rec, "fefferman-stein-K8")["N_mc"].get<std::size_t>()))};
}

Outcome rbound(const Suite& suite) {
    const auto& rec = suite.records.at("rbound");
    const double r2 = probe(rec, "J-members-2")["ratio"].get<double>();
    const double r32 = probe(rec, "J-members-32")["ratio"].get<double>();
    const auto& sc = probe(rec, "scalar-oracle");
    const double s = sc["ratio"].get<double>();
    const double growth = r32 / r2 - 1.0;
    const bool exact = sc["exact_signs"].get<bool>();
    return {growth < 0.20 && exact && std::abs(s / 1.7 - 1.0) <= 0.10,
            fmt("J growth N=2->32: %.1f%%; scalar oracle %.4f vs max|c| 1.7 (exact signs %d)",
                100.0 * growth, s, exact)};
}

Outcome determinism(const Suite& suite) {
    std::string diff;
    std::size_t bytes = 0;
    for (const auto& [kind, text] : suite.csv1) {
        bytes += text.size();
        if (suite.csv8.at(kind) != text) {
            diff += " " + kind;
        }
    }
    return {diff.empty(), diff.empty() ? fmt("%zu experiments, %zu CSV bytes identical at 1 and 8 threads",
                                             suite.csv1.size(), bytes)
                                       : "differs:" + diff};
}

Suite run_suite() {
    Suite suite;
    for (const auto& kind : smr::harness::experiment_kinds()) {
        auto cfg = smr::harness::default_config(kind);
        cfg.mc.seed = kSeed;
        auto rec = smr::harness::run(cfg, 1);
        suite.csv1[kind] = smr::harness::csv_text(rec) + smr::harness::plot_text(rec);
        suite.records[kind] = std::move(rec);
        const auto rec8 = smr::harness::run(cfg, 8);
        suite.csv8[kind] = smr::harness::csv_text(rec8) + smr::harness::plot_text(rec8);
    }
    return suite;
}

}  // namespace

int main() {
    Suite suite;
    try {
        suite = run_suite();
    } catch (const std::exception& e) {
        std::printf("suite run failed: %s\n", e.what());
        return 1;
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"exact p=q=2 constant", exact_constant},
        {"Poisson reconstruction", poisson},
        {"scalar Poisson identity", spoisson},
        {"K-class seminorms", kclass},
        {"OU closed form", ou},
        {"pathwise reduction convergence", reduction},
        {"counterexample ladder", [&] { return counterexample(suite); }},
        {"beta identity", beta},
        {"factorization refinement", [&] { return factorization(suite); }},
        {"Fefferman-Stein dimension stability", [&] { return fefferman_stein(suite); }},
        {"R-bound stability", [&] { return rbound(suite); }},
        {"determinism across threads", [&] { return determinism(suite); }},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s [%zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
