// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <chrono>
#include <cmath>
#include <complex>
#include <numbers>

#include "smr/convops.hpp"
#include "smr/error.hpp"
#include "smr/harness.hpp"
#include "smr/kernels.hpp"
#include "smr/maxreg.hpp"
#include "smr/parallel.hpp"

namespace smr::harness {

namespace {

constexpr std::uint64_t kMemberSalt = 0x5EED5EED5EED5EEDULL;

SpectralModel build_model(const ModelSpec& m, double q) {
    if (m.kind == "ladder") {
        return make_geometric_ladder(m.modes, q, m.base);
    }
    if (m.kind == "torus") {
        return make_model(FourierTorus{m.dim, m.n, m.shift}, q);
    }
    if (m.kind == "dirichlet") {
        return make_model(DirichletSine{m.n}, q);
    }
    return make_model(m.eigenvalues, q);
}

class Builder {
public:
    Builder(const ExperimentConfig& cfg, ResultRecord& rec) : cfg_(cfg), rec_(rec) {}

    Json& add(const std::string& probe, const RatioStatistic& s) {
        Json j = base(probe);
        j["p"] = s.p;
        j["q"] = s.q;
        j["theta"] = s.theta;
        j["K"] = s.modes;
        j["T"] = s.horizon;
        j["N"] = s.steps;
        j["N_mc"] = s.n_mc;
        j["ratio"] = s.ratio;
        j["stderr"] = s.stderr_ratio;
        j["numerator"] = s.numerator;
        j["denominator"] = s.denominator;
        j["dt"] = s.dt;
        j["gamma"] = s.gamma;
        j["flag"] = s.flag;
        rec_.probes.push_back(std::move(j));
        return rec_.probes.back();
    }

    Json& value(const std::string& probe, double v, double err = 0.0) {
        Json j = base(probe);
        j["ratio"] = v;
        j["stderr"] = err;
        rec_.probes.push_back(std::move(j));
        return rec_.probes.back();
    }

    void plot(const std::string& series, const std::string& x_name, double x, double ratio,
              double err) {
        rec_.plot.push_back({cfg_.experiment, series, x_name, x, ratio, err});
    }

private:
    Json base(const std::string& probe) const {
        Json j;
        j["experiment"] = cfg_.experiment;
        j["probe"] = probe;
        for (const char* key : {"p", "q", "theta", "K", "T", "N", "N_mc"}) {
            j[key] = nullptr;
        }
        j["ratio"] = nullptr;
        j["stderr"] = nullptr;
        j["config_hash"] = rec_.config_hash;
        j["rng"] = rec_.rng;
        return j;
    }

    const ExperimentConfig& cfg_;
    ResultRecord& rec_;
};

MonteCarloSpec mc_spec(const ExperimentConfig& cfg, unsigned threads) {
    return {cfg.mc.paths, cfg.mc.seed, threads};
}

std::vector<IntegrandSpec> ensemble_for(const ExperimentConfig& cfg, const SpectralModel& model,
                                        const TimeGrid& grid) {
    return standard_ensemble(model.size(), grid, cfg.ensemble.dims, cfg.ensemble.count,
                             cfg.mc.seed, cfg.ensemble.feedback);
}

void run_ito(const ExperimentConfig& cfg, unsigned threads, Builder& b) {
    const auto model = build_model(cfg.model, cfg.exponents.q);
    const TimeGrid grid(cfg.grid.horizon, cfg.grid.steps);
    const auto range = ito_isomorphism_range(model, ensemble_for(cfg, model, grid), grid,
                                             cfg.exponents.p, mc_spec(cfg, threads));
    for (std::size_t e = 0; e < range.members.size(); ++e) {
        b.add("member-" + std::to_string(e), range.members[e]);
    }
    auto& j = b.value("range-max", range.max_ratio);
    j["min_ratio"] = range.min_ratio;
}

void run_solution(const ExperimentConfig& cfg, unsigned threads, Builder& b, bool shift) {
    const auto model = build_model(cfg.model, cfg.exponents.q);
    const TimeGrid grid(cfg.grid.horizon, cfg.grid.steps);
    const auto ensemble = ensemble_for(cfg, model, grid);
    for (std::size_t e = 0; e < ensemble.size(); ++e) {
        auto mc = mc_spec(cfg, threads);
        mc.seed = derive_seed(cfg.mc.seed ^ kMemberSalt, e);
        const auto s = shift ? higher_regularity_shift(model, ensemble[e], grid,
                                                       cfg.exponents.delta, cfg.exponents.p, mc)
                             : maxreg_ratio(model, ensemble[e], grid, cfg.exponents.p,
                                            cfg.exponents.theta, mc);
        auto& j = b.add("member-" + std::to_string(e), s);
        if (shift) {
            j["delta"] = cfg.exponents.delta;
        }
    }
}

void run_estimate(const ExperimentConfig& cfg, unsigned threads, Builder& b) {
    if (cfg.dyadic) {
        std::vector<ConstantEstimate> out(cfg.ks.size());
        parallel_for(cfg.ks.size(), threads, [&](std::size_t i) {
            out[i] = estimate_constant_dyadic(cfg.ks[i], cfg.exponents.q, cfg.ensemble.count,
                                              cfg.mc.seed);
        });
        for (std::size_t i = 0; i < out.size(); ++i) {
            auto& j = b.add("dyadic-sup-K" + std::to_string(cfg.ks[i]), out[i].sup);
            j["witness"] = out[i].witness;
            j["ensemble"] = out[i].ensemble;
            b.plot("sup-ratio-vs-K", "K", cfg.ks[i], out[i].sup.ratio, 0.0);
        }
        return;
    }
    const auto model = build_model(cfg.model, cfg.exponents.q);
    const TimeGrid grid(cfg.grid.horizon, cfg.grid.steps);
    const auto est = estimate_constant(model, ensemble_for(cfg, model, grid), grid,
                                       cfg.exponents.p, cfg.exponents.theta,
                                       mc_spec(cfg, threads), cfg.refinements);
    auto& j = b.add("sup", est.sup);
    j["witness"] = est.witness;
    j["ensemble"] = est.ensemble;
    for (std::size_t e = 0; e < est.members.size(); ++e) {
        b.add("member-" + std::to_string(e), est.members[e]);
    }
    for (const auto& s : est.dt_trace) {
        b.add("witness-dt", s);
        b.plot("ratio-vs-dt", "dt", s.dt, s.ratio, s.stderr_ratio);
    }
    for (const auto& s : est.mc_trace) {
        b.add("witness-nmc", s);
        b.plot("ratio-vs-nmc", "N_mc", static_cast<double>(s.n_mc), s.ratio, s.stderr_ratio);
    }
}

void run_counterexample(const ExperimentConfig& cfg, unsigned threads, Builder& b) {
    const double q = cfg.exponents.q;
    std::vector<CounterexampleRow> rows(cfg.ks.size());
    std::vector<double> l1(cfg.ks.size());
    parallel_for(cfg.ks.size(), threads, [&](std::size_t i) {
        const int k = cfg.ks[i];
        rows[i] = counterexample_probe(q, std::span<const int>(&k, 1), cfg.search_sweeps).front();
        std::vector<double> v(static_cast<std::size_t>(k), std::pow(k, -2.0 / q));
        l1[i] = deterministic_l1_probe(q, v);
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        auto& w = b.value("witness-K" + std::to_string(r.modes), std::sqrt(r.ratio2));
        w["p"] = 2.0;
        w["q"] = q;
        w["theta"] = 0.0;
        w["K"] = r.modes;
        w["ratio2"] = r.ratio2;
        w["lower_bound"] = r.lower_bound;
        auto& c = b.value("control-K" + std::to_string(r.modes), r.control_ratio);
        c["p"] = q;
        c["q"] = q;
        c["theta"] = 0.0;
        c["K"] = r.modes;
        auto& d = b.value("l1-K" + std::to_string(r.modes), l1[i]);
        d["q"] = q;
        d["K"] = r.modes;
        b.plot("ratio2-vs-K", "K", r.modes, r.ratio2, 0.0);
        b.plot("lower-bound-vs-K", "K", r.modes, r.lower_bound, 0.0);
        b.plot("control-vs-K", "K", r.modes, r.control_ratio, 0.0);
        b.plot("l1-vs-K", "K", r.modes, l1[i], 0.0);
        if (cfg.search_sweeps > 0) {
            auto& s = b.value("search-K" + std::to_string(r.modes), std::sqrt(r.search_ratio2));
            s["p"] = 2.0;
            s["q"] = q;
            s["K"] = r.modes;
            s["ratio2"] = r.search_ratio2;
            b.plot("search-ratio2-vs-K", "K", r.modes, r.search_ratio2, 0.0);
        }
    }
}

void run_kernels(Builder& b) {
    const double pi = std::numbers::pi;
    const auto member = kclass_seminorm(exponential_kernel(1.0, 1.0));
    b.value("kclass-exp", member.value)["is_member"] = member.is_member;
    const auto outside = kclass_seminorm(exponential_kernel(2.0, 1.0));
    b.value("kclass-2exp", outside.value)["is_member"] = outside.is_member;

    const auto exp_z = [](std::complex<double> z) { return std::exp(-z); };
    const auto one = [](std::complex<double>) { return std::complex<double>(1.0, 0.0); };
    b.value("poisson-exp", poisson_reconstruct(exp_z, 1.0, pi / 4))["expected"] = std::exp(-1.0);
    b.value("poisson-one", poisson_reconstruct(one, 1.0, pi / 4))["expected"] = 1.0;

    double worst = 0.0;
    for (double lambda : {0.5, 2.0, 8.0}) {
        for (double t : {0.25, 1.0, 3.0}) {
            for (double theta : {0.0, 0.25}) {
                for (double alpha : {pi / 4, pi / 3}) {
                    worst = std::max(worst,
                                     spoisson_identity_check(lambda, t, theta, alpha).abs_error);
                }
            }
        }
    }
    b.value("spoisson-max-error", worst);

    for (double alpha : {pi / 4, 2 * pi / 3}) {
        for (double theta : {0.0, 0.125, 0.25, 0.375, 0.5}) {
            const double v = kalpha_theta_time_seminorm(alpha, theta);
            auto& j = b.value("seminorm", v);
            j["theta"] = theta;
            j["alpha"] = alpha;
            b.plot(alpha < 1.0 ? "seminorm-vs-theta-alpha-pi/4" : "seminorm-vs-theta-alpha-2pi/3",
                   "theta", theta, v, 0.0);
        }
    }
    const std::vector<double> dilations{0.1, 1.0, 10.0};
    const auto sq = hinf_square_constant(
        [](double t) { return std::complex<double>(std::sqrt(t) * std::exp(-t), 0.0); },
        dilations);
    b.value("square-constant", sq.c_phi)["invariance_error"] = sq.max_invariance_error;
}

void run_rbound(const ExperimentConfig& cfg, unsigned threads, Builder& b) {
    const TimeGrid grid(cfg.grid.horizon, cfg.grid.steps);
    RboundEnsembleSpec ens;
    ens.grid = grid;
    ens.modes = cfg.model.kind == "ladder" ? static_cast<std::size_t>(cfg.model.modes)
                                           : cfg.model.eigenvalues.size();
    ens.paths = cfg.mc.paths;
    ens.seed = cfg.mc.seed;
    ens.threads = threads;
    const double r_min = grid.dt();
    for (std::size_t n : cfg.members) {
        OperatorFamilySpec fam;
        fam.kind = FamilyKind::kJ;
        fam.p = cfg.exponents.p;
        fam.q = cfg.exponents.q;
        for (std::size_t j = 0; j < n; ++j) {
            const double frac = n == 1 ? 1.0 : static_cast<double>(j) / static_cast<double>(n - 1);
            fam.parameters.push_back(grid.horizon() * std::pow(r_min / grid.horizon(), 1.0 - frac));
        }
        const auto res = rbound_estimate(fam, ens, cfg.trials);
        auto& j = b.value("J-members-" + std::to_string(n), res.r_hat);
        j["p"] = fam.p;
        j["q"] = fam.q;
        j["K"] = ens.modes;
        j["T"] = grid.horizon();
        j["N"] = grid.steps();
        j["N_mc"] = ens.paths;
        j["members"] = n;
        b.plot("rhat-vs-members", "members", static_cast<double>(n), res.r_hat, 0.0);
    }
    OperatorFamilySpec scalar;
    scalar.kind = FamilyKind::kScalar;
    scalar.p = cfg.exponents.p;
    scalar.q = cfg.exponents.q;
    scalar.parameters = {0.3, -1.7, 0.9, 1.2, -0.4, 0.8, 1.1, -0.2};
    const auto res = rbound_estimate(scalar, ens, cfg.trials);
    auto& j = b.value("scalar-oracle", res.r_hat);
    j["max_abs_c"] = 1.7;
    j["exact_signs"] = res.exact_signs;
}

void run_maximal_fn(const ExperimentConfig& cfg, unsigned threads, Builder& b) {
    const double dt = 1.0 / static_cast<double>(cfg.cells);
    std::vector<RatioStatistic> out(cfg.components.size());
    parallel_for(cfg.components.size(), threads, [&](std::size_t i) {
        const auto ens =
            random_step_functions(cfg.functions, cfg.cells, cfg.components[i], cfg.mc.seed);
        out[i] = fefferman_stein_check(cfg.r, cfg.s, ens, dt);
    });
    for (std::size_t i = 0; i < out.size(); ++i) {
        auto& j = b.add("fefferman-stein-K" + std::to_string(cfg.components[i]), out[i]);
        j["r"] = cfg.r;
        j["s"] = cfg.s;
        b.plot("fs-sup-vs-K", "K", static_cast<double>(cfg.components[i]), out[i].ratio, 0.0);
    }
    const auto fs = random_step_functions(2, cfg.cells, 1, cfg.mc.seed ^ kMemberSalt);
    const auto pair = duality_pair_check(4.0 * dt, fs[0].data, fs[1].data, dt);
    auto& j = b.value("duality-abs-error", std::abs(pair.lhs - pair.rhs));
    j["lhs"] = pair.lhs;
    j["rhs"] = pair.rhs;
}

void run_factorization(const ExperimentConfig& cfg, unsigned threads, Builder& b) {
    const auto model = build_model(cfg.model, 2.0);
    const double theta = cfg.exponents.theta;
    const std::size_t finest = cfg.grid.steps << cfg.refinements;
    const TimeGrid fine(cfg.grid.horizon, finest);
    for (std::size_t r = 0; r <= cfg.refinements; ++r) {
        const std::size_t steps = cfg.grid.steps << r;
        const auto errors = map_paths(cfg.mc.paths, cfg.mc.seed, threads, [&](std::size_t, std::uint64_t s) {
            const auto noise = coarsen(sample_noise(fine, 1, s), finest / steps);
            const auto g = constant_process(steps, model.size(), 1, 1.0);
            return factorization_check(model, g, noise, theta);
        });
        const auto m = mean_estimate(errors);
        auto& j = b.value("error-N" + std::to_string(steps), m.mean, m.stderr_mean);
        j["theta"] = theta;
        j["K"] = model.size();
        j["T"] = cfg.grid.horizon;
        j["N"] = steps;
        j["N_mc"] = cfg.mc.paths;
        b.plot("error-vs-dt", "dt", cfg.grid.horizon / static_cast<double>(steps), m.mean,
               m.stderr_mean);
    }
    for (double th : {0.25, 0.5, 0.75}) {
        for (auto [r0, t0] : {std::pair{0.0, 1.0}, std::pair{2.0, 5.0}}) {
            const auto beta = beta_identity_check(th, r0, t0);
            auto& j = b.value("beta-normalized", beta.normalized);
            j["theta"] = th;
            j["raw"] = beta.raw;
            j["r"] = r0;
            j["t"] = t0;
        }
    }
    const auto sm = factorization_second_moments(model.eigenvalues().front(), theta,
                                                 cfg.grid.horizon);
    auto& j = b.value("second-moment-ratio", sm.factorized / sm.direct);
    j["theta"] = theta;
    j["factorized"] = sm.factorized;
    j["direct"] = sm.direct;
}

void run_maximal_estimate(const ExperimentConfig& cfg, unsigned threads, Builder& b) {
    const auto model = build_model(cfg.model, cfg.exponents.q);
    const double p = cfg.exponents.p;
    for (std::size_t r = 0; r <= cfg.refinements; ++r) {
        const TimeGrid grid(cfg.grid.horizon, cfg.grid.steps << r);
        const IntegrandSpec g{constant_process(grid.steps(), model.size(), 1, 1.0), 0.0};
        const auto est = maximal_estimate_probe(model, g, grid, p, mc_spec(cfg, threads));
        b.add("dt-" + std::to_string(r), est.stat)["endpoint_numerator"] = est.endpoint_numerator;
        b.plot("ratio-vs-dt", "dt", grid.dt(), est.stat.ratio, est.stat.stderr_ratio);
    }
    const TimeGrid grid(cfg.grid.horizon, cfg.grid.steps);
    const IntegrandSpec g{constant_process(grid.steps(), model.size(), 1, 1.0), 0.0};
    for (std::size_t r = 1; r <= cfg.refinements; ++r) {
        auto mc = mc_spec(cfg, threads);
        mc.paths <<= r;
        const auto est = maximal_estimate_probe(model, g, grid, p, mc);
        b.add("nmc-" + std::to_string(r), est.stat)["endpoint_numerator"] = est.endpoint_numerator;
        b.plot("ratio-vs-nmc", "N_mc", static_cast<double>(mc.paths), est.stat.ratio,
               est.stat.stderr_ratio);
    }
}

}  // namespace

ResultRecord run(const ExperimentConfig& cfg, unsigned threads) {
    require(threads >= 1, "threads must be >= 1");
    const auto start = std::chrono::steady_clock::now();
    ResultRecord rec;
    rec.config_hash = config_hash(cfg);
    Builder b(cfg, rec);
    const auto& kind = cfg.experiment;
    if (kind == "ito-iso") {
        run_ito(cfg, threads, b);
    } else if (kind == "maxreg") {
        run_solution(cfg, threads, b, false);
    } else if (kind == "shift") {
        run_solution(cfg, threads, b, true);
    } else if (kind == "estimate-constant") {
        run_estimate(cfg, threads, b);
    } else if (kind == "counterexample") {
        run_counterexample(cfg, threads, b);
    } else if (kind == "kernels") {
        run_kernels(b);
    } else if (kind == "rbound") {
        run_rbound(cfg, threads, b);
    } else if (kind == "maximal-fn") {
        run_maximal_fn(cfg, threads, b);
    } else if (kind == "factorization") {
        run_factorization(cfg, threads, b);
    } else if (kind == "maximal-estimate") {
        run_maximal_estimate(cfg, threads, b);
    } else {
        throw ValidationError("unknown experiment kind: " + kind);
    }
    rec.wall_clock =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

}  // namespace smr::harness
