// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "smr/error.hpp"
#include "smr/harness.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 1;
    std::string format;
};

void add_flags(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON experiment config")->check(CLI::ExistingFile);
    cmd->add_option("--seed", f.seed, "master seed (overrides mc.seed)");
    cmd->add_option("--out", f.out, "output directory (overrides output.dir)");
    cmd->add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1u, 1024u));
    cmd->add_option("--format", f.format, "jsonl, csv or both")
        ->check(CLI::IsMember({"jsonl", "csv", "both"}));
}

int execute(const std::string& command, const Flags& f) {
    using smr::harness::Json;
    Json doc = Json::object();
    if (!f.config.empty()) {
        std::ifstream in(f.config);
        try {
            doc = Json::parse(in);
        } catch (const nlohmann::json::parse_error& err) {
            throw smr::ValidationError("config is not valid JSON: " + std::string(err.what()));
        }
        smr::require(doc.is_object(), "invalid config: top level must be a JSON object");
    }
    static const std::map<std::string, std::string> fixed{
        {"estimate-constant", "estimate-constant"}, {"counterexample", "counterexample"},
        {"verify-kernels", "kernels"},              {"rbound", "rbound"},
        {"maximal-fn", "maximal-fn"},               {"factorization", "factorization"},
        {"maximal-estimate", "maximal-estimate"}};
    if (command == "simulate") {
        if (!doc.contains("experiment")) {
            doc["experiment"] = "maxreg";
        }
        const auto kind = doc["experiment"].is_string() ? doc["experiment"].get<std::string>() : "";
        smr::require(kind == "maxreg" || kind == "ito-iso" || kind == "shift",
                     "simulate runs the maxreg, ito-iso or shift experiments, not '" + kind + "'");
    } else {
        const auto& kind = fixed.at(command);
        if (doc.contains("experiment")) {
            smr::require(doc["experiment"] == kind,
                         "config experiment does not match the '" + command + "' subcommand");
        }
        doc["experiment"] = kind;
    }
    if (f.seed) {
        doc["mc"]["seed"] = *f.seed;
    }
    if (!f.out.empty()) {
        doc["output"]["dir"] = f.out;
    }
    if (!f.format.empty()) {
        doc["output"]["format"] = f.format;
    }
    const auto cfg = smr::harness::load_config(doc);
    const auto record = smr::harness::run(cfg, f.threads);
    const auto paths = smr::harness::emit(record, cfg, cfg.output.dir, cfg.output.format);
    std::cout << cfg.experiment << ": " << record.probes.size() << " probes, config "
              << record.config_hash << ", " << record.wall_clock << " s -> "
              << paths.meta.parent_path().string() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"smrlab: numerical probes for stochastic maximal regularity"};
    app.require_subcommand(1);
    Flags flags;
    const char* commands[][2] = {
        {"simulate", "maxreg, ito-iso or shift ratios over an ensemble"},
        {"estimate-constant", "sup ratio over an ensemble with refinement traces"},
        {"counterexample", "deterministic ladder probe for p = 2 < q"},
        {"verify-kernels", "kernel, Poisson and seminorm identities"},
        {"rbound", "empirical R-bounds of operator families"},
        {"maximal-fn", "vector-valued maximal function bounds"},
        {"factorization", "fractional-integration factorization checks"},
        {"maximal-estimate", "sup-in-time interpolation-norm ratio"}};
    for (const auto& c : commands) {
        add_flags(app.add_subcommand(c[0], c[1]), flags);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        return execute(command, flags);
    } catch (const smr::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const smr::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
