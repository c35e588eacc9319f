// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "smr/error.hpp"
#include "smr/harness.hpp"

namespace fs = std::filesystem;
using smr::harness::Json;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int exit_code(int status) {
#ifdef WEXITSTATUS
    return WEXITSTATUS(status);
#else
    return status;
#endif
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("smrlab_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("config round trip and hash", "[config]") {
    for (const auto& kind : smr::harness::experiment_kinds()) {
        const auto cfg = smr::harness::default_config(kind);
        const auto back = smr::harness::load_config(smr::harness::to_json(cfg));
        CHECK(smr::harness::to_json(back) == smr::harness::to_json(cfg));
        CHECK(smr::harness::config_hash(back) == smr::harness::config_hash(cfg));
        CHECK(smr::harness::config_hash(cfg).size() == 16);
    }
    auto a = smr::harness::default_config("maxreg");
    auto b = a;
    b.mc.seed = 1;
    CHECK(smr::harness::config_hash(a) != smr::harness::config_hash(b));
    b = a;
    b.output.dir = "elsewhere";
    CHECK(smr::harness::config_hash(a) == smr::harness::config_hash(b));
}

TEST_CASE("config validation lists offending fields", "[config]") {
    Json doc = {{"experiment", "maxreg"}, {"exponents", {{"p", 1.5}, {"q", 2.0}}}};
    try {
        smr::harness::load_config(doc);
        FAIL("expected a validation error");
    } catch (const smr::ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("violates the hypothesis p ∈ (2,∞) or p = q = 2") != std::string::npos);
    }
    Json many = {{"experiment", "maxreg"},
                 {"grid", {{"N", 0}}},
                 {"exponents", {{"theta", 0.7}}},
                 {"bogus", 1}};
    try {
        smr::harness::load_config(many);
        FAIL("expected a validation error");
    } catch (const smr::ValidationError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("grid.N") != std::string::npos);
        CHECK(msg.find("theta") != std::string::npos);
        CHECK(msg.find("bogus") != std::string::npos);
    }
    CHECK_THROWS_AS(smr::harness::load_config(Json{{"experiment", "nope"}}), smr::ValidationError);
}

TEST_CASE("emitters", "[emit]") {
    CHECK(std::string(smr::harness::kCsvHeader) == "experiment,p,q,theta,K,T,N,N_mc,ratio,stderr");
    smr::harness::ResultRecord empty;
    CHECK(smr::harness::csv_text(empty) == std::string(smr::harness::kCsvHeader) + "\n");
    CHECK(smr::harness::jsonl_text(empty).empty());

    const auto cfg = smr::harness::default_config("kernels");
    const auto rec = smr::harness::run(cfg, 1);
    REQUIRE_FALSE(rec.probes.empty());
    const auto parsed = smr::harness::parse_jsonl(smr::harness::jsonl_text(rec));
    REQUIRE(parsed.size() == rec.probes.size());
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        CHECK(parsed[i] == rec.probes[i]);
        CHECK(parsed[i]["config_hash"] == smr::harness::config_hash(cfg));
        CHECK(parsed[i]["rng"] == smr::harness::kRngId);
    }

    const auto dir = scratch("emit");
    const auto paths = smr::harness::emit(rec, cfg, dir, "both");
    const auto csv = slurp(paths.csv);
    CHECK(csv.rfind(std::string(smr::harness::kCsvHeader) + "\n", 0) == 0);
    CHECK(slurp(paths.plot).rfind(smr::harness::kPlotHeader, 0) == 0);
    CHECK(fs::exists(paths.meta));
    const auto only = smr::harness::emit(rec, cfg, scratch("emit_jsonl"), "jsonl");
    CHECK(fs::exists(only.jsonl));
    CHECK_FALSE(fs::exists(only.csv));
}

TEST_CASE("results do not depend on the thread count", "[determinism]") {
    auto cfg = smr::harness::default_config("maxreg");
    cfg.grid.steps = 100;
    cfg.mc.paths = 64;
    cfg.mc.seed = 77;
    const auto one = smr::harness::run(cfg, 1);
    const auto eight = smr::harness::run(cfg, 8);
    CHECK(smr::harness::csv_text(one) == smr::harness::csv_text(eight));
    CHECK(smr::harness::jsonl_text(one) == smr::harness::jsonl_text(eight));
}

TEST_CASE("CLI exit codes", "[cli]") {
    const std::string exe = SMRLAB_EXE;
    const auto dir = scratch("cli");
    const auto ok = std::system((exe + " verify-kernels --out " + (dir / "ok").string() +
                                 " --format csv > /dev/null 2>&1")
                                    .c_str());
    CHECK(exit_code(ok) == 0);
    CHECK(fs::exists(dir / "ok" / "summary.csv"));

    {
        std::ofstream bad(dir / "bad.json");
        bad << R"({"experiment": "maxreg", "exponents": {"p": 1.5}})";
    }
    const auto rejected = std::system((exe + " simulate --config " + (dir / "bad.json").string() +
                                       " --out " + (dir / "bad").string() + " > /dev/null 2>&1")
                                          .c_str());
    CHECK(exit_code(rejected) == 2);
    const auto fmt = std::system((exe + " simulate --format xml > /dev/null 2>&1").c_str());
    CHECK(exit_code(fmt) == 2);
}

TEST_CASE("counterexample record and repeat runs", "[run]") {
    auto cfg = smr::harness::default_config("counterexample");
    const auto a = smr::harness::run(cfg, 1);
    const auto b = smr::harness::run(cfg, 1);
    CHECK(smr::harness::jsonl_text(a) == smr::harness::jsonl_text(b));
    double last = 0.0;
    for (int k : cfg.ks) {
        for (const auto& p : a.probes) {
            if (p["probe"] == "witness-K" + std::to_string(k)) {
                const double r2 = p["ratio2"].get<double>();
                CHECK(r2 > last);
                last = r2;
            }
        }
    }
    CHECK(last > 0.0);
}

TEST_CASE("empty record writes header-only files", "[emit]") {
    smr::harness::ResultRecord empty;
    const auto cfg = smr::harness::default_config("maxreg");
    const auto paths = smr::harness::emit(empty, cfg, scratch("empty"), "both");
    CHECK(slurp(paths.jsonl).empty());
    CHECK(slurp(paths.csv) == std::string(smr::harness::kCsvHeader) + "\n");
    CHECK(slurp(paths.plot) == std::string(smr::harness::kPlotHeader) + "\n");
}
