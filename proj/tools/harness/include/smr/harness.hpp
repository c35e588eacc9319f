// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace smr::harness {

using Json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kRngId = "splitmix64-counter/derive-v1";
inline constexpr const char* kCsvHeader = "experiment,p,q,theta,K,T,N,N_mc,ratio,stderr";
inline constexpr const char* kPlotHeader = "experiment,series,x_name,x,ratio,stderr";

struct ModelSpec {
    std::string kind = "diagonal";  // diagonal | ladder | torus | dirichlet
    std::vector<double> eigenvalues{1.0};
    int modes = 8;
    double base = 4.0;
    int dim = 1;
    int n = 16;
    double shift = 1.0;
};

struct GridSpec {
    double horizon = 1.0;
    std::size_t steps = 1000;
};

struct ExponentSpec {
    double p = 2.0;
    double q = 2.0;
    double theta = 0.0;
    double delta = 0.0;
};

struct McSpec {
    std::size_t paths = 2000;
    std::uint64_t seed = 0;
};

struct EnsembleSpec {
    std::size_t count = 5;
    std::size_t dims = 1;
    double feedback = 0.5;
};

struct OutputSpec {
    std::string dir = "out";
    std::string format = "both";  // jsonl | csv | both
};

struct ExperimentConfig {
    std::string experiment = "maxreg";
    ModelSpec model;
    GridSpec grid;
    ExponentSpec exponents;
    McSpec mc;
    EnsembleSpec ensemble;
    std::vector<int> ks{8, 12, 16, 20, 24};
    std::vector<std::size_t> members{2, 4, 8, 16, 32};
    std::vector<std::size_t> components{8, 64};
    std::size_t trials = 4;
    std::size_t functions = 1000;
    std::size_t cells = 64;
    double r = 1.5;
    double s = 2.0;
    std::size_t refinements = 2;
    std::size_t search_sweeps = 0;
    bool dyadic = false;
    OutputSpec output;
};

/// Experiment kinds accepted in configs.
const std::vector<std::string>& experiment_kinds();

/// Parses a config; absent keys take the experiment's defaults. Every offending field
/// is listed in the thrown ValidationError.
ExperimentConfig load_config(const Json& doc);
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Defaults for an experiment kind.
ExperimentConfig default_config(const std::string& experiment);

/// Fully explicit serialization (round-trips through load_config).
Json to_json(const ExperimentConfig& cfg);

/// FNV-1a 64 of the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

struct PlotPoint {
    std::string experiment;
    std::string series;
    std::string x_name;
    double x = 0.0;
    double ratio = 0.0;
    double stderr_ratio = 0.0;
};

struct ResultRecord {
    std::string config_hash;
    std::string rng = kRngId;
    std::string version = kVersion;
    std::vector<Json> probes;
    std::vector<PlotPoint> plot;
    double wall_clock = 0.0;
};

/// Dispatches to the configured experiment.
ResultRecord run(const ExperimentConfig& cfg, unsigned threads = 1);

struct EmitPaths {
    std::filesystem::path jsonl;
    std::filesystem::path csv;
    std::filesystem::path plot;
    std::filesystem::path meta;
};

/// Writes results.jsonl and/or summary.csv + plot_data.csv, plus run_meta.json.
EmitPaths emit(const ResultRecord& record, const ExperimentConfig& cfg,
               const std::filesystem::path& dir, const std::string& format);

/// One JSONL line per probe.
std::string jsonl_text(const ResultRecord& record);
/// Summary CSV text with the fixed header.
std::string csv_text(const ResultRecord& record);
/// Plot-data CSV text.
std::string plot_text(const ResultRecord& record);

/// Parses JSONL text back into probe objects.
std::vector<Json> parse_jsonl(const std::string& text);

}  // namespace smr::harness
