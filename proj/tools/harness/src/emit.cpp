// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <fstream>
#include <sstream>

#include "smr/harness.hpp"

namespace smr::harness {

namespace {

std::string cell(const Json& j) {
    if (j.is_null()) {
        return "";
    }
    if (j.is_string()) {
        return j.get<std::string>();
    }
    return j.dump();
}

std::string number(double x) { return Json(x).dump(); }

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw std::runtime_error("write failed for " + path.string());
    }
}

}  // namespace

std::string jsonl_text(const ResultRecord& record) {
    std::string out;
    for (const auto& p : record.probes) {
        out += p.dump();
        out += '\n';
    }
    return out;
}

std::vector<Json> parse_jsonl(const std::string& text) {
    std::vector<Json> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            out.push_back(Json::parse(line));
        }
    }
    return out;
}

std::string csv_text(const ResultRecord& record) {
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto& p : record.probes) {
        out += cell(p.at("experiment")) + ":" + cell(p.at("probe"));
        for (const char* key : {"p", "q", "theta", "K", "T", "N", "N_mc", "ratio", "stderr"}) {
            out += ',';
            out += cell(p.value(key, Json()));
        }
        out += '\n';
    }
    return out;
}

std::string plot_text(const ResultRecord& record) {
    std::string out = std::string(kPlotHeader) + "\n";
    for (const auto& pt : record.plot) {
        out += pt.experiment + "," + pt.series + "," + pt.x_name + "," + number(pt.x) + "," +
               number(pt.ratio) + "," + number(pt.stderr_ratio) + "\n";
    }
    return out;
}

EmitPaths emit(const ResultRecord& record, const ExperimentConfig& cfg,
               const std::filesystem::path& dir, const std::string& format) {
    std::filesystem::create_directories(dir);
    EmitPaths paths;
    if (format == "jsonl" || format == "both") {
        paths.jsonl = dir / "results.jsonl";
        write_file(paths.jsonl, jsonl_text(record));
    }
    if (format == "csv" || format == "both") {
        paths.csv = dir / "summary.csv";
        paths.plot = dir / "plot_data.csv";
        write_file(paths.csv, csv_text(record));
        write_file(paths.plot, plot_text(record));
    }
    Json meta;
    meta["config_hash"] = record.config_hash;
    meta["rng"] = record.rng;
    meta["version"] = record.version;
    meta["wall_clock_seconds"] = record.wall_clock;
    meta["probes"] = record.probes.size();
    meta["config"] = to_json(cfg);
    paths.meta = dir / "run_meta.json";
    write_file(paths.meta, meta.dump(2) + "\n");
    return paths;
}

}  // namespace smr::harness
