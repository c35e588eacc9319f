// Copyright 2026 The smrlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "smr/error.hpp"
#include "smr/harness.hpp"

namespace smr::harness {

const std::vector<std::string>& experiment_kinds() {
    static const std::vector<std::string> kinds{
        "ito-iso", "maxreg", "counterexample", "kernels", "rbound",
        "maximal-fn", "factorization", "maximal-estimate", "shift", "estimate-constant"};
    return kinds;
}

ExperimentConfig default_config(const std::string& experiment) {
    ExperimentConfig c;
    c.experiment = experiment;
    if (experiment == "ito-iso") {
        c.exponents.p = 4.0;
    } else if (experiment == "shift") {
        c.exponents.delta = 0.25;
    } else if (experiment == "counterexample") {
        c.exponents.q = 4.0;
    } else if (experiment == "rbound") {
        c.exponents.p = 3.0;
        c.exponents.q = 4.0;
        c.grid.steps = 64;
        c.mc.paths = 32;
        c.model.eigenvalues = {1.0, 2.0, 4.0, 8.0};
    } else if (experiment == "factorization") {
        c.exponents.theta = 0.25;
        c.grid.steps = 250;
        c.mc.paths = 100;
    } else if (experiment == "maximal-estimate") {
        c.exponents.p = 4.0;
        c.grid.steps = 250;
        c.mc.paths = 1000;
    }
    return c;
}

namespace {

class Reader {
public:
    explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

    template <class T>
    void get(const Json& obj, const char* key, const std::string& path, T& out) {
        if (!obj.contains(key)) {
            return;
        }
        try {
            out = obj.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            errors_.push_back(path + key + ": wrong type");
        }
    }

    void object(const Json& obj, const char* key, const std::string& path,
                const std::set<std::string>& allowed) {
        if (!obj.contains(key)) {
            return;
        }
        if (!obj.at(key).is_object()) {
            errors_.push_back(path + key + ": expected an object");
            return;
        }
        keys(obj.at(key), path + key + ".", allowed);
    }

    void keys(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
        for (const auto& item : obj.items()) {
            if (allowed.count(item.key()) == 0) {
                errors_.push_back(path + item.key() + ": unknown field");
            }
        }
    }

    void check(bool ok, const std::string& field, const std::string& message) {
        if (!ok) {
            errors_.push_back(field + ": " + message);
        }
    }

private:
    std::vector<std::string>& errors_;
};

const Json& sub(const Json& doc, const char* key) {
    static const Json empty = Json::object();
    return doc.contains(key) && doc.at(key).is_object() ? doc.at(key) : empty;
}

void validate(const ExperimentConfig& c, Reader& rd) {
    const auto& kinds = experiment_kinds();
    rd.check(std::find(kinds.begin(), kinds.end(), c.experiment) != kinds.end(), "experiment",
             "unknown experiment kind");
    const auto& m = c.model;
    rd.check(m.kind == "diagonal" || m.kind == "ladder" || m.kind == "torus" ||
                 m.kind == "dirichlet",
             "model.kind", "expected diagonal, ladder, torus or dirichlet");
    if (m.kind == "diagonal") {
        bool ok = !m.eigenvalues.empty();
        for (std::size_t k = 0; k < m.eigenvalues.size(); ++k) {
            ok = ok && m.eigenvalues[k] > 0.0 && (k == 0 || m.eigenvalues[k] >= m.eigenvalues[k - 1]);
        }
        rd.check(ok, "model.eigenvalues", "must be positive and nondecreasing");
    }
    if (m.kind == "ladder") {
        rd.check(m.modes >= 1 && m.modes <= 24, "model.modes", "must lie in [1, 24]");
        rd.check(m.base > 1.0, "model.base", "must exceed 1");
    }
    if (m.kind == "torus" || m.kind == "dirichlet") {
        rd.check(m.n >= 2 && m.n % 2 == 0, "model.n", "must be an even integer >= 2");
        rd.check(m.dim >= 1 && m.dim <= 3, "model.dim", "must lie in [1, 3]");
        rd.check(m.shift >= 0.0, "model.shift", "must be >= 0");
    }
    rd.check(c.grid.horizon > 0.0 && std::isfinite(c.grid.horizon), "grid.T", "must be positive");
    rd.check(c.grid.steps >= 1, "grid.N", "must be >= 1");
    const auto& e = c.exponents;
    rd.check(e.q >= 2.0 && std::isfinite(e.q), "exponents.q", "must lie in [2, inf)");
    rd.check(e.p > 1.0 && std::isfinite(e.p), "exponents.p", "must lie in (1, inf)");
    const bool solution = c.experiment == "maxreg" || c.experiment == "shift" ||
                          c.experiment == "estimate-constant";
    if (solution) {
        rd.check(e.p > 2.0 || (e.p == 2.0 && e.q >= 2.0), "exponents.p",
                 "violates the hypothesis p ∈ (2,∞) or p = q = 2");
        rd.check(e.theta >= 0.0 && e.theta < 0.5, "exponents.theta", "must lie in [0, 1/2)");
    }
    if (c.experiment == "shift") {
        rd.check(e.delta >= 0.0, "exponents.delta", "must be >= 0");
    }
    if (c.experiment == "factorization") {
        rd.check(e.theta > 0.0 && e.theta < 0.5, "exponents.theta", "must lie in (0, 1/2)");
    }
    if (c.experiment == "maximal-estimate") {
        rd.check(e.p > 2.0, "exponents.p", "must lie in (2, inf)");
    }
    if (c.experiment == "counterexample") {
        rd.check(e.q > 2.0, "exponents.q", "must exceed 2");
    }
    if (c.experiment == "estimate-constant" && c.dyadic) {
        rd.check(e.p == e.q, "exponents.p", "the dyadic ladder estimate needs p = q");
    }
    if (c.experiment == "counterexample" || (c.experiment == "estimate-constant" && c.dyadic)) {
        bool ok = !c.ks.empty();
        for (int k : c.ks) {
            ok = ok && k >= 1 && k <= 24;
        }
        rd.check(ok, "ks", "must be a nonempty list of integers in [1, 24]");
    }
    rd.check(c.mc.paths >= 1, "mc.paths", "must be >= 1");
    rd.check(c.ensemble.count >= 1, "ensemble.count", "must be >= 1");
    rd.check(c.ensemble.dims >= 1, "ensemble.dims", "must be >= 1");
    if (c.experiment == "rbound") {
        bool ok = !c.members.empty();
        for (auto n : c.members) {
            ok = ok && n >= 1;
        }
        rd.check(ok, "members", "must be a nonempty list of positive counts");
        rd.check(c.trials >= 1, "trials", "must be >= 1");
    }
    if (c.experiment == "maximal-fn") {
        rd.check(c.r > 1.0 && std::isfinite(c.r), "r", "must lie in (1, inf)");
        rd.check(c.s > 1.0 && std::isfinite(c.s), "s", "must lie in (1, inf)");
        rd.check(!c.components.empty(), "components", "must be nonempty");
        rd.check(c.functions >= 1 && c.cells >= 1, "functions", "counts must be >= 1");
    }
    const auto& f = c.output.format;
    rd.check(f == "jsonl" || f == "csv" || f == "both", "output.format",
             "expected jsonl, csv or both");
}

}  // namespace

ExperimentConfig load_config(const Json& doc) {
    std::vector<std::string> errors;
    Reader rd(errors);
    if (!doc.is_object()) {
        throw ValidationError("invalid config: top level must be a JSON object");
    }
    std::string experiment = "maxreg";
    rd.get(doc, "experiment", "", experiment);
    ExperimentConfig c = default_config(experiment);

    rd.keys(doc, "", {"experiment", "model", "grid", "exponents", "mc", "ensemble", "ks",
                      "members", "components", "trials", "functions", "cells", "r", "s",
                      "refinements", "search_sweeps", "dyadic", "output"});
    rd.object(doc, "model", "", {"kind", "eigenvalues", "modes", "base", "dim", "n", "shift"});
    rd.object(doc, "grid", "", {"T", "N"});
    rd.object(doc, "exponents", "", {"p", "q", "theta", "delta"});
    rd.object(doc, "mc", "", {"paths", "seed"});
    rd.object(doc, "ensemble", "", {"count", "dims", "feedback"});
    rd.object(doc, "output", "", {"dir", "format"});

    const auto& m = sub(doc, "model");
    rd.get(m, "kind", "model.", c.model.kind);
    rd.get(m, "eigenvalues", "model.", c.model.eigenvalues);
    rd.get(m, "modes", "model.", c.model.modes);
    rd.get(m, "base", "model.", c.model.base);
    rd.get(m, "dim", "model.", c.model.dim);
    rd.get(m, "n", "model.", c.model.n);
    rd.get(m, "shift", "model.", c.model.shift);
    const auto& g = sub(doc, "grid");
    rd.get(g, "T", "grid.", c.grid.horizon);
    rd.get(g, "N", "grid.", c.grid.steps);
    const auto& e = sub(doc, "exponents");
    rd.get(e, "p", "exponents.", c.exponents.p);
    rd.get(e, "q", "exponents.", c.exponents.q);
    rd.get(e, "theta", "exponents.", c.exponents.theta);
    rd.get(e, "delta", "exponents.", c.exponents.delta);
    const auto& mc = sub(doc, "mc");
    rd.get(mc, "paths", "mc.", c.mc.paths);
    rd.get(mc, "seed", "mc.", c.mc.seed);
    const auto& en = sub(doc, "ensemble");
    rd.get(en, "count", "ensemble.", c.ensemble.count);
    rd.get(en, "dims", "ensemble.", c.ensemble.dims);
    rd.get(en, "feedback", "ensemble.", c.ensemble.feedback);
    rd.get(doc, "ks", "", c.ks);
    rd.get(doc, "members", "", c.members);
    rd.get(doc, "components", "", c.components);
    rd.get(doc, "trials", "", c.trials);
    rd.get(doc, "functions", "", c.functions);
    rd.get(doc, "cells", "", c.cells);
    rd.get(doc, "r", "", c.r);
    rd.get(doc, "s", "", c.s);
    rd.get(doc, "refinements", "", c.refinements);
    rd.get(doc, "search_sweeps", "", c.search_sweeps);
    rd.get(doc, "dyadic", "", c.dyadic);
    const auto& out = sub(doc, "output");
    rd.get(out, "dir", "output.", c.output.dir);
    rd.get(out, "format", "output.", c.output.format);

    validate(c, rd);
    if (!errors.empty()) {
        std::ostringstream msg;
        msg << "invalid config:";
        for (const auto& err : errors) {
            msg << "\n  " << err;
        }
        throw ValidationError(msg.str());
    }
    return c;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot read config file " + path.string());
    }
    Json doc;
    try {
        doc = Json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw ValidationError("config is not valid JSON: " + std::string(err.what()));
    }
    return load_config(doc);
}

Json to_json(const ExperimentConfig& c) {
    Json j;
    j["experiment"] = c.experiment;
    j["model"] = {{"kind", c.model.kind}, {"eigenvalues", c.model.eigenvalues},
                  {"modes", c.model.modes}, {"base", c.model.base},
                  {"dim", c.model.dim},     {"n", c.model.n},
                  {"shift", c.model.shift}};
    j["grid"] = {{"T", c.grid.horizon}, {"N", c.grid.steps}};
    j["exponents"] = {{"p", c.exponents.p}, {"q", c.exponents.q},
                      {"theta", c.exponents.theta}, {"delta", c.exponents.delta}};
    j["mc"] = {{"paths", c.mc.paths}, {"seed", c.mc.seed}};
    j["ensemble"] = {{"count", c.ensemble.count}, {"dims", c.ensemble.dims},
                     {"feedback", c.ensemble.feedback}};
    j["ks"] = c.ks;
    j["members"] = c.members;
    j["components"] = c.components;
    j["trials"] = c.trials;
    j["functions"] = c.functions;
    j["cells"] = c.cells;
    j["r"] = c.r;
    j["s"] = c.s;
    j["refinements"] = c.refinements;
    j["search_sweeps"] = c.search_sweeps;
    j["dyadic"] = c.dyadic;
    j["output"] = {{"dir", c.output.dir}, {"format", c.output.format}};
    return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
    // Output location does not change the payload.
    Json j = to_json(cfg);
    j.erase("output");
    const std::string text = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace smr::harness
