#include "doa/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace doa {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
    throw std::invalid_argument("config: " + message);
}

void reject_unknown_keys(const json& object, const std::string& section,
                         const std::set<std::string>& allowed) {
    for (const auto& [key, value] : object.items())
        if (!allowed.count(key))
            fail("unknown key '" + key + "' in " + section);
}

int line_of_offset(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n') ++line;
    return line;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail("JSON syntax error near line " +
             std::to_string(line_of_offset(json_text, e.byte)) + ": " + e.what());
    }
    if (!root.is_object()) fail("top level must be an object");
    if (root.contains("config")) root = root.at("config");  // manifest round-trip

    reject_unknown_keys(root, "top level",
                        {"experiment", "array", "grid", "sources", "measurement", "omp",
                         "capon", "algorithms", "snr_sweep_db", "trials", "seed", "jobs"});

    ExperimentConfig cfg;
    try {
        cfg.experiment = root.at("experiment").get<std::string>();

        if (root.contains("array")) {
            const auto& a = root.at("array");
            reject_unknown_keys(a, "array", {"sensors", "spacing"});
            cfg.geometry.n_sensors = a.value("sensors", 15);
            cfg.geometry.spacing = a.value("spacing", 0.5);
        }
        if (root.contains("grid")) {
            const auto& g = root.at("grid");
            reject_unknown_keys(g, "grid", {"start_deg", "stop_deg", "step_deg"});
            cfg.grid = AngleGrid::make(g.value("start_deg", -90.0), g.value("stop_deg", 90.0),
                                       g.value("step_deg", 1.0));
        }

        const auto& s = root.at("sources");
        reject_unknown_keys(s, "sources",
                            {"doas_deg", "coherence_groups", "snr_db", "noiseless", "powers"});
        cfg.scenario.doas_deg = s.at("doas_deg").get<std::vector<double>>();
        cfg.scenario.snr_db = s.value("snr_db", 0.0);
        cfg.scenario.noiseless = s.value("noiseless", false);
        if (s.contains("powers"))
            cfg.scenario.source_powers = s.at("powers").get<std::vector<double>>();
        if (s.contains("coherence_groups")) {
            // listed groups first, then singletons for unlisted sources
            auto groups = s.at("coherence_groups").get<std::vector<std::vector<int>>>();
            std::vector<char> seen(cfg.scenario.doas_deg.size(), 0);
            for (const auto& g : groups)
                for (int i : g) {
                    if (i < 0 || i >= static_cast<int>(seen.size()))
                        fail("coherence_groups: index " + std::to_string(i) +
                             " out of range");
                    seen[i] = 1;
                }
            for (std::size_t i = 0; i < seen.size(); ++i)
                if (!seen[i]) groups.push_back({static_cast<int>(i)});
            cfg.scenario.coherence_groups = std::move(groups);
        }

        if (root.contains("measurement")) {
            const auto& m = root.at("measurement");
            reject_unknown_keys(m, "measurement", {"kind", "rows"});
            cfg.measurement_kind =
                measurement_kind_from_string(m.value("kind", std::string("identity")));
            cfg.measurement_rows = m.value("rows", 0);
        }
        if (root.contains("omp")) {
            const auto& o = root.at("omp");
            reject_unknown_keys(o, "omp", {"sparsity", "tol"});
            cfg.omp_sparsity = o.value("sparsity", 0);
            cfg.omp_tol = o.value("tol", 0.0);
        }
        if (root.contains("capon")) {
            const auto& c = root.at("capon");
            reject_unknown_keys(c, "capon", {"loading"});
            cfg.capon_loading = c.value("loading", 0.0);
        }

        cfg.algorithms.clear();
        for (const auto& a : root.at("algorithms")) {
            reject_unknown_keys(a, "algorithms", {"name", "snapshots"});
            AlgorithmSpec spec;
            spec.name = a.at("name").get<std::string>();
            spec.snapshots = a.value("snapshots", 1);
            cfg.algorithms.push_back(std::move(spec));
        }

        if (root.contains("snr_sweep_db"))
            cfg.snr_sweep_db = root.at("snr_sweep_db").get<std::vector<double>>();
        cfg.n_trials = root.value("trials", 200);
        cfg.master_seed = root.value("seed", kDefaultSeed);
        cfg.jobs = root.value("jobs", 0);
    } catch (const json::exception& e) {
        fail(e.what());
    }

    try {
        validate_config(cfg);
    } catch (const std::invalid_argument& e) {
        fail(e.what());
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
    json root;
    root["experiment"] = cfg.experiment;
    root["array"] = {{"sensors", cfg.geometry.n_sensors}, {"spacing", cfg.geometry.spacing}};
    root["grid"] = {{"start_deg", cfg.grid.start_deg()},
                    {"stop_deg", cfg.grid.stop_deg()},
                    {"step_deg", cfg.grid.step_deg()}};
    json sources;
    sources["doas_deg"] = cfg.scenario.doas_deg;
    sources["snr_db"] = cfg.scenario.snr_db;
    sources["noiseless"] = cfg.scenario.noiseless;
    sources["coherence_groups"] = resolved_groups(cfg.scenario);
    if (!cfg.scenario.source_powers.empty())
        sources["powers"] = cfg.scenario.source_powers;
    root["sources"] = std::move(sources);
    root["measurement"] = {{"kind", to_string(cfg.measurement_kind)},
                           {"rows", cfg.measurement_rows}};
    root["omp"] = {{"sparsity", cfg.omp_sparsity}, {"tol", cfg.omp_tol}};
    root["capon"] = {{"loading", cfg.capon_loading}};
    json algs = json::array();
    for (const auto& a : cfg.algorithms)
        algs.push_back({{"name", a.name}, {"snapshots", a.snapshots}});
    root["algorithms"] = std::move(algs);
    if (!cfg.snr_sweep_db.empty()) root["snr_sweep_db"] = cfg.snr_sweep_db;
    root["trials"] = cfg.n_trials;
    root["seed"] = cfg.master_seed;
    root["jobs"] = cfg.jobs;
    return root.dump(2);
}

}  // namespace doa
