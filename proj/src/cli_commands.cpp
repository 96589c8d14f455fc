#include "doa/cli_commands.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace doa {

namespace {

namespace fs = std::filesystem;

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << contents;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_manifest(const fs::path& out_dir, const std::string& command,
                    const ExperimentConfig& cfg, const std::vector<std::string>& outputs) {
    nlohmann::json manifest;
    manifest["artifact"] = "doa";
    manifest["version"] = kArtifactVersion;
    manifest["command"] = command;
    manifest["master_seed"] = cfg.master_seed;
    manifest["created_utc"] = timestamp_utc();
    manifest["outputs"] = outputs;
    manifest["config"] = nlohmann::json::parse(config_to_json(cfg));
    write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
    for (const auto& name : outputs)
        if (!fs::exists(out_dir / name))
            throw std::runtime_error("declared output missing: " + name);
}

std::string support_string(const std::vector<int>& support) {
    std::string s;
    for (std::size_t i = 0; i < support.size(); ++i) {
        if (i) s += '|';
        s += std::to_string(support[i]);
    }
    return s;
}

int run_guarded(const std::string& config_path, const fs::path& out_dir,
                const RunOverrides& overrides, const std::string& command,
                const std::string& expected_experiment,
                int (*body)(const ExperimentConfig&, const fs::path&,
                            std::vector<std::string>&)) {
    ExperimentConfig cfg;
    try {
        cfg = apply_overrides(load_config_file(config_path), overrides);
        if (cfg.experiment != expected_experiment)
            throw std::invalid_argument("config: experiment type '" + cfg.experiment +
                                        "' does not match the " + command + " command");
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    try {
        std::error_code ec;
        fs::create_directories(out_dir, ec);
        std::vector<std::string> outputs;
        const int rc = body(cfg, out_dir, outputs);
        if (rc != kExitOk) return rc;
        write_manifest(out_dir, command, cfg, outputs);
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

ExperimentConfig apply_overrides(ExperimentConfig config, const RunOverrides& overrides) {
    if (overrides.seed) config.master_seed = *overrides.seed;
    if (overrides.trials) config.n_trials = *overrides.trials;
    if (overrides.jobs) config.jobs = *overrides.jobs;
    validate_config(config);
    return config;
}

int cmd_spectrum(const std::string& config_path, const std::string& out_dir,
                 const RunOverrides& overrides) {
    return run_guarded(config_path, out_dir, overrides, "spectrum", "spectrum",
                       [](const ExperimentConfig& cfg, const fs::path& dir,
                          std::vector<std::string>& outputs) {
                           auto spectra = run_spectrum_experiment(cfg);
                           for (const auto& [name, spectrum] : spectra) {
                               std::ostringstream csv;
                               csv << "angle_deg,normalized_power\n";
                               for (int j = 0; j < spectrum.grid.size(); ++j)
                                   csv << format_number(spectrum.grid.angle(j)) << ','
                                       << format_number(spectrum.power(j)) << '\n';
                               const std::string file = "spectrum_" + name + ".csv";
                               write_file(dir / file, csv.str());
                               outputs.push_back(file);
                           }

                           std::ostringstream gp;
                           gp << "set datafile separator ','\n"
                              << "set xlabel 'angle (deg)'\n"
                              << "set ylabel 'normalized power'\n"
                              << "set key top right\n"
                              << "plot";
                           bool first = true;
                           for (const auto& [name, spectrum] : spectra) {
                               gp << (first ? " " : ", \\\n     ")
                                  << "'spectrum_" << name << ".csv' skip 1 using 1:2 "
                                  << "with lines title '" << name << "'";
                               first = false;
                           }
                           gp << '\n';
                           write_file(dir / "plot.gp", gp.str());
                           outputs.push_back("plot.gp");
                           return kExitOk;
                       });
}

int cmd_rmse(const std::string& config_path, const std::string& out_dir,
             const RunOverrides& overrides) {
    return run_guarded(config_path, out_dir, overrides, "rmse", "rmse",
                       [](const ExperimentConfig& cfg, const fs::path& dir,
                          std::vector<std::string>& outputs) {
                           auto curves = run_rmse_experiment(cfg);
                           std::ostringstream csv;
                           csv << "algorithm,snr_db,rmse_deg,n_trials,stderr_deg\n";
                           for (const auto& curve : curves)
                               for (const auto& p : curve.points)
                                   csv << curve.algorithm << ','
                                       << format_number(p.snr_db) << ','
                                       << format_number(p.rmse_deg) << ','
                                       << curve.n_trials << ','
                                       << format_number(p.stderr_deg) << '\n';
                           write_file(dir / "rmse.csv", csv.str());
                           outputs.push_back("rmse.csv");
                           return kExitOk;
                       });
}

int cmd_consistency(const std::string& config_path, const std::string& out_dir,
                    const RunOverrides& overrides) {
    return run_guarded(
        config_path, out_dir, overrides, "consistency", "consistency",
        [](const ExperimentConfig& cfg, const fs::path& dir,
           std::vector<std::string>& outputs) {
            ConsistencyResult result = run_consistency_experiment(cfg);
            for (std::size_t t = 0; t < result.trial_spectra.size(); ++t) {
                const auto& spectrum = result.trial_spectra[t];
                std::ostringstream csv;
                csv << "angle_deg,scaled_power\n";
                for (int j = 0; j < spectrum.grid.size(); ++j)
                    csv << format_number(spectrum.grid.angle(j)) << ','
                        << format_number(spectrum.power(j)) << '\n';
                char name[48];
                std::snprintf(name, sizeof name, "consistency_trial_%03zu.csv", t);
                write_file(dir / name, csv.str());
                outputs.push_back(name);
            }
            std::ostringstream csv;
            csv << "key,value\n";
            csv << "stability_score," << format_number(result.stability_score) << '\n';
            csv << "modal_support," << support_string(result.modal_support) << '\n';
            for (std::size_t t = 0; t < result.trial_supports.size(); ++t)
                csv << "trial_support_" << t << ','
                    << support_string(result.trial_supports[t]) << '\n';
            write_file(dir / "consistency_summary.csv", csv.str());
            outputs.push_back("consistency_summary.csv");
            return kExitOk;
        });
}

int cmd_identifiability(int n_sensors, int rank_x, std::ostream& out) {
    try {
        ArrayGeometry geometry{n_sensors, 0.5};
        const int m = max_identifiable_sources(geometry, rank_x);
        out << "N = " << n_sensors << " sensors, rank(X) = " << rank_x << "\n";
        out << "spark = N + 1 = " << spark_ula(geometry) << "\n";
        out << "unique identifiability bound: M < (N + rank(X)) / 2 = "
            << format_number((n_sensors + rank_x) / 2.0) << "\n";
        out << "max identifiable sources: M <= " << m << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace doa
