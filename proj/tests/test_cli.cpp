#include <filesystem>
#include <fstream>
#include <sstream>

#include "doa/cli_commands.hpp"
#include "doctest.h"

using namespace doa;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("doa_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* kSpectrumConfig = R"({
  "experiment": "spectrum",
  "array": {"sensors": 15, "spacing": 0.5},
  "grid": {"start_deg": -90, "stop_deg": 90, "step_deg": 1},
  "sources": {"doas_deg": [-40, 0, 24], "snr_db": 0},
  "algorithms": [
    {"name": "omp", "snapshots": 1},
    {"name": "music", "snapshots": 500},
    {"name": "capon", "snapshots": 500},
    {"name": "propagator", "snapshots": 500}
  ],
  "trials": 1,
  "seed": 321
})";

const char* kRmseConfig = R"({
  "experiment": "rmse",
  "sources": {"doas_deg": [-50, 60], "snr_db": 0},
  "algorithms": [
    {"name": "omp", "snapshots": 1},
    {"name": "music", "snapshots": 100}
  ],
  "snr_sweep_db": [-5, 5],
  "trials": 4,
  "seed": 99
})";

}  // namespace

TEST_CASE("spectrum command writes per-algorithm CSVs plus a manifest") {
    const fs::path dir = fresh_dir("spectrum");
    const fs::path cfg = dir / "config.json";
    write_text(cfg, kSpectrumConfig);

    const fs::path out = dir / "out";
    REQUIRE(cmd_spectrum(cfg.string(), out.string()) == kExitOk);
    for (const auto* name :
         {"spectrum_omp.csv", "spectrum_music.csv", "spectrum_capon.csv",
          "spectrum_propagator.csv", "manifest.json"})
        CHECK(fs::exists(out / name));

    const std::string csv = read_text(out / "spectrum_music.csv");
    CHECK(csv.rfind("angle_deg,normalized_power\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 182);  // header + 181 bins
}

TEST_CASE("same seed twice produces byte-identical CSVs") {
    const fs::path dir = fresh_dir("determinism");
    const fs::path cfg = dir / "config.json";
    write_text(cfg, kSpectrumConfig);

    REQUIRE(cmd_spectrum(cfg.string(), (dir / "a").string()) == kExitOk);
    REQUIRE(cmd_spectrum(cfg.string(), (dir / "b").string()) == kExitOk);
    for (const auto* name : {"spectrum_omp.csv", "spectrum_music.csv",
                             "spectrum_capon.csv", "spectrum_propagator.csv"})
        CHECK(read_text(dir / "a" / name) == read_text(dir / "b" / name));

    // a different seed changes the data
    RunOverrides other;
    other.seed = 12345u;
    REQUIRE(cmd_spectrum(cfg.string(), (dir / "c").string(), other) == kExitOk);
    CHECK(read_text(dir / "a" / "spectrum_music.csv") !=
          read_text(dir / "c" / "spectrum_music.csv"));
}

TEST_CASE("manifest round-trip reproduces the outputs") {
    const fs::path dir = fresh_dir("roundtrip");
    const fs::path cfg = dir / "config.json";
    write_text(cfg, kRmseConfig);

    REQUIRE(cmd_rmse(cfg.string(), (dir / "a").string()) == kExitOk);
    // the manifest embeds the resolved config and works as a config
    REQUIRE(cmd_rmse((dir / "a" / "manifest.json").string(), (dir / "b").string()) ==
            kExitOk);
    CHECK(read_text(dir / "a" / "rmse.csv") == read_text(dir / "b" / "rmse.csv"));

    const std::string csv = read_text(dir / "a" / "rmse.csv");
    CHECK(csv.rfind("algorithm,snr_db,rmse_deg,n_trials,stderr_deg\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 2 algs x 2 SNRs
}

TEST_CASE("malformed configs exit with code 2 and write nothing") {
    const fs::path dir = fresh_dir("badcfg");
    const fs::path out = dir / "out";

    const fs::path broken = dir / "broken.json";
    write_text(broken, "{ not json");
    CHECK(cmd_spectrum(broken.string(), out.string()) == kExitConfig);
    CHECK_FALSE(fs::exists(out / "manifest.json"));

    const fs::path unknown_alg = dir / "unknown.json";
    write_text(unknown_alg, R"({
      "experiment": "rmse",
      "sources": {"doas_deg": [0], "snr_db": 0},
      "algorithms": [{"name": "fourier", "snapshots": 1}],
      "snr_sweep_db": [0]
    })");
    CHECK(cmd_rmse(unknown_alg.string(), out.string()) == kExitConfig);

    const fs::path unknown_key = dir / "unknownkey.json";
    write_text(unknown_key, R"({
      "experiment": "spectrum",
      "sources": {"doas_deg": [0], "snr_db": 0},
      "algorithms": [{"name": "omp"}],
      "grids": {}
    })");
    CHECK(cmd_spectrum(unknown_key.string(), out.string()) == kExitConfig);

    // wrong experiment type for the command
    const fs::path cfg = dir / "spectrum.json";
    write_text(cfg, kSpectrumConfig);
    CHECK(cmd_rmse(cfg.string(), out.string()) == kExitConfig);
    CHECK_FALSE(fs::exists(out / "rmse.csv"));

    CHECK(cmd_spectrum((dir / "missing.json").string(), out.string()) == kExitConfig);
}

TEST_CASE("consistency command output shape") {
    const fs::path dir = fresh_dir("consistency");
    const fs::path cfg = dir / "config.json";
    write_text(cfg, R"({
      "experiment": "consistency",
      "sources": {"doas_deg": [-40, 0, 24], "snr_db": 0},
      "measurement": {"kind": "gaussian", "rows": 6},
      "algorithms": [{"name": "omp", "snapshots": 1}],
      "trials": 5,
      "seed": 2024
    })");
    const fs::path out = dir / "out";
    REQUIRE(cmd_consistency(cfg.string(), out.string()) == kExitOk);
    for (int t = 0; t < 5; ++t) {
        char name[48];
        std::snprintf(name, sizeof name, "consistency_trial_%03d.csv", t);
        CHECK(fs::exists(out / name));
    }
    const std::string summary = read_text(out / "consistency_summary.csv");
    CHECK(summary.rfind("key,value\n", 0) == 0);
    CHECK(summary.find("stability_score,") != std::string::npos);
    CHECK(summary.find("modal_support,") != std::string::npos);
}

TEST_CASE("identifiability command prints the bound") {
    std::ostringstream out;
    CHECK(cmd_identifiability(15, 1, out) == kExitOk);
    CHECK(out.str().find("M <= 7") != std::string::npos);

    std::ostringstream out2;
    CHECK(cmd_identifiability(15, 3, out2) == kExitOk);
    CHECK(out2.str().find("M <= 8") != std::string::npos);

    std::ostringstream out3;
    CHECK(cmd_identifiability(2, 1, out3) == kExitOk);
    CHECK(out3.str().find("M <= 1") != std::string::npos);

    std::ostringstream err;
    CHECK(cmd_identifiability(15, 0, err) == kExitConfig);
}

TEST_CASE("number formatting uses 9 significant digits") {
    CHECK(format_number(0.123456789123) == "0.123456789");
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(-90.0) == "-90");
}
