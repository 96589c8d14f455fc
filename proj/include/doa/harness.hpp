#pragma once

#include <map>
#include <string>

#include "doa/baselines.hpp"
#include "doa/omp_recovery.hpp"
#include "doa/sensing.hpp"
#include "doa/synth.hpp"

namespace doa {

// An estimator entry in an experiment, with its own snapshot budget.
struct AlgorithmSpec {
    std::string name;   // omp | music | capon | propagator | esprit
    int snapshots = 1;  // K
};

// Full description of one experiment run; everything an output file needs
// to be reproduced bit for bit.
struct ExperimentConfig {
    std::string experiment;  // spectrum | rmse | consistency
    ArrayGeometry geometry{15, 0.5};
    AngleGrid grid = AngleGrid::standard();
    SourceScenario scenario;
    std::vector<AlgorithmSpec> algorithms;
    std::vector<double> snr_sweep_db;  // rmse only
    int n_trials = 200;
    std::uint64_t master_seed = kDefaultSeed;
    MeasurementKind measurement_kind = MeasurementKind::identity;
    int measurement_rows = 0;  // 0 = n_sensors
    int omp_sparsity = 0;      // 0 = source count
    double omp_tol = 0.0;      // 0 reproduces the fixed-iteration loop
    double capon_loading = 0.0;
    int jobs = 0;  // 0 = all hardware threads
};

// Throws std::invalid_argument naming the offending field.
void validate_config(const ExperimentConfig& config);

struct RmsePoint {
    double snr_db = 0.0;
    double rmse_deg = 0.0;
    double stderr_deg = 0.0;  // sd of per-trial RMS errors / sqrt(trials)
};

struct RmseCurve {
    std::string algorithm;
    std::vector<RmsePoint> points;
    int n_trials = 0;
};

struct ConsistencyResult {
    std::vector<AngleSpectrum> trial_spectra;  // normalized, scaled by 1/trials
    std::vector<std::vector<int>> trial_supports;  // each sorted ascending
    std::vector<int> modal_support;
    double stability_score = 0.0;  // fraction of trials matching the modal support
};

// One spectrum realization for trial index `trial`: all algorithms see the
// same source waveforms; noise is drawn per algorithm from its own stream.
// Spectra are normalized to max 1.
std::map<std::string, AngleSpectrum> run_spectrum_trial(const ExperimentConfig& config,
                                                        std::uint64_t trial);

// The single-realization experiment (trial 0).
std::map<std::string, AngleSpectrum> run_spectrum_experiment(const ExperimentConfig& config);

// Monte-Carlo RMSE over the SNR sweep. Estimated DOAs are paired to the
// truth in ascending order; each missing estimate is charged the full scan
// range (180 degrees). Trials run concurrently; results do not depend on
// the thread count.
std::vector<RmseCurve> run_rmse_experiment(const ExperimentConfig& config);

ConsistencyResult run_consistency_experiment(const ExperimentConfig& config);

// Sorted-order pairing cost used by the RMSE reduction (pure).
double sum_squared_pairing_error(std::vector<double> truth_deg,
                                 std::vector<double> estimates_deg,
                                 double missing_penalty_deg = 180.0);

// DOA estimates of one algorithm on one synthesized data set.
PickedAngles estimate_trial_doas(const ExperimentConfig& config, const Dictionary& dict,
                                 const AlgorithmSpec& algorithm,
                                 const SourceScenario& scenario, std::uint64_t stream);

}  // namespace doa
