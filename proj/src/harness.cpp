#include "doa/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace doa {

namespace {

const std::set<std::string> kSpectrumAlgorithms = {"omp", "music", "capon", "propagator"};
const std::set<std::string> kRmseAlgorithms = {"omp", "music", "capon", "propagator",
                                               "esprit"};

int effective_jobs(int jobs) {
#ifdef _OPENMP
    return jobs > 0 ? jobs : omp_get_max_threads();
#else
    (void)jobs;
    return 1;
#endif
}

int source_count(const ExperimentConfig& cfg) {
    return static_cast<int>(cfg.scenario.doas_deg.size());
}

int sparsity_of(const ExperimentConfig& cfg) {
    return cfg.omp_sparsity > 0 ? cfg.omp_sparsity : source_count(cfg);
}

int measurement_rows_of(const ExperimentConfig& cfg) {
    return cfg.measurement_rows > 0 ? cfg.measurement_rows : cfg.geometry.n_sensors;
}

MeasurementMatrix trial_measurement(const ExperimentConfig& cfg, std::uint64_t stream) {
    if (cfg.measurement_kind == MeasurementKind::identity)
        return make_measurement_matrix(MeasurementKind::identity, cfg.geometry.n_sensors,
                                       cfg.geometry.n_sensors);
    // gaussian maps are resampled per trial
    return make_measurement_matrix(MeasurementKind::complex_gaussian,
                                   measurement_rows_of(cfg), cfg.geometry.n_sensors,
                                   derive_seed(cfg.master_seed, stream, "phi"));
}

// signal part shared across algorithms of a trial
Eigen::MatrixXcd trial_sources(const ExperimentConfig& cfg, const SourceScenario& scenario,
                               std::uint64_t stream, int k_max) {
    SourceScenario s = scenario;
    s.n_snapshots = k_max;
    RngStream rng(cfg.master_seed, stream, "sources");
    return generate_source_matrix(s, rng);
}

SnapshotMatrix trial_snapshots(const ExperimentConfig& cfg, const SourceScenario& scenario,
                               const Eigen::MatrixXcd& sources, const AlgorithmSpec& alg,
                               std::uint64_t stream) {
    Eigen::MatrixXcd a = steering_matrix(cfg.geometry, scenario.doas_deg);
    SnapshotMatrix x;
    x.data = a * sources.leftCols(alg.snapshots);
    const double sigma2 = noise_variance(scenario);
    if (sigma2 > 0.0) {
        RngStream rng(cfg.master_seed, stream, "noise/" + alg.name);
        x.data += noise_matrix(cfg.geometry.n_sensors, alg.snapshots, sigma2, rng);
    }
    return x;
}

AngleSpectrum omp_trial_spectrum(const ExperimentConfig& cfg, const Dictionary& dict,
                                 const SnapshotMatrix& x, std::uint64_t stream,
                                 OmpResult* result_out = nullptr) {
    MeasurementMatrix phi = trial_measurement(cfg, stream);
    EffectiveDictionary ed = effective_dictionary(phi, dict);
    MeasuredVector y = compress(phi, x.data.col(0));
    OmpResult res = omp_recover(ed, y, sparsity_of(cfg), cfg.omp_tol);
    if (result_out) *result_out = res;
    return angle_spectrum(res, cfg.grid);
}

int k_max_of(const ExperimentConfig& cfg) {
    int k = 1;
    for (const auto& a : cfg.algorithms) k = std::max(k, a.snapshots);
    return k;
}

}  // namespace

void validate_config(const ExperimentConfig& config) {
    if (config.experiment != "spectrum" && config.experiment != "rmse" &&
        config.experiment != "consistency")
        throw std::invalid_argument("experiment must be spectrum, rmse or consistency");
    validate(config.geometry);
    validate_scenario(config.scenario, config.geometry, &config.grid);
    if (config.algorithms.empty())
        throw std::invalid_argument("algorithms: at least one entry required");
    const auto& allowed = config.experiment == "spectrum" || config.experiment == "consistency"
                              ? kSpectrumAlgorithms
                              : kRmseAlgorithms;
    for (const auto& alg : config.algorithms) {
        if (!kRmseAlgorithms.count(alg.name))
            throw std::invalid_argument("algorithms: unknown algorithm name '" + alg.name +
                                        "'");
        if (!allowed.count(alg.name))
            throw std::invalid_argument("algorithms: '" + alg.name + "' not usable in a " +
                                        config.experiment + " experiment");
        if (alg.snapshots < 1)
            throw std::invalid_argument("algorithms: snapshots must be >= 1 for '" +
                                        alg.name + "'");
    }
    if (config.experiment == "consistency")
        for (const auto& alg : config.algorithms)
            if (alg.name != "omp")
                throw std::invalid_argument(
                    "algorithms: consistency experiments run omp only");
    if (config.experiment == "rmse" && config.snr_sweep_db.empty())
        throw std::invalid_argument("snr_sweep_db: rmse experiments need at least one SNR");
    if (config.n_trials < 1) throw std::invalid_argument("trials must be >= 1");
    const int rows = measurement_rows_of(config);
    if (config.measurement_kind == MeasurementKind::identity &&
        config.measurement_rows != 0 && config.measurement_rows != config.geometry.n_sensors)
        throw std::invalid_argument("measurement: identity requires rows == n_sensors");
    if (rows > config.geometry.n_sensors)
        throw std::invalid_argument("measurement: rows cannot exceed n_sensors");
    if (sparsity_of(config) > rows)
        throw std::invalid_argument("omp sparsity exceeds the measurement dimension");
    if (config.omp_tol < 0.0) throw std::invalid_argument("omp tol must be nonnegative");
    if (config.capon_loading < 0.0)
        throw std::invalid_argument("capon loading must be nonnegative");
    for (const auto& alg : config.algorithms)
        if (alg.name == "capon" && alg.snapshots < config.geometry.n_sensors &&
            config.capon_loading == 0.0)
            throw std::invalid_argument(
                "capon with fewer snapshots than sensors needs capon_loading > 0");
}

namespace {

// once per experiment run, not per validation
void warn_if_undersampled(const ExperimentConfig& config) {
    const int rows = measurement_rows_of(config);
    const int m = source_count(config);
    if (config.measurement_kind == MeasurementKind::complex_gaussian &&
        !measurement_count_sufficient(rows, m, config.geometry.n_sensors))
        std::fprintf(stderr,
                     "warning: m = %d below the M ln N compression premise (M = %d, N = %d)\n",
                     rows, m, config.geometry.n_sensors);
}

}  // namespace

std::map<std::string, AngleSpectrum> run_spectrum_trial(const ExperimentConfig& config,
                                                        std::uint64_t trial) {
    validate_config(config);
    const Dictionary dict = build_dictionary(config.geometry, config.grid);
    const Eigen::MatrixXcd sources =
        trial_sources(config, config.scenario, trial, k_max_of(config));

    std::map<std::string, AngleSpectrum> out;
    for (const auto& alg : config.algorithms) {
        SnapshotMatrix x = trial_snapshots(config, config.scenario, sources, alg, trial);
        if (alg.name == "omp") {
            out[alg.name] = normalize_spectrum(omp_trial_spectrum(config, dict, x, trial));
            continue;
        }
        CovarianceMatrix cov = sample_covariance(x);
        const int m = source_count(config);
        if (alg.name == "music")
            out[alg.name] = music_spectrum(cov, dict, m);
        else if (alg.name == "capon")
            out[alg.name] = capon_spectrum(cov, dict, config.capon_loading);
        else if (alg.name == "propagator")
            out[alg.name] = propagator_spectrum(cov, dict, m);
    }
    return out;
}

std::map<std::string, AngleSpectrum> run_spectrum_experiment(const ExperimentConfig& config) {
    validate_config(config);
    warn_if_undersampled(config);
    return run_spectrum_trial(config, 0);
}

PickedAngles estimate_trial_doas(const ExperimentConfig& config, const Dictionary& dict,
                                 const AlgorithmSpec& algorithm,
                                 const SourceScenario& scenario, std::uint64_t stream) {
    const Eigen::MatrixXcd sources =
        trial_sources(config, scenario, stream, algorithm.snapshots);
    SnapshotMatrix x = trial_snapshots(config, scenario, sources, algorithm, stream);
    const int m = static_cast<int>(scenario.doas_deg.size());

    if (algorithm.name == "omp") {
        AngleSpectrum sp = omp_trial_spectrum(config, dict, x, stream);
        return estimate_doas(sp, m);
    }
    CovarianceMatrix cov = sample_covariance(x);
    if (algorithm.name == "esprit") {
        EspritEstimate est = esprit_doas(cov, config.geometry, m);
        return {est.doas_deg, false};
    }
    AngleSpectrum sp;
    if (algorithm.name == "music")
        sp = music_spectrum(cov, dict, m);
    else if (algorithm.name == "capon")
        sp = capon_spectrum(cov, dict, config.capon_loading);
    else
        sp = propagator_spectrum(cov, dict, m);
    return spectrum_peaks(sp, m);
}

double sum_squared_pairing_error(std::vector<double> truth_deg,
                                 std::vector<double> estimates_deg,
                                 double missing_penalty_deg) {
    std::sort(truth_deg.begin(), truth_deg.end());
    std::sort(estimates_deg.begin(), estimates_deg.end());
    double acc = 0.0;
    for (std::size_t i = 0; i < truth_deg.size(); ++i) {
        if (i < estimates_deg.size()) {
            const double d = estimates_deg[i] - truth_deg[i];
            acc += d * d;
        } else {
            acc += missing_penalty_deg * missing_penalty_deg;
        }
    }
    return acc;
}

std::vector<RmseCurve> run_rmse_experiment(const ExperimentConfig& config) {
    validate_config(config);
    warn_if_undersampled(config);
    const Dictionary dict = build_dictionary(config.geometry, config.grid);
    const int n_snr = static_cast<int>(config.snr_sweep_db.size());
    const int n_alg = static_cast<int>(config.algorithms.size());
    const int trials = config.n_trials;
    const int m = source_count(config);

    // per-trial sums land in preassigned slots; the reduction below is a
    // fixed-order loop, so results are independent of the thread count
    std::vector<std::vector<std::vector<double>>> sq(
        n_alg, std::vector<std::vector<double>>(n_snr, std::vector<double>(trials, 0.0)));

    const int total = n_snr * trials;
    const int jobs = effective_jobs(config.jobs);
    std::string first_error;  // exceptions must not escape the parallel region
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int unit = 0; unit < total; ++unit) {
        const int si = unit / trials;
        const int t = unit % trials;
        SourceScenario scenario = config.scenario;
        scenario.snr_db = config.snr_sweep_db[si];
        const std::uint64_t stream =
            (static_cast<std::uint64_t>(si) << 32) | static_cast<std::uint64_t>(t);
        try {
            for (int a = 0; a < n_alg; ++a) {
                PickedAngles est = estimate_trial_doas(config, dict, config.algorithms[a],
                                                       scenario, stream);
                sq[a][si][t] =
                    sum_squared_pairing_error(scenario.doas_deg, est.angles_deg);
            }
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error.empty()) first_error = e.what();
        }
    }
    if (!first_error.empty()) throw std::runtime_error(first_error);

    std::vector<RmseCurve> curves(n_alg);
    for (int a = 0; a < n_alg; ++a) {
        curves[a].algorithm = config.algorithms[a].name;
        curves[a].n_trials = trials;
        for (int si = 0; si < n_snr; ++si) {
            double mean_sq = 0.0;
            for (int t = 0; t < trials; ++t) mean_sq += sq[a][si][t];
            mean_sq /= static_cast<double>(trials) * m;

            // spread of per-trial RMS errors
            double mean_rms = 0.0;
            for (int t = 0; t < trials; ++t) mean_rms += std::sqrt(sq[a][si][t] / m);
            mean_rms /= trials;
            double var = 0.0;
            for (int t = 0; t < trials; ++t) {
                const double d = std::sqrt(sq[a][si][t] / m) - mean_rms;
                var += d * d;
            }
            var = trials > 1 ? var / (trials - 1) : 0.0;

            curves[a].points.push_back({config.snr_sweep_db[si], std::sqrt(mean_sq),
                                        std::sqrt(var / trials)});
        }
    }
    return curves;
}

ConsistencyResult run_consistency_experiment(const ExperimentConfig& config) {
    validate_config(config);
    warn_if_undersampled(config);
    const Dictionary dict = build_dictionary(config.geometry, config.grid);
    const int trials = config.n_trials;
    const AlgorithmSpec alg = config.algorithms.front();

    ConsistencyResult out;
    out.trial_spectra.resize(trials);
    out.trial_supports.resize(trials);

    const int jobs = effective_jobs(config.jobs);
    std::string first_error;
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
    for (int t = 0; t < trials; ++t) {
        try {
            const Eigen::MatrixXcd sources =
                trial_sources(config, config.scenario, t, alg.snapshots);
            SnapshotMatrix x = trial_snapshots(config, config.scenario, sources, alg, t);
            OmpResult res;
            AngleSpectrum sp = omp_trial_spectrum(config, dict, x, t, &res);
            sp = normalize_spectrum(sp);
            sp.power /= static_cast<double>(trials);
            out.trial_spectra[t] = std::move(sp);
            std::sort(res.support.begin(), res.support.end());
            out.trial_supports[t] = std::move(res.support);
        } catch (const std::exception& e) {
#pragma omp critical
            if (first_error.empty()) first_error = e.what();
        }
    }
    if (!first_error.empty()) throw std::runtime_error(first_error);

    // modal support: most frequent, lexicographically smallest on ties
    std::map<std::vector<int>, int> counts;
    for (const auto& s : out.trial_supports) ++counts[s];
    int best = 0;
    for (const auto& [support, count] : counts) {
        if (count > best) {
            best = count;
            out.modal_support = support;
        }
    }
    out.stability_score = static_cast<double>(best) / trials;
    return out;
}

}  // namespace doa
