#pragma once

#include "doa/array_model.hpp"
#include "doa/rng.hpp"

namespace doa {

// A synthetic multi-source scene. Sources listed in coherence_groups share
// one waveform per realization, each scaled by its own fixed unit-modulus
// scalar; an empty group list means all sources are independent.
// source_powers (empty = all ones) scales per-source amplitude; noise
// variance is 10^(-snr_db/10) against unit source power unless `noiseless`.
struct SourceScenario {
    std::vector<double> doas_deg;
    std::vector<std::vector<int>> coherence_groups;  // 0-based indices
    double snr_db = 0.0;
    bool noiseless = false;
    int n_snapshots = 1;
    std::vector<double> source_powers;
};

struct SnapshotMatrix {
    Eigen::MatrixXcd data;  // N x K
};

// Throws std::invalid_argument on malformed scenarios; the grid is only
// used to check that the DOAs lie inside the scan range when provided.
void validate_scenario(const SourceScenario& scenario, const ArrayGeometry& geometry,
                       const AngleGrid* grid = nullptr);

// Coherence groups with every singleton filled in, in canonical order.
std::vector<std::vector<int>> resolved_groups(const SourceScenario& scenario);

double noise_variance(const SourceScenario& scenario);

// M x K source matrix. Draw order: per group (listed order) one waveform,
// then one unit-modulus scalar per member; this keeps the signal part of a
// stream reproducible independently of whether noise is drawn afterwards.
Eigen::MatrixXcd generate_source_matrix(const SourceScenario& scenario, RngStream& rng);

// Zero-mean circular complex Gaussian N x K block with per-entry variance
// sigma2 (split evenly between real and imaginary parts).
Eigen::MatrixXcd noise_matrix(int n, int k, double sigma2, RngStream& rng);

// X = A(theta_true) S + W. Refuses scenarios with M >= N.
SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geometry,
                                    const SourceScenario& scenario, RngStream& rng);

// Infinite-snapshot covariance A P A^H + sigma^2 I with the canonical
// (unit-scalar) source covariance implied by the coherence structure;
// its signal part has rank equal to the number of groups.
Eigen::MatrixXcd analytic_covariance(const ArrayGeometry& geometry,
                                     const SourceScenario& scenario);

}  // namespace doa
