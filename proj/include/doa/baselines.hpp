#pragma once

#include "doa/array_model.hpp"
#include "doa/synth.hpp"

namespace doa {

struct CovarianceMatrix {
    Eigen::MatrixXcd matrix;  // N x N Hermitian
    int snapshot_count = 0;
};

// R = (1/K) X X^H.
CovarianceMatrix sample_covariance(const SnapshotMatrix& snapshots);

inline CovarianceMatrix covariance_from_matrix(Eigen::MatrixXcd r, int snapshot_count) {
    return {std::move(r), snapshot_count};
}

// 1 / (a^H En En^H a) with En spanning the N - m_sources smallest
// eigenvectors; normalized to max 1.
AngleSpectrum music_spectrum(const CovarianceMatrix& cov, const Dictionary& dictionary,
                             int m_sources);

// 1 / (a^H (R + loading I)^{-1} a), normalized to max 1. Throws when the
// loaded matrix is numerically singular (advice: loading > 0).
AngleSpectrum capon_spectrum(const CovarianceMatrix& cov, const Dictionary& dictionary,
                             double diagonal_loading = 0.0);

// Linear propagator method: partition R = [G | H] columnwise with G of
// width m_sources, P = (G^H G)^{-1} G^H H, Q = [P^H, -I]; spectrum is
// 1 / ||Q a||^2, normalized to max 1.
AngleSpectrum propagator_spectrum(const CovarianceMatrix& cov,
                                  const Dictionary& dictionary, int m_sources);

struct EspritEstimate {
    std::vector<double> doas_deg;  // ascending, clamped to [-90, 90]
    bool aliased = false;          // some rotation phase exceeded 2 pi d
};

// Shift-invariance estimate from the m_sources dominant eigenvectors;
// grid-free.
EspritEstimate esprit_doas(const CovarianceMatrix& cov, const ArrayGeometry& geometry,
                           int m_sources);

// The m_sources largest strict local maxima (interior bins above both
// neighbors), ascending; pads from the largest remaining bins and flags
// the result when fewer exist.
PickedAngles spectrum_peaks(const AngleSpectrum& spectrum, int m_sources);

}  // namespace doa
