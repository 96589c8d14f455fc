#pragma once

#include "doa/sensing.hpp"

namespace doa {

// Greedy recovery trace: selected grid indices in pick order, least-squares
// coefficients over that support, and the residual 2-norm history
// (entry 0 is ||y||, then one entry per completed iteration).
struct OmpResult {
    std::vector<int> support;
    Eigen::VectorXcd coefficients;
    std::vector<double> residual_norms;
    int iterations_run = 0;
};

// Orthogonal matching pursuit over the effective dictionary. Each iteration
// selects the unpicked column with the largest |<r, col>| / ||col||
// (ties to the lowest index), refits all coefficients by least squares on
// the augmented support, and updates the residual. Runs `sparsity`
// iterations, stopping early once ||r|| <= tol * ||y||. A zero measurement
// returns an empty result. Throws when sparsity exceeds the measurement
// dimension.
OmpResult omp_recover(const EffectiveDictionary& dict, const Eigen::VectorXcd& y,
                      int sparsity, double tol = 1e-9);

inline OmpResult omp_recover(const EffectiveDictionary& dict, const MeasuredVector& y,
                             int sparsity, double tol = 1e-9) {
    return omp_recover(dict, y.data, sparsity, tol);
}

// |coefficient|^2 placed at the supported grid bins, zero elsewhere.
AngleSpectrum angle_spectrum(const OmpResult& result, const AngleGrid& grid);

// Grid angles of the m_sources largest spectrum values, ascending; ties go
// to the lower grid index. Returns fewer angles (flagged) when the spectrum
// has fewer nonzero bins.
PickedAngles estimate_doas(const AngleSpectrum& spectrum, int m_sources);

// Exhaustive minimum-residual support search over all supports of the given
// size, ties broken lexicographically. Independent of the greedy path; used
// as an oracle. Refuses instances with more than 10^6 candidate supports.
std::vector<int> l0_oracle(const EffectiveDictionary& dict, const Eigen::VectorXcd& y,
                           int sparsity);

}  // namespace doa
