#pragma once

#include "doa/baselines.hpp"
#include "doa/omp_recovery.hpp"

// Plain serial implementations of the hot kernels, written with explicit
// loops and an independent tiny linear solver. They are the ground truth
// the parallel/vectorized kernels are tested against, and the baseline the
// benchmark compares speedups to. Not used on any production path.
namespace doa::ref {

Eigen::MatrixXcd build_dictionary_matrix(const ArrayGeometry& geometry,
                                         const AngleGrid& grid);

AngleSpectrum music_spectrum(const CovarianceMatrix& cov, const Dictionary& dictionary,
                             int m_sources);

AngleSpectrum capon_spectrum(const CovarianceMatrix& cov, const Dictionary& dictionary,
                             double diagonal_loading = 0.0);

AngleSpectrum propagator_spectrum(const CovarianceMatrix& cov,
                                  const Dictionary& dictionary, int m_sources);

OmpResult omp_recover(const EffectiveDictionary& dict, const Eigen::VectorXcd& y,
                      int sparsity, double tol = 1e-9);

}  // namespace doa::ref
