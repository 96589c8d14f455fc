#include "doa/baselines.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace doa {

CovarianceMatrix sample_covariance(const SnapshotMatrix& snapshots) {
    const int k = static_cast<int>(snapshots.data.cols());
    if (k < 1) throw std::invalid_argument("covariance needs at least one snapshot");
    CovarianceMatrix cov;
    cov.matrix = snapshots.data * snapshots.data.adjoint() / static_cast<double>(k);
    // enforce exact Hermitian symmetry against rounding drift
    cov.matrix = 0.5 * (cov.matrix + cov.matrix.adjoint()).eval();
    cov.snapshot_count = k;
    return cov;
}

namespace {

// eigenpairs sorted by descending eigenvalue
void eig_descending(const Eigen::MatrixXcd& r, Eigen::VectorXd& values,
                    Eigen::MatrixXcd& vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");
    values = es.eigenvalues().reverse();
    vectors = es.eigenvectors().rowwise().reverse();
}

// spectrum(j) = 1 / ||b_j||^2, with B precomputed as one matrix product
AngleSpectrum reciprocal_norm_spectrum(const Eigen::MatrixXcd& b,
                                       const Dictionary& dictionary) {
    const int ns = dictionary.grid.size();
    AngleSpectrum spectrum;
    spectrum.grid = dictionary.grid;
    spectrum.power.resize(ns);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ns; ++j) {
        const double den =
            std::max(b.col(j).squaredNorm(), std::numeric_limits<double>::min());
        spectrum.power(j) = 1.0 / den;
    }
    return normalize_spectrum(spectrum);
}

// spectrum(j) = 1 / Re(a_j^H b_j) for b = Q A
AngleSpectrum reciprocal_form_spectrum(const Eigen::MatrixXcd& b,
                                       const Dictionary& dictionary) {
    const int ns = dictionary.grid.size();
    AngleSpectrum spectrum;
    spectrum.grid = dictionary.grid;
    spectrum.power.resize(ns);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ns; ++j) {
        const double den = std::max(std::real(dictionary.matrix.col(j).dot(b.col(j))),
                                    std::numeric_limits<double>::min());
        spectrum.power(j) = 1.0 / den;
    }
    return normalize_spectrum(spectrum);
}

}  // namespace

AngleSpectrum music_spectrum(const CovarianceMatrix& cov, const Dictionary& dictionary,
                             int m_sources) {
    const int n = static_cast<int>(cov.matrix.rows());
    if (m_sources < 1 || m_sources >= n)
        throw std::domain_error("music requires 1 <= m_sources < n_sensors");
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
    eig_descending(cov.matrix, values, vectors);
    const Eigen::MatrixXcd en = vectors.rightCols(n - m_sources);
    return reciprocal_norm_spectrum(en.adjoint() * dictionary.matrix, dictionary);
}

AngleSpectrum capon_spectrum(const CovarianceMatrix& cov, const Dictionary& dictionary,
                             double diagonal_loading) {
    if (diagonal_loading < 0.0)
        throw std::invalid_argument("diagonal loading must be nonnegative");
    const int n = static_cast<int>(cov.matrix.rows());
    Eigen::MatrixXcd loaded = cov.matrix;
    loaded.diagonal().array() += diagonal_loading;
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
    eig_descending(loaded, values, vectors);
    if (values(n - 1) <= 1e-12 * std::max(values(0), 0.0))
        throw std::runtime_error(
            "covariance is numerically singular; set diagonal_loading > 0");
    const Eigen::MatrixXcd inv =
        vectors * values.cwiseInverse().asDiagonal() * vectors.adjoint();
    return reciprocal_form_spectrum(inv * dictionary.matrix, dictionary);
}

AngleSpectrum propagator_spectrum(const CovarianceMatrix& cov,
                                  const Dictionary& dictionary, int m_sources) {
    const int n = static_cast<int>(cov.matrix.rows());
    if (m_sources < 1 || m_sources >= n)
        throw std::domain_error("propagator requires 1 <= m_sources < n_sensors");
    const Eigen::MatrixXcd g = cov.matrix.leftCols(m_sources);
    const Eigen::MatrixXcd h = cov.matrix.rightCols(n - m_sources);
    Eigen::MatrixXcd gram = g.adjoint() * g;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(gram);
    lu.setThreshold(1e-10);
    if (lu.rank() < m_sources)
        throw std::runtime_error("propagator block is ill-conditioned");
    const Eigen::MatrixXcd p = lu.solve(g.adjoint() * h);
    // Q a = P^H a_top - a_bottom; the identity block needs no product
    const Eigen::MatrixXcd b = p.adjoint() * dictionary.matrix.topRows(m_sources) -
                               dictionary.matrix.bottomRows(n - m_sources);
    return reciprocal_norm_spectrum(b, dictionary);
}

EspritEstimate esprit_doas(const CovarianceMatrix& cov, const ArrayGeometry& geometry,
                           int m_sources) {
    const int n = static_cast<int>(cov.matrix.rows());
    if (m_sources < 1 || m_sources >= n)
        throw std::domain_error("esprit requires 1 <= m_sources < n_sensors");
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
    eig_descending(cov.matrix, values, vectors);
    const Eigen::MatrixXcd es = vectors.leftCols(m_sources);
    const Eigen::MatrixXcd upper = es.topRows(n - 1);
    const Eigen::MatrixXcd lower = es.bottomRows(n - 1);
    const Eigen::MatrixXcd rot = upper.colPivHouseholderQr().solve(lower);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(rot);
    if (ces.info() != Eigen::Success)
        throw std::runtime_error("esprit rotation eigendecomposition failed");

    EspritEstimate out;
    const double wrap = 2.0 * std::numbers::pi * geometry.spacing;
    for (int i = 0; i < m_sources; ++i) {
        const double phase = std::arg(ces.eigenvalues()(i));
        if (std::abs(phase) > wrap) out.aliased = true;
        double s = -phase / wrap;
        s = std::clamp(s, -1.0, 1.0);
        out.doas_deg.push_back(std::asin(s) * 180.0 / std::numbers::pi);
    }
    std::sort(out.doas_deg.begin(), out.doas_deg.end());
    return out;
}

PickedAngles spectrum_peaks(const AngleSpectrum& spectrum, int m_sources) {
    if (m_sources < 1) throw std::invalid_argument("m_sources must be positive");
    const int ns = static_cast<int>(spectrum.power.size());
    std::vector<int> maxima;
    for (int j = 1; j + 1 < ns; ++j)
        if (spectrum.power(j) > spectrum.power(j - 1) &&
            spectrum.power(j) > spectrum.power(j + 1))
            maxima.push_back(j);
    std::stable_sort(maxima.begin(), maxima.end(), [&](int a, int b) {
        return spectrum.power(a) > spectrum.power(b);
    });

    PickedAngles out;
    std::vector<char> used(ns, 0);
    const int take = std::min<int>(m_sources, static_cast<int>(maxima.size()));
    for (int i = 0; i < take; ++i) {
        out.angles_deg.push_back(spectrum.grid.angle(maxima[i]));
        used[maxima[i]] = 1;
    }
    if (take < m_sources) {
        // pad from the largest remaining bins, lowest index first on ties
        out.shortfall = true;
        std::vector<int> rest;
        for (int j = 0; j < ns; ++j)
            if (!used[j]) rest.push_back(j);
        std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) {
            return spectrum.power(a) > spectrum.power(b);
        });
        for (int i = 0; i < m_sources - take && i < static_cast<int>(rest.size()); ++i)
            out.angles_deg.push_back(spectrum.grid.angle(rest[i]));
    }
    std::sort(out.angles_deg.begin(), out.angles_deg.end());
    return out;
}

}  // namespace doa
