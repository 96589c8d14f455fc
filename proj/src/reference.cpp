#include "doa/reference.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace doa::ref {

namespace {

using cd = std::complex<double>;

// Gaussian elimination with partial pivoting, A x = b for small complex
// systems; independent of Eigen's solvers on purpose.
std::vector<cd> solve_dense(std::vector<std::vector<cd>> a, std::vector<cd> b) {
    const int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        if (std::abs(a[col][col]) < 1e-300)
            throw std::runtime_error("reference solver: singular system");
        for (int r = col + 1; r < n; ++r) {
            const cd f = a[r][col] / a[col][col];
            for (int c2 = col; c2 < n; ++c2) a[r][c2] -= f * a[col][c2];
            b[r] -= f * b[col];
        }
    }
    std::vector<cd> x(n);
    for (int r = n - 1; r >= 0; --r) {
        cd acc = b[r];
        for (int c2 = r + 1; c2 < n; ++c2) acc -= a[r][c2] * x[c2];
        x[r] = acc / a[r][r];
    }
    return x;
}

// least squares via normal equations on explicitly formed Gram matrix
std::vector<cd> least_squares(const Eigen::MatrixXcd& psi, const std::vector<int>& support,
                              const Eigen::VectorXcd& y) {
    const int k = static_cast<int>(support.size());
    const int m = static_cast<int>(psi.rows());
    std::vector<std::vector<cd>> gram(k, std::vector<cd>(k));
    std::vector<cd> rhs(k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            cd acc = 0.0;
            for (int r = 0; r < m; ++r)
                acc += std::conj(psi(r, support[i])) * psi(r, support[j]);
            gram[i][j] = acc;
        }
        cd acc = 0.0;
        for (int r = 0; r < m; ++r) acc += std::conj(psi(r, support[i])) * y(r);
        rhs[i] = acc;
    }
    return solve_dense(std::move(gram), std::move(rhs));
}

void eig_descending(const Eigen::MatrixXcd& r, Eigen::VectorXd& values,
                    Eigen::MatrixXcd& vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("eigendecomposition failed");
    values = es.eigenvalues().reverse();
    vectors = es.eigenvectors().rowwise().reverse();
}

AngleSpectrum finish(const Dictionary& dictionary, std::vector<double> power) {
    AngleSpectrum s;
    s.grid = dictionary.grid;
    s.power = Eigen::Map<Eigen::VectorXd>(power.data(), power.size());
    return normalize_spectrum(s);
}

}  // namespace

Eigen::MatrixXcd build_dictionary_matrix(const ArrayGeometry& geometry,
                                         const AngleGrid& grid) {
    Eigen::MatrixXcd a(geometry.n_sensors, grid.size());
    for (int j = 0; j < grid.size(); ++j) {
        const double phase_step = -2.0 * std::numbers::pi * geometry.spacing *
                                  std::sin(grid.angle(j) * std::numbers::pi / 180.0);
        for (int k = 0; k < geometry.n_sensors; ++k)
            a(k, j) = std::polar(1.0, phase_step * k);
        a(0, j) = 1.0;
    }
    return a;
}

AngleSpectrum music_spectrum(const CovarianceMatrix& cov, const Dictionary& dictionary,
                             int m_sources) {
    const int n = static_cast<int>(cov.matrix.rows());
    if (m_sources < 1 || m_sources >= n)
        throw std::domain_error("music requires 1 <= m_sources < n_sensors");
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
    eig_descending(cov.matrix, values, vectors);

    const int n_noise = n - m_sources;
    std::vector<double> power(dictionary.grid.size());
    for (int j = 0; j < dictionary.grid.size(); ++j) {
        double den = 0.0;
        for (int v = 0; v < n_noise; ++v) {
            cd proj = 0.0;
            for (int r = 0; r < n; ++r)
                proj += std::conj(vectors(r, m_sources + v)) * dictionary.matrix(r, j);
            den += std::norm(proj);
        }
        power[j] = 1.0 / std::max(den, std::numeric_limits<double>::min());
    }
    return finish(dictionary, std::move(power));
}

AngleSpectrum capon_spectrum(const CovarianceMatrix& cov, const Dictionary& dictionary,
                             double diagonal_loading) {
    const int n = static_cast<int>(cov.matrix.rows());
    // invert (R + loading I) column by column with the reference solver
    std::vector<std::vector<cd>> a(n, std::vector<cd>(n));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            a[r][c] = cov.matrix(r, c) + (r == c ? cd(diagonal_loading) : cd(0.0));
    std::vector<std::vector<cd>> inv(n, std::vector<cd>(n));
    for (int c = 0; c < n; ++c) {
        std::vector<cd> e(n, 0.0);
        e[c] = 1.0;
        std::vector<cd> x = solve_dense(a, std::move(e));
        for (int r = 0; r < n; ++r) inv[r][c] = x[r];
    }
    std::vector<double> power(dictionary.grid.size());
    for (int j = 0; j < dictionary.grid.size(); ++j) {
        cd den = 0.0;
        for (int r = 0; r < n; ++r) {
            cd row = 0.0;
            for (int c = 0; c < n; ++c) row += inv[r][c] * dictionary.matrix(c, j);
            den += std::conj(dictionary.matrix(r, j)) * row;
        }
        power[j] = 1.0 / std::max(den.real(), std::numeric_limits<double>::min());
    }
    return finish(dictionary, std::move(power));
}

AngleSpectrum propagator_spectrum(const CovarianceMatrix& cov,
                                  const Dictionary& dictionary, int m_sources) {
    const int n = static_cast<int>(cov.matrix.rows());
    if (m_sources < 1 || m_sources >= n)
        throw std::domain_error("propagator requires 1 <= m_sources < n_sensors");
    const int n_rest = n - m_sources;

    // gram = G^H G, rhs = G^H H, both from explicit loops
    std::vector<std::vector<cd>> gram(m_sources, std::vector<cd>(m_sources));
    for (int i = 0; i < m_sources; ++i)
        for (int j = 0; j < m_sources; ++j) {
            cd acc = 0.0;
            for (int r = 0; r < n; ++r)
                acc += std::conj(cov.matrix(r, i)) * cov.matrix(r, j);
            gram[i][j] = acc;
        }
    // propagator columns solved one by one
    std::vector<std::vector<cd>> prop(m_sources, std::vector<cd>(n_rest));
    for (int c = 0; c < n_rest; ++c) {
        std::vector<cd> rhs(m_sources);
        for (int i = 0; i < m_sources; ++i) {
            cd acc = 0.0;
            for (int r = 0; r < n; ++r)
                acc += std::conj(cov.matrix(r, i)) * cov.matrix(r, m_sources + c);
            rhs[i] = acc;
        }
        std::vector<cd> x = solve_dense(gram, std::move(rhs));
        for (int i = 0; i < m_sources; ++i) prop[i][c] = x[i];
    }

    std::vector<double> power(dictionary.grid.size());
    for (int j = 0; j < dictionary.grid.size(); ++j) {
        double den = 0.0;
        for (int q = 0; q < n_rest; ++q) {
            // row q of [P^H, -I] applied to a_j
            cd acc = 0.0;
            for (int i = 0; i < m_sources; ++i)
                acc += std::conj(prop[i][q]) * dictionary.matrix(i, j);
            acc -= dictionary.matrix(m_sources + q, j);
            den += std::norm(acc);
        }
        power[j] = 1.0 / std::max(den, std::numeric_limits<double>::min());
    }
    return finish(dictionary, std::move(power));
}

OmpResult omp_recover(const EffectiveDictionary& dict, const Eigen::VectorXcd& y,
                      int sparsity, double tol) {
    const int m = static_cast<int>(dict.psi.rows());
    const int ns = static_cast<int>(dict.psi.cols());
    if (sparsity < 1 || sparsity > m || sparsity > ns)
        throw std::invalid_argument("sparsity out of range");

    OmpResult result;
    double y_norm_sq = 0.0;
    for (int r = 0; r < m; ++r) y_norm_sq += std::norm(y(r));
    const double y_norm = std::sqrt(y_norm_sq);
    result.residual_norms.push_back(y_norm);
    if (y_norm == 0.0) return result;

    std::vector<cd> residual(m);
    for (int r = 0; r < m; ++r) residual[r] = y(r);
    std::vector<char> picked(ns, 0);

    for (int c = 0; c < sparsity; ++c) {
        int best = -1;
        double best_val = -1.0;
        for (int j = 0; j < ns; ++j) {
            if (picked[j]) continue;
            cd corr = 0.0;
            for (int r = 0; r < m; ++r) corr += std::conj(dict.psi(r, j)) * residual[r];
            const double v = std::abs(corr) / dict.column_norms(j);
            if (v > best_val) {
                best_val = v;
                best = j;
            }
        }
        picked[best] = 1;
        result.support.push_back(best);

        std::vector<cd> coef = least_squares(dict.psi, result.support, y);
        double res_norm_sq = 0.0;
        for (int r = 0; r < m; ++r) {
            cd fit = 0.0;
            for (std::size_t i = 0; i < result.support.size(); ++i)
                fit += dict.psi(r, result.support[i]) * coef[i];
            residual[r] = y(r) - fit;
            res_norm_sq += std::norm(residual[r]);
        }
        result.coefficients =
            Eigen::Map<Eigen::VectorXcd>(coef.data(), static_cast<Eigen::Index>(coef.size()));
        result.residual_norms.push_back(std::sqrt(res_norm_sq));
        result.iterations_run = c + 1;
        if (result.residual_norms.back() <= tol * y_norm) break;
    }
    return result;
}

}  // namespace doa::ref
