#include "doa/omp_recovery.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <stdexcept>

namespace doa {

OmpResult omp_recover(const EffectiveDictionary& dict, const Eigen::VectorXcd& y,
                      int sparsity, double tol) {
    const int m = static_cast<int>(dict.psi.rows());
    const int ns = static_cast<int>(dict.psi.cols());
    if (y.size() != m)
        throw std::invalid_argument("measured vector length does not match dictionary");
    if (sparsity < 1) throw std::invalid_argument("sparsity must be positive");
    if (sparsity > m || sparsity > ns)
        throw std::invalid_argument("sparsity exceeds measurement dimension; infeasible");
    if (tol < 0.0) throw std::invalid_argument("tolerance must be nonnegative");

    OmpResult result;
    const double y_norm = y.norm();
    result.residual_norms.push_back(y_norm);
    if (y_norm == 0.0) return result;

    Eigen::VectorXcd residual = y;
    Eigen::MatrixXcd chosen(m, sparsity);
    std::vector<char> picked(ns, 0);

    for (int c = 0; c < sparsity; ++c) {
        // normalized correlation scan; each bin is independent
        Eigen::VectorXcd corr = dict.psi.adjoint() * residual;
        int best = -1;
        double best_val = -1.0;
        for (int j = 0; j < ns; ++j) {
            if (picked[j]) continue;
            const double v = std::abs(corr(j)) / dict.column_norms(j);
            if (v > best_val) {
                best_val = v;
                best = j;
            }
        }
        picked[best] = 1;
        result.support.push_back(best);
        chosen.col(c) = dict.psi.col(best);

        auto active = chosen.leftCols(c + 1);
        result.coefficients = active.colPivHouseholderQr().solve(y);
        residual = y - active * result.coefficients;
        result.residual_norms.push_back(residual.norm());
        result.iterations_run = c + 1;
        if (residual.norm() <= tol * y_norm) break;
    }
    return result;
}

AngleSpectrum angle_spectrum(const OmpResult& result, const AngleGrid& grid) {
    AngleSpectrum spectrum;
    spectrum.grid = grid;
    spectrum.power = Eigen::VectorXd::Zero(grid.size());
    for (std::size_t i = 0; i < result.support.size(); ++i) {
        const int j = result.support[i];
        if (j < 0 || j >= grid.size())
            throw std::invalid_argument("support index outside the grid");
        spectrum.power(j) = std::norm(result.coefficients(static_cast<Eigen::Index>(i)));
    }
    return spectrum;
}

PickedAngles estimate_doas(const AngleSpectrum& spectrum, int m_sources) {
    if (m_sources < 1) throw std::invalid_argument("m_sources must be positive");
    std::vector<int> nonzero;
    for (int j = 0; j < spectrum.power.size(); ++j)
        if (spectrum.power(j) > 0.0) nonzero.push_back(j);

    PickedAngles out;
    std::stable_sort(nonzero.begin(), nonzero.end(), [&](int a, int b) {
        return spectrum.power(a) > spectrum.power(b);
    });
    const int take = std::min<int>(m_sources, static_cast<int>(nonzero.size()));
    out.shortfall = take < m_sources;
    for (int i = 0; i < take; ++i)
        out.angles_deg.push_back(spectrum.grid.angle(nonzero[i]));
    std::sort(out.angles_deg.begin(), out.angles_deg.end());
    return out;
}

namespace {

double binomial_guard(int n, int k) {
    double c = 1.0;
    for (int i = 0; i < k; ++i) {
        c *= static_cast<double>(n - i) / (i + 1);
        if (c > 1e12) return c;
    }
    return c;
}

}  // namespace

std::vector<int> l0_oracle(const EffectiveDictionary& dict, const Eigen::VectorXcd& y,
                           int sparsity) {
    const int ns = static_cast<int>(dict.psi.cols());
    if (sparsity < 1 || sparsity > static_cast<int>(dict.psi.rows()))
        throw std::invalid_argument("oracle sparsity out of range");
    if (binomial_guard(ns, sparsity) > 1e6)
        throw std::length_error("l0_oracle: combinatorial budget exceeded");

    std::vector<int> idx(sparsity), best_support;
    for (int i = 0; i < sparsity; ++i) idx[i] = i;
    double best_res = std::numeric_limits<double>::infinity();
    Eigen::MatrixXcd sub(dict.psi.rows(), sparsity);
    while (true) {
        for (int i = 0; i < sparsity; ++i) sub.col(i) = dict.psi.col(idx[i]);
        Eigen::VectorXcd s = sub.colPivHouseholderQr().solve(y);
        const double res = (y - sub * s).norm();
        if (res < best_res - 1e-12) {  // strict improvement keeps the
            best_res = res;            // lexicographically first optimum
            best_support = idx;
        }
        int i = sparsity - 1;
        while (i >= 0 && idx[i] == ns - sparsity + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < sparsity; ++j) idx[j] = idx[j - 1] + 1;
    }
    return best_support;
}

}  // namespace doa
