#include "doa/array_model.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace doa {

void validate(const ArrayGeometry& geometry) {
    if (geometry.n_sensors < 2)
        throw std::invalid_argument("array geometry requires at least 2 sensors");
    if (!(geometry.spacing > 0.0))
        throw std::invalid_argument("sensor spacing must be positive");
}

AngleGrid AngleGrid::make(double start_deg, double stop_deg, double step_deg) {
    if (!(step_deg > 0.0))
        throw std::invalid_argument("grid step must be positive");
    if (!(start_deg < stop_deg))
        throw std::invalid_argument("grid start must be below stop");
    AngleGrid g;
    g.start_deg_ = start_deg;
    g.stop_deg_ = stop_deg;
    g.step_deg_ = step_deg;
    int n = static_cast<int>(std::floor((stop_deg - start_deg) / step_deg + 1e-9)) + 1;
    g.angles_deg_.resize(n);
    for (int j = 0; j < n; ++j) g.angles_deg_[j] = start_deg + j * step_deg;
    if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
    return g;
}

AngleGrid AngleGrid::standard() { return make(-90.0, 90.0, 1.0); }

int AngleGrid::nearest_index(double theta_deg) const {
    int j = static_cast<int>(std::lround((theta_deg - start_deg_) / step_deg_));
    if (j < 0) j = 0;
    if (j >= size()) j = size() - 1;
    return j;
}

Eigen::VectorXcd steering_vector(const ArrayGeometry& geometry, double theta_deg) {
    validate(geometry);
    if (!(theta_deg >= -90.0 && theta_deg <= 90.0))
        throw std::domain_error("steering angle " + std::to_string(theta_deg) +
                                " outside [-90, 90] degrees");
    const double phase_step =
        -2.0 * std::numbers::pi * geometry.spacing *
        std::sin(theta_deg * std::numbers::pi / 180.0);
    Eigen::VectorXcd a(geometry.n_sensors);
    for (int k = 0; k < geometry.n_sensors; ++k)
        a(k) = std::polar(1.0, phase_step * k);
    a(0) = 1.0;  // exact, not polar(1, -0.0)
    return a;
}

Eigen::MatrixXcd steering_matrix(const ArrayGeometry& geometry,
                                 const std::vector<double>& angles_deg) {
    Eigen::MatrixXcd a(geometry.n_sensors, angles_deg.size());
    for (std::size_t i = 0; i < angles_deg.size(); ++i)
        a.col(static_cast<Eigen::Index>(i)) = steering_vector(geometry, angles_deg[i]);
    return a;
}

Dictionary build_dictionary(const ArrayGeometry& geometry, const AngleGrid& grid) {
    validate(geometry);
    Dictionary d;
    d.geometry = geometry;
    d.grid = grid;
    d.matrix.resize(geometry.n_sensors, grid.size());
    const int ns = grid.size();
#pragma omp parallel for schedule(static)
    for (int j = 0; j < ns; ++j)
        d.matrix.col(j) = steering_vector(geometry, grid.angle(j));
    return d;
}

int spark_ula(const ArrayGeometry& geometry) {
    validate(geometry);
    return geometry.n_sensors + 1;
}

namespace {

// rank of the selected columns via singular values, threshold relative to
// the largest singular value
int numerical_rank(const Eigen::MatrixXcd& cols) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cols);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0) return 0;
    const double tol = 1e-8 * sv(0);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol) ++r;
    return r;
}

bool next_combination(std::vector<int>& idx, int n) {
    const int k = static_cast<int>(idx.size());
    for (int i = k - 1; i >= 0; --i) {
        if (idx[i] < n - k + i) {
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
            return true;
        }
    }
    return false;
}

}  // namespace

std::optional<int> spark_bruteforce(const Dictionary& dictionary, int max_subset) {
    const int ns = static_cast<int>(dictionary.matrix.cols());
    if (ns > 20)
        throw std::length_error("spark_bruteforce refuses grids larger than 20 columns");
    if (max_subset < 1) throw std::invalid_argument("max_subset must be positive");
    max_subset = std::min(max_subset, ns);
    for (int k = 2; k <= max_subset; ++k) {
        std::vector<int> idx(k);
        for (int i = 0; i < k; ++i) idx[i] = i;
        do {
            Eigen::MatrixXcd sub(dictionary.matrix.rows(), k);
            for (int i = 0; i < k; ++i) sub.col(i) = dictionary.matrix.col(idx[i]);
            if (numerical_rank(sub) < k) return k;
        } while (next_combination(idx, ns));
    }
    return std::nullopt;
}

int max_identifiable_sources(const ArrayGeometry& geometry, int rank_x) {
    validate(geometry);
    if (rank_x < 1 || rank_x > geometry.n_sensors)
        throw std::domain_error("rank_x must lie in [1, n_sensors]");
    return (geometry.n_sensors + rank_x - 1) / 2;
}

AngleSpectrum normalize_spectrum(const AngleSpectrum& spectrum) {
    AngleSpectrum out = spectrum;
    const double m = spectrum.power.size() ? spectrum.power.maxCoeff() : 0.0;
    if (m > 0.0) out.power /= m;
    return out;
}

}  // namespace doa
