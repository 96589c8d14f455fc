#include "doa/sensing.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace doa {

const char* to_string(MeasurementKind kind) {
    return kind == MeasurementKind::identity ? "identity" : "complex-gaussian";
}

MeasurementKind measurement_kind_from_string(const std::string& name) {
    if (name == "identity") return MeasurementKind::identity;
    if (name == "complex-gaussian" || name == "gaussian")
        return MeasurementKind::complex_gaussian;
    throw std::invalid_argument("unknown measurement kind: " + name);
}

MeasurementMatrix make_measurement_matrix(MeasurementKind kind, int m, int n,
                                          std::uint64_t seed) {
    if (m < 1 || n < 1) throw std::invalid_argument("measurement dimensions must be positive");
    if (m > n)
        throw std::invalid_argument("measurement matrix cannot have more rows than columns");
    MeasurementMatrix phi;
    phi.kind = kind;
    phi.rows = m;
    phi.cols = n;
    phi.seed = seed;
    if (kind == MeasurementKind::identity) {
        if (m != n)
            throw std::invalid_argument("identity measurement requires m == n");
        phi.matrix = Eigen::MatrixXcd::Identity(m, n);
    } else {
        RngStream rng(seed);
        phi.matrix.resize(m, n);
        const double scale = 1.0 / std::sqrt(static_cast<double>(m));
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < m; ++i)
                phi.matrix(i, j) = scale * rng.complex_normal();
    }
    return phi;
}

MeasuredVector compress(const MeasurementMatrix& phi, const Eigen::VectorXcd& x,
                        int snapshot_index) {
    if (x.size() != phi.cols)
        throw std::invalid_argument("snapshot length does not match measurement matrix");
    MeasuredVector y;
    y.kind = phi.kind;
    y.snapshot_index = snapshot_index;
    if (phi.kind == MeasurementKind::identity)
        y.data = x;
    else
        y.data = phi.matrix * x;
    return y;
}

EffectiveDictionary effective_dictionary(const MeasurementMatrix& phi,
                                         const Dictionary& dictionary) {
    if (dictionary.matrix.rows() != phi.cols)
        throw std::invalid_argument("dictionary rows do not match measurement matrix");
    EffectiveDictionary ed;
    // identity keeps Psi bit-identical to A
    ed.psi = phi.kind == MeasurementKind::identity ? dictionary.matrix
                                                   : phi.matrix * dictionary.matrix;
    const int ns = static_cast<int>(ed.psi.cols());
    ed.column_norms.resize(ns);
    for (int j = 0; j < ns; ++j) {
        const double nrm = ed.psi.col(j).norm();
        if (!(nrm > 1e-14))
            throw std::runtime_error("effective dictionary has a zero column");
        ed.column_norms(j) = nrm;
    }
    return ed;
}

bool measurement_count_sufficient(int m, int n_sources, int n_sensors) {
    return static_cast<double>(m) >=
           n_sources * std::log(static_cast<double>(n_sensors));
}

}  // namespace doa
