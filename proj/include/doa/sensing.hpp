#pragma once

#include "doa/array_model.hpp"
#include "doa/rng.hpp"

namespace doa {

enum class MeasurementKind { identity, complex_gaussian };

const char* to_string(MeasurementKind kind);
MeasurementKind measurement_kind_from_string(const std::string& name);

// Linear compression map y = Phi x. Identity keeps y = x; the gaussian kind
// has i.i.d. circular complex Gaussian entries scaled by 1/sqrt(m).
struct MeasurementMatrix {
    MeasurementKind kind = MeasurementKind::identity;
    int rows = 0;  // m
    int cols = 0;  // N
    std::uint64_t seed = 0;
    Eigen::MatrixXcd matrix;
};

struct MeasuredVector {
    Eigen::VectorXcd data;
    MeasurementKind kind = MeasurementKind::identity;
    int snapshot_index = 0;
};

// Effective dictionary Psi = Phi A with per-column Euclidean norms recorded
// for normalized atom selection.
struct EffectiveDictionary {
    Eigen::MatrixXcd psi;          // m x Ns
    Eigen::VectorXd column_norms;  // Ns
};

MeasurementMatrix make_measurement_matrix(MeasurementKind kind, int m, int n,
                                          std::uint64_t seed = 0);

MeasuredVector compress(const MeasurementMatrix& phi, const Eigen::VectorXcd& x,
                        int snapshot_index = 0);

EffectiveDictionary effective_dictionary(const MeasurementMatrix& phi,
                                         const Dictionary& dictionary);

// Compression premise m >= M ln(N); callers warn (not fail) when violated.
bool measurement_count_sufficient(int m, int n_sources, int n_sensors);

}  // namespace doa
