#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

namespace doa {

// Uniform linear array: N sensors spaced d wavelengths apart.
struct ArrayGeometry {
    int n_sensors = 0;
    double spacing = 0.5;
};

void validate(const ArrayGeometry& geometry);

// Uniform scan grid in degrees, start/stop inclusive when the step lands
// exactly on stop. Default construction is empty; use make().
class AngleGrid {
public:
    static AngleGrid make(double start_deg, double stop_deg, double step_deg);
    static AngleGrid standard();  // -90..90, 1 degree, 181 points

    double start_deg() const { return start_deg_; }
    double stop_deg() const { return stop_deg_; }
    double step_deg() const { return step_deg_; }
    int size() const { return static_cast<int>(angles_deg_.size()); }
    double angle(int j) const { return angles_deg_[j]; }
    const std::vector<double>& angles_deg() const { return angles_deg_; }

    // Index of the grid point closest to theta_deg.
    int nearest_index(double theta_deg) const;
    bool contains(double theta_deg) const {
        return theta_deg >= start_deg_ && theta_deg <= stop_deg_;
    }

private:
    double start_deg_ = 0.0, stop_deg_ = 0.0, step_deg_ = 0.0;
    std::vector<double> angles_deg_;
};

// Steering matrix over a scan grid; column j is the array response at
// grid angle j. Every entry has unit modulus.
struct Dictionary {
    Eigen::MatrixXcd matrix;  // N x Ns
    AngleGrid grid;
    ArrayGeometry geometry;
};

// Per-grid-angle nonnegative power, the common output shape of every
// estimator's spatial spectrum.
struct AngleSpectrum {
    AngleGrid grid;
    Eigen::VectorXd power;
};

// Angle list produced by a peak picker; `shortfall` marks results where
// fewer genuine peaks existed than were requested.
struct PickedAngles {
    std::vector<double> angles_deg;
    bool shortfall = false;
};

// Array response at theta_deg (measured from broadside): element k is
// exp(-i 2 pi d k sin theta). Throws std::domain_error outside [-90, 90].
Eigen::VectorXcd steering_vector(const ArrayGeometry& geometry, double theta_deg);

// Steering matrix at arbitrary (not necessarily on-grid) angles.
Eigen::MatrixXcd steering_matrix(const ArrayGeometry& geometry,
                                 const std::vector<double>& angles_deg);

Dictionary build_dictionary(const ArrayGeometry& geometry, const AngleGrid& grid);

// Closed form for the ULA steering set: spark = N + 1.
int spark_ula(const ArrayGeometry& geometry);

// Exhaustive spark search over all column subsets of size <= max_subset.
// Returns nullopt when every tested subset is linearly independent.
// Refuses grids larger than 20 columns.
std::optional<int> spark_bruteforce(const Dictionary& dictionary, int max_subset);

// Largest M with M < (N + rank_x) / 2.
int max_identifiable_sources(const ArrayGeometry& geometry, int rank_x);

// Rescale a spectrum so its maximum is exactly 1; all-zero input stays zero.
AngleSpectrum normalize_spectrum(const AngleSpectrum& spectrum);

}  // namespace doa
