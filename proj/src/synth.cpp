#include "doa/synth.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace doa {

void validate_scenario(const SourceScenario& scenario, const ArrayGeometry& geometry,
                       const AngleGrid* grid) {
    validate(geometry);
    const int m = static_cast<int>(scenario.doas_deg.size());
    if (m < 1) throw std::invalid_argument("scenario needs at least one source");
    if (scenario.n_snapshots < 1)
        throw std::invalid_argument("snapshot count must be positive");
    for (double t : scenario.doas_deg) {
        if (!(t >= -90.0 && t <= 90.0))
            throw std::invalid_argument("source DOA outside [-90, 90] degrees");
        if (grid && !grid->contains(t))
            throw std::invalid_argument("source DOA outside the scan grid");
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (scenario.doas_deg[i] == scenario.doas_deg[j])
                throw std::invalid_argument("source DOAs must be pairwise distinct");
    if (!scenario.source_powers.empty() &&
        static_cast<int>(scenario.source_powers.size()) != m)
        throw std::invalid_argument("source_powers length must match DOA count");
    for (double p : scenario.source_powers)
        if (p < 0.0) throw std::invalid_argument("source powers must be nonnegative");

    // groups must partition {0..M-1}
    std::vector<int> seen(m, 0);
    for (const auto& g : scenario.coherence_groups) {
        if (g.empty()) throw std::invalid_argument("empty coherence group");
        for (int i : g) {
            if (i < 0 || i >= m)
                throw std::invalid_argument("coherence group index out of range");
            if (seen[i]++)
                throw std::invalid_argument("source appears in two coherence groups");
        }
    }
    if (!scenario.coherence_groups.empty())
        for (int i = 0; i < m; ++i)
            if (!seen[i])
                throw std::invalid_argument(
                    "coherence groups must cover every source (or be omitted)");
}

std::vector<std::vector<int>> resolved_groups(const SourceScenario& scenario) {
    if (!scenario.coherence_groups.empty()) return scenario.coherence_groups;
    std::vector<std::vector<int>> g(scenario.doas_deg.size());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = {static_cast<int>(i)};
    return g;
}

double noise_variance(const SourceScenario& scenario) {
    if (scenario.noiseless) return 0.0;
    return std::pow(10.0, -scenario.snr_db / 10.0);
}

Eigen::MatrixXcd generate_source_matrix(const SourceScenario& scenario, RngStream& rng) {
    const int m = static_cast<int>(scenario.doas_deg.size());
    const int k = scenario.n_snapshots;
    Eigen::MatrixXcd s(m, k);
    Eigen::RowVectorXcd waveform(k);
    for (const auto& group : resolved_groups(scenario)) {
        for (int t = 0; t < k; ++t) waveform(t) = rng.complex_normal();
        for (int i : group) {
            const std::complex<double> scale = rng.unit_phase();
            s.row(i) = scale * waveform;
        }
    }
    if (!scenario.source_powers.empty())
        for (int i = 0; i < m; ++i)
            s.row(i) *= std::sqrt(scenario.source_powers[i]);
    return s;
}

Eigen::MatrixXcd noise_matrix(int n, int k, double sigma2, RngStream& rng) {
    Eigen::MatrixXcd w(n, k);
    const double scale = std::sqrt(sigma2 * 0.5);
    for (int t = 0; t < k; ++t)
        for (int i = 0; i < n; ++i) {
            double re = rng.normal();
            double im = rng.normal();
            w(i, t) = {scale * re, scale * im};
        }
    return w;
}

SnapshotMatrix synthesize_snapshots(const ArrayGeometry& geometry,
                                    const SourceScenario& scenario, RngStream& rng) {
    validate_scenario(scenario, geometry);
    const int m = static_cast<int>(scenario.doas_deg.size());
    if (m >= geometry.n_sensors)
        throw std::invalid_argument(
            "identifiability requires fewer sources than sensors");
    Eigen::MatrixXcd s = generate_source_matrix(scenario, rng);
    Eigen::MatrixXcd a = steering_matrix(geometry, scenario.doas_deg);
    SnapshotMatrix x;
    x.data = a * s;
    const double sigma2 = noise_variance(scenario);
    if (sigma2 > 0.0)
        x.data += noise_matrix(geometry.n_sensors, scenario.n_snapshots, sigma2, rng);
    return x;
}

Eigen::MatrixXcd analytic_covariance(const ArrayGeometry& geometry,
                                     const SourceScenario& scenario) {
    validate_scenario(scenario, geometry);
    const int m = static_cast<int>(scenario.doas_deg.size());
    Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(m, m);
    for (const auto& group : resolved_groups(scenario)) {
        Eigen::VectorXcd g = Eigen::VectorXcd::Zero(m);
        for (int i : group) {
            double amp = scenario.source_powers.empty()
                             ? 1.0
                             : std::sqrt(scenario.source_powers[i]);
            g(i) = amp;
        }
        p += g * g.adjoint();
    }
    Eigen::MatrixXcd a = steering_matrix(geometry, scenario.doas_deg);
    Eigen::MatrixXcd r = a * p * a.adjoint();
    r += noise_variance(scenario) *
         Eigen::MatrixXcd::Identity(geometry.n_sensors, geometry.n_sensors);
    return r;
}

}  // namespace doa
