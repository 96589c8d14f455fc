#include <algorithm>

#include "doa/baselines.hpp"
#include "doctest.h"

using namespace doa;

namespace {

const ArrayGeometry kUla15{15, 0.5};

SourceScenario trio_analytic(double snr_db) {
    SourceScenario s;
    s.doas_deg = {-40.0, 0.0, 24.0};
    s.snr_db = snr_db;
    s.n_snapshots = 1;
    return s;
}

// fully coherent pair whose unit-scalar combination defeats the
// rank-deficient subspace methods
SourceScenario coherent_pair_analytic() {
    SourceScenario s;
    s.doas_deg = {0.0, 15.0};
    s.snr_db = 0.0;
    s.n_snapshots = 1;
    s.coherence_groups = {{0, 1}};
    return s;
}

bool near_any(double angle, const std::vector<double>& targets, double tol) {
    return std::any_of(targets.begin(), targets.end(),
                       [&](double t) { return std::abs(angle - t) <= tol; });
}

}  // namespace

TEST_CASE("sample covariance basics") {
    SnapshotMatrix one;
    one.data = Eigen::MatrixXcd::Random(15, 1);
    const CovarianceMatrix r1 = sample_covariance(one);
    CHECK((r1.matrix - one.data.col(0) * one.data.col(0).adjoint()).cwiseAbs().maxCoeff() <
          1e-12);

    // orthogonal equal-norm snapshots give an exactly diagonal covariance
    SnapshotMatrix ortho;
    ortho.data = 3.0 * Eigen::MatrixXcd::Identity(15, 15);
    const CovarianceMatrix rd = sample_covariance(ortho);
    CHECK((rd.matrix - (9.0 / 15.0) * Eigen::MatrixXcd::Identity(15, 15))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    // Hermitian and PSD
    SnapshotMatrix many;
    many.data = Eigen::MatrixXcd::Random(15, 64);
    const CovarianceMatrix r = sample_covariance(many);
    CHECK((r.matrix - r.matrix.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r.matrix);
    CHECK(es.eigenvalues().minCoeff() > -1e-10 * r.matrix.trace().real());
}

TEST_CASE("sample covariance converges to the analytic covariance") {
    SourceScenario s = trio_analytic(0.0);
    s.n_snapshots = 100000;
    RngStream rng(31u);
    const SnapshotMatrix x = synthesize_snapshots(kUla15, s, rng);
    const CovarianceMatrix rhat = sample_covariance(x);
    const Eigen::MatrixXcd r = analytic_covariance(kUla15, s);
    CHECK((rhat.matrix - r).norm() / r.norm() < 0.05);
}

TEST_CASE("music: analytic covariance peaks at the true on-grid DOAs") {
    const Dictionary dict = build_dictionary(kUla15, AngleGrid::standard());
    const SourceScenario s = trio_analytic(0.0);
    const CovarianceMatrix r = covariance_from_matrix(analytic_covariance(kUla15, s), 0);
    const AngleSpectrum sp = music_spectrum(r, dict, 3);
    const PickedAngles peaks = spectrum_peaks(sp, 3);
    CHECK(peaks.angles_deg == std::vector<double>{-40.0, 0.0, 24.0});
    CHECK_FALSE(peaks.shortfall);
    CHECK(sp.power.maxCoeff() == 1.0);
}

TEST_CASE("music: isotropic covariance gives a flat spectrum") {
    const Dictionary dict = build_dictionary(kUla15, AngleGrid::standard());
    const CovarianceMatrix eye =
        covariance_from_matrix(Eigen::MatrixXcd::Identity(15, 15), 0);
    const AngleSpectrum sp = music_spectrum(eye, dict, 3);
    CHECK(sp.power.maxCoeff() - sp.power.minCoeff() < 1e-9);

    CHECK_THROWS_AS(music_spectrum(eye, dict, 15), std::domain_error);
    CHECK_THROWS_AS(music_spectrum(eye, dict, 0), std::domain_error);
}

TEST_CASE("music: coherent pair defeats the noise subspace") {
    const Dictionary dict = build_dictionary(kUla15, AngleGrid::standard());
    const CovarianceMatrix r = covariance_from_matrix(
        analytic_covariance(kUla15, coherent_pair_analytic()), 0);
    const AngleSpectrum sp = music_spectrum(r, dict, 2);
    const PickedAngles top2 = spectrum_peaks(sp, 2);

    // at most one of the two true bins appears among the top-2 peaks
    int hits = 0;
    for (double a : top2.angles_deg)
        if (a == 0.0 || a == 15.0) ++hits;
    CHECK(hits <= 1);
}

TEST_CASE("capon spectra") {
    const Dictionary dict = build_dictionary(kUla15, AngleGrid::standard());
    const CovarianceMatrix eye =
        covariance_from_matrix(Eigen::MatrixXcd::Identity(15, 15), 0);
    const AngleSpectrum flat = capon_spectrum(eye, dict);
    CHECK(flat.power.maxCoeff() - flat.power.minCoeff() < 1e-9);

    // single source at high SNR: global peak at the true DOA
    SourceScenario s;
    s.doas_deg = {-35.0};
    s.snr_db = 20.0;
    s.n_snapshots = 1;
    const CovarianceMatrix r = covariance_from_matrix(analytic_covariance(kUla15, s), 0);
    const AngleSpectrum sp = capon_spectrum(r, dict);
    int argmax = 0;
    sp.power.maxCoeff(&argmax);
    CHECK(sp.grid.angle(argmax) == -35.0);

    // rank-1 sample covariance with zero loading is singular
    SnapshotMatrix single;
    single.data = Eigen::MatrixXcd::Random(15, 1);
    CHECK_THROWS_AS(capon_spectrum(sample_covariance(single), dict, 0.0),
                    std::runtime_error);
    CHECK_NOTHROW(capon_spectrum(sample_covariance(single), dict, 0.1));
}

TEST_CASE("propagator spectra") {
    const Dictionary dict = build_dictionary(kUla15, AngleGrid::standard());

    // noiseless analytic covariance: huge peaks exactly at the true DOAs
    SourceScenario s = trio_analytic(0.0);
    s.noiseless = true;
    const CovarianceMatrix r = covariance_from_matrix(analytic_covariance(kUla15, s), 0);
    const AngleSpectrum sp = propagator_spectrum(r, dict, 3);
    const PickedAngles peaks = spectrum_peaks(sp, 3);
    CHECK(peaks.angles_deg == std::vector<double>{-40.0, 0.0, 24.0});

    // isotropic input: no dominant structure (max / median < 2)
    const CovarianceMatrix eye =
        covariance_from_matrix(Eigen::MatrixXcd::Identity(15, 15), 0);
    const AngleSpectrum flat = propagator_spectrum(eye, dict, 3);
    Eigen::VectorXd sorted = flat.power;
    std::sort(sorted.data(), sorted.data() + sorted.size());
    CHECK(flat.power.maxCoeff() / sorted(sorted.size() / 2) < 2.0);

    // coherent pair: fails to produce both true peaks
    const CovarianceMatrix rc = covariance_from_matrix(
        analytic_covariance(kUla15, coherent_pair_analytic()), 0);
    const PickedAngles top2 = spectrum_peaks(propagator_spectrum(rc, dict, 2), 2);
    const bool both = near_any(0.0, top2.angles_deg, 0.0) &&
                      near_any(15.0, top2.angles_deg, 0.0);
    CHECK_FALSE(both);
}

TEST_CASE("esprit: analytic single source is grid-free accurate") {
    SourceScenario s;
    s.doas_deg = {30.4};  // off-grid
    s.snr_db = 20.0;
    s.n_snapshots = 1;
    const CovarianceMatrix r = covariance_from_matrix(analytic_covariance(kUla15, s), 0);
    const EspritEstimate est = esprit_doas(r, kUla15, 1);
    REQUIRE(est.doas_deg.size() == 1);
    CHECK(std::abs(est.doas_deg[0] - 30.4) < 1e-6);
    CHECK_FALSE(est.aliased);
}

TEST_CASE("esprit: two independent sources at high SNR, many snapshots") {
    SourceScenario s;
    s.doas_deg = {-50.0, 60.0};
    s.snr_db = 20.0;
    s.n_snapshots = 1000;
    RngStream rng(13u);
    const SnapshotMatrix x = synthesize_snapshots(kUla15, s, rng);
    const EspritEstimate est = esprit_doas(sample_covariance(x), kUla15, 2);
    REQUIRE(est.doas_deg.size() == 2);
    CHECK(std::abs(est.doas_deg[0] + 50.0) < 0.1);
    CHECK(std::abs(est.doas_deg[1] - 60.0) < 0.1);
}

TEST_CASE("esprit: coherent pair breaks the rotation estimate") {
    const CovarianceMatrix r = covariance_from_matrix(
        analytic_covariance(kUla15, coherent_pair_analytic()), 0);
    const EspritEstimate est = esprit_doas(r, kUla15, 2);
    double worst = 0.0;
    const std::vector<double> truth = {0.0, 15.0};
    for (std::size_t i = 0; i < est.doas_deg.size(); ++i)
        worst = std::max(worst, std::abs(est.doas_deg[i] - truth[i]));
    CHECK(worst > 5.0);
}

TEST_CASE("spectrum_peaks behavior") {
    AngleGrid grid = AngleGrid::make(-10.0, 10.0, 1.0);

    AngleSpectrum sp;
    sp.grid = grid;
    sp.power = Eigen::VectorXd::Zero(grid.size());
    sp.power(5) = 0.5;
    sp.power(6) = 1.0;
    sp.power(7) = 0.4;
    const PickedAngles single = spectrum_peaks(sp, 1);
    CHECK(single.angles_deg == std::vector<double>{grid.angle(6)});
    CHECK_FALSE(single.shortfall);

    // flat spectrum: no strict local maxima, padded by the tie-break
    AngleSpectrum flat;
    flat.grid = grid;
    flat.power = Eigen::VectorXd::Ones(grid.size());
    const PickedAngles padded = spectrum_peaks(flat, 2);
    CHECK(padded.shortfall);
    CHECK(padded.angles_deg == std::vector<double>{grid.angle(0), grid.angle(1)});

    // boundary bins are not peaks
    AngleSpectrum edge;
    edge.grid = grid;
    edge.power = Eigen::VectorXd::Zero(grid.size());
    edge.power(0) = 5.0;
    edge.power(3) = 1.0;
    const PickedAngles e = spectrum_peaks(edge, 1);
    CHECK(e.angles_deg == std::vector<double>{grid.angle(3)});
}
