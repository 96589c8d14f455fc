// The parallel/Eigen kernels must agree with the plain serial reference
// implementations on identical inputs.
#include "doa/reference.hpp"
#include "doctest.h"

using namespace doa;

namespace {

const ArrayGeometry kUla15{15, 0.5};

CovarianceMatrix noisy_covariance(std::uint64_t seed, int k) {
    SourceScenario s;
    s.doas_deg = {-40.0, 0.0, 24.0};
    s.snr_db = 0.0;
    s.n_snapshots = k;
    RngStream rng(seed);
    return sample_covariance(synthesize_snapshots(kUla15, s, rng));
}

}  // namespace

TEST_CASE("dictionary builder parity") {
    for (const auto& grid :
         {AngleGrid::standard(), AngleGrid::make(-60.0, 60.0, 0.25)}) {
        const Dictionary d = build_dictionary(kUla15, grid);
        const Eigen::MatrixXcd r = ref::build_dictionary_matrix(kUla15, grid);
        CHECK((d.matrix - r).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("spectrum kernel parity on noisy covariances") {
    const Dictionary dict = build_dictionary(kUla15, AngleGrid::standard());
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        const CovarianceMatrix cov = noisy_covariance(seed, 400);

        const AngleSpectrum m1 = music_spectrum(cov, dict, 3);
        const AngleSpectrum m2 = ref::music_spectrum(cov, dict, 3);
        CHECK((m1.power - m2.power).cwiseAbs().maxCoeff() < 1e-10);

        const AngleSpectrum c1 = capon_spectrum(cov, dict);
        const AngleSpectrum c2 = ref::capon_spectrum(cov, dict);
        CHECK((c1.power - c2.power).cwiseAbs().maxCoeff() < 1e-10);

        const AngleSpectrum p1 = propagator_spectrum(cov, dict, 3);
        const AngleSpectrum p2 = ref::propagator_spectrum(cov, dict, 3);
        CHECK((p1.power - p2.power).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("omp recovery parity, including the compressive path") {
    const Dictionary dict = build_dictionary(kUla15, AngleGrid::standard());
    SourceScenario s;
    s.doas_deg = {-40.0, 0.0, 24.0};
    s.snr_db = 0.0;
    s.n_snapshots = 1;

    for (std::uint64_t seed = 0; seed < 16; ++seed) {
        RngStream rng(seed);
        const Eigen::VectorXcd x = synthesize_snapshots(kUla15, s, rng).data.col(0);

        const MeasurementMatrix id =
            make_measurement_matrix(MeasurementKind::identity, 15, 15);
        const EffectiveDictionary ed = effective_dictionary(id, dict);
        const OmpResult a = omp_recover(ed, x, 3, 0.0);
        const OmpResult b = ref::omp_recover(ed, x, 3, 0.0);
        CHECK(a.support == b.support);
        CHECK((a.coefficients - b.coefficients).cwiseAbs().maxCoeff() < 1e-8);
        REQUIRE(a.residual_norms.size() == b.residual_norms.size());
        for (std::size_t i = 0; i < a.residual_norms.size(); ++i)
            CHECK(a.residual_norms[i] == doctest::Approx(b.residual_norms[i]).epsilon(1e-10));

        const MeasurementMatrix phi = make_measurement_matrix(
            MeasurementKind::complex_gaussian, 6, 15, seed + 1000);
        const EffectiveDictionary edc = effective_dictionary(phi, dict);
        const Eigen::VectorXcd y = compress(phi, x).data;
        const OmpResult ac = omp_recover(edc, y, 3, 0.0);
        const OmpResult bc = ref::omp_recover(edc, y, 3, 0.0);
        CHECK(ac.support == bc.support);
        CHECK((ac.coefficients - bc.coefficients).cwiseAbs().maxCoeff() < 1e-8);
    }
}
