#include "relqi/errors.hpp"
#include "relqi/experiments.hpp"
#include "relqi/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace relqi;

namespace
{

const FourVector kz = mass_shell(0.0, Vec3(0, 0, 1.0));

double spatial_total(const DetectionStatistics& s)
{
    double t = 0.0;
    for (const auto& [occ, p] : s.outcomes)
        t += p;
    return t;
}

}  // namespace

TEST_CASE("twin photons under a boost")
{
    const auto r = twin_photon(kz, kz, LorentzTransform::boost(1.0, Vec3::UnitZ()));
    CHECK(r.pass);
    CHECK(r.check("rest_coincidence") < 1e-12);
    CHECK(r.check("boosted_coincidence") < 1e-12);
    CHECK(r.max_discrepancy < 1e-10);
    CHECK(r.rest_frame_stats.probability({2, 0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.check("heisenberg_residual") < 1e-12);
    CHECK(spatial_total(r.boosted_frame_stats) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(r.truncation_flagged);
    CHECK(r.field_diagnostics.size() == 2);
    CHECK_THROWS_AS(r.check("missing"), ValidationError);
}

TEST_CASE("twin photons at the identity")
{
    const auto r = twin_photon(kz, kz, LorentzTransform::identity());
    CHECK(r.max_discrepancy == 0.0);
    CHECK(r.pass);
}

TEST_CASE("rotation about the beam axis rotates polarization labels only")
{
    const double theta = 0.7;
    const auto rot = LorentzTransform::rotation(theta, Vec3::UnitZ());
    const auto r = twin_photon(kz, kz, rot);
    CHECK(r.max_discrepancy < 1e-12);

    // Oracle: each a^+_H picks up the column U_{jH} of the polarization rotation.
    const std::vector<ModeLabel> modes = {{kz, 0, Species::boson, 1}, {kz, 1, Species::boson, 1},
                                          {kz, 0, Species::boson, 2}, {kz, 1, Species::boson, 2}};
    const auto frame = photon_frame_map(modes, rot, {}, PolarizationFrame::transported);
    const auto boosted = apply_bogoliubov({{1.0, {modes[0], modes[2]}}}, frame, 2);
    const double u[2] = {std::cos(theta), std::sin(theta)};
    for (int j = 0; j < 2; ++j)
        for (int m = 0; m < 2; ++m) {
            Occupation occ{0, 0, 0, 0};
            occ[static_cast<std::size_t>(j)] += 1;
            occ[2 + static_cast<std::size_t>(m)] += 1;
            CHECK(std::abs(boosted.amplitude(occ) - u[j] * u[m]) < 1e-12);
        }
}

TEST_CASE("twin photons with different momenta and random transforms")
{
    Rng rng(51);
    for (int i = 0; i < 10; ++i) {
        const FourVector k1 = random_lightlike(rng);
        const FourVector k2 = random_lightlike(rng);
        const auto lambda = random_lorentz(rng, 2.0);
        for (int pol : {0, 1})
            for (auto frame : {PolarizationFrame::transported, PolarizationFrame::canonical}) {
                TwinPhotonOptions opts;
                opts.polarization = pol;
                opts.frame = frame;
                opts.ell = FourVector(0.3, 0.1, -0.2, 0.5);
                const auto r = twin_photon(k1, k2, lambda, opts);
                CHECK(r.pass);
                CHECK(r.max_discrepancy < 1e-9);
                CHECK(r.check("rest_coincidence") < 1e-12);
                CHECK(r.check("boosted_coincidence") < 1e-12);
            }
    }
}

TEST_CASE("twin photon validation")
{
    const auto id = LorentzTransform::identity();
    CHECK_THROWS_AS(twin_photon(mass_shell(1.0, Vec3::UnitZ()), kz, id), ValidationError);
    TwinPhotonOptions opts;
    opts.polarization = 2;
    CHECK_THROWS_AS(twin_photon(kz, kz, id, opts), ValidationError);
    const std::vector<ModeLabel> lone = {{kz, 0, Species::boson, 1}};
    CHECK_THROWS_AS(photon_frame_map(lone, id, {}, PolarizationFrame::transported), ValidationError);
}

TEST_CASE("twin electrons at the identity")
{
    const FourVector k = mass_shell(1.0, Vec3::Zero());
    const auto r = twin_electron(k, k, 1.0, 1, LorentzTransform::identity());
    CHECK(r.pass);
    CHECK(std::abs(r.check("rest_coincidence") - 1.0) < 1e-12);
    CHECK(std::abs(r.check("rest_self_overlap") - 1.0) < 1e-12);
    CHECK(r.check("boosted_state_residual") < 1e-12);
}

TEST_CASE("twin electrons boosted from rest")
{
    const FourVector k = mass_shell(1.0, Vec3::Zero());
    const auto r = twin_electron(k, k, 1.0, 1, LorentzTransform::boost(1.2, Vec3::UnitZ()));
    CHECK(std::abs(r.check("rest_coincidence") - 1.0) < 1e-12);
    CHECK(std::abs(r.check("boosted_coincidence") - 1.0) < 1e-12);
    CHECK(r.check("same_spin_amplitude_residual") < 1e-10);
    CHECK(r.check("boosted_state_residual") < 1e-10);
    CHECK(r.check("boosted_double_occupation") < 1e-12);
    CHECK(r.max_discrepancy < 1e-9);
}

TEST_CASE("twin electrons under a rotation")
{
    const FourVector k = mass_shell(1.0, Vec3::Zero());
    const auto rot = LorentzTransform::rotation(0.9, Vec3::UnitX());
    const auto r = twin_electron(k, k, 1.0, 1, rot);
    CHECK(r.check("same_spin_amplitude_residual") < 1e-10);
    CHECK(r.check("boosted_double_occupation") < 1e-12);
    CHECK(r.check("same_port_cross_spin_amplitude") < 1e-12);
    CHECK(std::abs(r.check("boosted_coincidence") - 1.0) < 1e-12);

    // Spin-flipped pairs across the two ports keep their amplitude.
    const auto d = dirac_bogoliubov(rot, k, 1.0, {});
    CHECK(std::abs(d.matrix(0, 0) * d.matrix(1, 0)) > 0.1);
    CHECK(r.check("boosted_state_residual") < 1e-10);
}

TEST_CASE("twin electrons over random transforms and momenta")
{
    Rng rng(53);
    for (int i = 0; i < 8; ++i) {
        const double m = 0.5 + i * 0.2;
        const FourVector k1 = random_massive(rng, m, 3.0);
        const FourVector k2 = random_massive(rng, m, 3.0);
        const auto lambda = random_lorentz(rng, 2.0);
        TwinElectronOptions opts;
        opts.ell = FourVector(1.0, 0.0, 0.5, -0.5);
        const auto r = twin_electron(k1, k2, m, 1 + i % 2, lambda, opts);
        CHECK(r.pass);
        CHECK(r.max_discrepancy < 1e-9);
        CHECK(std::abs(r.check("boosted_coincidence") - 1.0) < 1e-12);
        CHECK(r.check("boosted_state_residual") < 1e-10);
    }
}

TEST_CASE("twin electron validation")
{
    const FourVector k = mass_shell(1.0, Vec3::Zero());
    const auto id = LorentzTransform::identity();
    CHECK_THROWS_AS(twin_electron(k, k, 1.0, 3, id), ValidationError);
    CHECK_THROWS_AS(twin_electron(k, k, 2.0, 1, id), ValidationError);
}

TEST_CASE("frame invariance sweeps")
{
    Rng rng(55);
    std::vector<LorentzTransform> boosts;
    for (int i = 0; i < 20; ++i)
        boosts.push_back(random_boost(rng, 2.0));
    const auto photons = frame_invariance_sweep(
        [](const LorentzTransform& l) { return twin_photon(kz, kz, l); }, boosts);
    CHECK(photons.pass);
    CHECK(photons.cases.size() == 20);
    CHECK(photons.max_discrepancy < 1e-9);

    const auto empty = frame_invariance_sweep([](const LorentzTransform& l) { return twin_photon(kz, kz, l); }, {});
    CHECK(empty.cases.empty());
    CHECK(empty.max_discrepancy == 0.0);

    std::vector<LorentzTransform> mixed;
    for (int i = 0; i < 6; ++i)
        mixed.push_back(i % 2 ? random_rotation(rng) : random_lorentz(rng, 2.0));
    const FourVector k1 = mass_shell(1.0, Vec3(0.3, 0, 0.4));
    const FourVector k2 = mass_shell(1.0, Vec3(-0.3, 0, 0.4));
    const auto electrons = frame_invariance_sweep(
        [&](const LorentzTransform& l) { return twin_electron(k1, k2, 1.0, 2, l); }, mixed);
    CHECK(electrons.pass);
    CHECK(electrons.max_discrepancy < 1e-9);
}
