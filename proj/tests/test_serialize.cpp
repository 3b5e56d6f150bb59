#include "relqi/errors.hpp"
#include "relqi/random.hpp"
#include "relqi/serialize.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace relqi;

namespace
{

json reparse(const json& j) { return json::parse(j.dump()); }

}  // namespace

TEST_CASE("complex numbers and matrices round-trip exactly")
{
    const cplx z{0.1 + 0.2, -1.0 / 3.0};
    CHECK(complex_from_json(reparse(to_json(z))) == z);
    CHECK(complex_from_json(json(2.5)) == cplx(2.5, 0.0));
    CHECK_THROWS_AS(complex_from_json(json::array({1.0})), ValidationError);
    CHECK_THROWS_AS(complex_from_json(json("x")), ValidationError);

    Rng rng(61);
    std::normal_distribution<double> g;
    MatX m(2, 3);
    for (Eigen::Index i = 0; i < 6; ++i)
        m(i / 3, i % 3) = cplx(g(rng), g(rng));
    const MatX back = matrix_from_json(reparse(to_json(m)));
    CHECK(back.rows() == 2);
    CHECK(back.cols() == 3);
    CHECK(max_abs(back - m) == 0.0);
    CHECK_THROWS_AS(matrix_from_json(json::parse("[[[1,0]],[[1,0],[2,0]]]")), ValidationError);
}

TEST_CASE("four-vectors and labels")
{
    const FourVector k = mass_shell(1.0, Vec3(0.1, 0.2, 0.3));
    const FourVector back = four_vector_from_json(reparse(to_json(k)));
    CHECK((back.components() - k.components()).norm() == 0.0);
    CHECK_THROWS_AS(four_vector_from_json(json::array({1, 2, 3})), ValidationError);

    const ModeLabel l{k, 2, Species::antifermion, 3};
    CHECK(mode_label_from_json(reparse(to_json(l))) == l);
    json bad = to_json(l);
    bad["colour"] = "red";
    CHECK_THROWS_AS(mode_label_from_json(bad), ValidationError);
}

TEST_CASE("Lorentz transforms round-trip and revalidate")
{
    Rng rng(63);
    for (int i = 0; i < 20; ++i) {
        const auto l = random_lorentz(rng, 2.0);
        const auto back = lorentz_from_json(reparse(to_json(l)));
        CHECK(max_abs(MatX(back.matrix().cast<cplx>() - l.matrix().cast<cplx>())) == 0.0);
        CHECK(max_abs(MatX(back.spinor() - l.spinor())) < 1e-12);
    }
    const auto turn = LorentzTransform::rotation(2 * std::numbers::pi, Vec3::UnitZ());
    const auto tb = lorentz_from_json(reparse(to_json(turn)));
    CHECK(max_abs(MatX(tb.spinor() + Mat4c::Identity())) < 1e-12);

    json broken = to_json(LorentzTransform::identity());
    broken["matrix"][0][1] = 0.5;
    CHECK_THROWS_AS(lorentz_from_json(broken), ValidationError);
    json lift = to_json(LorentzTransform::identity());
    lift["spinor"][0][0] = json::array({0.5, 0.0});
    CHECK_THROWS_AS(lorentz_from_json(lift), ValidationError);
    json extra = to_json(LorentzTransform::identity());
    extra["note"] = 1;
    CHECK_THROWS_AS(lorentz_from_json(extra), ValidationError);
}

TEST_CASE("mode transforms round-trip and recheck unitarity")
{
    const auto l = LorentzTransform::boost(0.7, Vec3::UnitX()) * LorentzTransform::rotation(0.4, Vec3::UnitY());
    const FourVector k = mass_shell(1.2, Vec3(0.2, 0.4, -0.1));
    for (auto kind : {FieldKind::scalar, FieldKind::massive_vector, FieldKind::dirac, FieldKind::antifermion}) {
        const auto m = field_bogoliubov(kind, l, k, 1.2, FourVector(1, 0, 0, 0));
        const auto back = mode_transform_from_json(reparse(to_json(m)));
        CHECK(back.kind == kind);
        CHECK(max_abs(back.matrix - m.matrix) == 0.0);
        CHECK(max_abs(back.raw - m.raw) == 0.0);
        CHECK(back.phase == m.phase);
        CHECK(back.diagnostics.raw_singular == m.diagnostics.raw_singular);
    }
    const auto em = em_bogoliubov(l, mass_shell(0.0, Vec3(0, 1, 1)), {});
    CHECK(max_abs(mode_transform_from_json(reparse(to_json(em))).matrix - em.matrix) == 0.0);

    json bad = to_json(em);
    bad["matrix"][0][0] = json::array({2.0, 0.0});
    CHECK_THROWS_AS(mode_transform_from_json(bad), ValidationError);
}

TEST_CASE("Bogoliubov maps round-trip and recheck canonical relations")
{
    const FourVector k = mass_shell(0.0, Vec3::UnitZ());
    const std::vector<ModeLabel> modes = {{k, 0, Species::boson, 1}, {k, 0, Species::boson, 2}};
    MatX a = MatX::Zero(2, 2);
    a(0, 1) = a(1, 0) = cplx(0.0, 0.3);
    const auto map = heisenberg_transform(BosonicBilinearH(modes, a, MatX::Identity(2, 2)));
    const auto back = bogoliubov_from_json(reparse(to_json(map)));
    CHECK(max_abs(back.alpha - map.alpha) == 0.0);
    CHECK(max_abs(back.beta - map.beta) == 0.0);
    CHECK(back.source == map.source);

    json bad = to_json(map);
    bad["beta"][0][1] = json::array({5.0, 0.0});
    CHECK_THROWS_AS(bogoliubov_from_json(bad), ValidationError);
    json shape = to_json(map);
    shape["source"].erase(0);
    CHECK_THROWS_AS(bogoliubov_from_json(shape), ValidationError);
}

TEST_CASE("statistics round-trip")
{
    DetectionStatistics s;
    s.outcomes[{0, 2}] = 0.5;
    s.outcomes[{2, 0}] = 0.5;
    s.outcomes[{1, 1}] = 0.0;
    const auto back = statistics_from_json(reparse(to_json(s)));
    CHECK(back.outcomes == s.outcomes);
    CHECK_THROWS_AS(statistics_from_json(json::parse(R"({"1,x": 0.5})")), ValidationError);
    CHECK_THROWS_AS(statistics_from_json(json::parse(R"({"1,0": 1.5})")), ValidationError);
}

TEST_CASE("Hamiltonian configuration")
{
    const auto h = bosonic_hamiltonian_from_json(json::parse(R"({
        "modes": [{"momentum": [1, 0, 0, 1], "port": 1}, {"momentum": [1, 0, 0, 1], "port": 2}],
        "B": [[[0, 0], [0, 0.5]], [[0, -0.5], [0, 0]]]
    })"));
    CHECK(h.modes().size() == 2);
    CHECK(h.B()(0, 1) == cplx(0.0, 0.5));
    CHECK(max_abs(h.A()) == 0.0);
    const auto again = bosonic_hamiltonian_from_json(reparse(to_json(h)));
    CHECK(max_abs(again.B() - h.B()) == 0.0);

    CHECK_THROWS_AS(bosonic_hamiltonian_from_json(json::parse(R"({"modes": [], "C": []})")), ValidationError);
    CHECK_THROWS_AS(bosonic_hamiltonian_from_json(json::parse(R"({
        "modes": [{"momentum": [1, 0, 0, 1]}], "B": [[[0, 1]]]})")),
                    ValidationError);

    const FourVector k = mass_shell(1.0, Vec3::Zero());
    const std::vector<ModeLabel> fm = {{k, 1, Species::fermion, 1}, {k, 1, Species::fermion, 2}};
    const auto fh = fermionic_beam_splitter(fm, {{0, 1}});
    const auto fback = fermionic_hamiltonian_from_json(reparse(to_json(fh)));
    CHECK(max_abs(fback.calB() - fh.calB()) == 0.0);
    CHECK(fback.fermion_modes() == fh.fermion_modes());
}

TEST_CASE("reports serialize their checks")
{
    const FourVector k = mass_shell(0.0, Vec3::UnitZ());
    const auto r = twin_photon(k, k, LorentzTransform::boost(0.5, Vec3::UnitX()));
    const json j = reparse(to_json(r));
    CHECK(j["pass"].get<bool>());
    CHECK(j["checks"]["rest_coincidence"].get<double>() == r.check("rest_coincidence"));
    CHECK(statistics_from_json(j["boosted_frame_stats"]).outcomes == r.boosted_frame_stats.outcomes);
}
