#include "relqi/errors.hpp"
#include "relqi/fields.hpp"
#include "relqi/interferometer.hpp"
#include "relqi/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace relqi;

namespace
{

const cplx I{0.0, 1.0};

ModeLabel photon(int port, int index = 0, double kz = 1.0)
{
    return {mass_shell(0.0, Vec3(0, 0, kz)), index, Species::boson, port};
}
ModeLabel electron(int port, int spin) { return {mass_shell(1.0, Vec3::Zero()), spin, Species::fermion, port}; }

MatX random_complex(Rng& rng, Eigen::Index n, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    MatX m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            m(i, j) = cplx(g(rng), g(rng));
    return m;
}

MatX random_hermitian(Rng& rng, Eigen::Index n, double scale = 1.0)
{
    const MatX m = random_complex(rng, n, scale);
    return 0.5 * (m + m.adjoint());
}

// Real antisymmetric times i: Hermitian and antisymmetric.
MatX random_imaginary_antisymmetric(Rng& rng, Eigen::Index n, double scale = 1.0)
{
    std::normal_distribution<double> g(0.0, scale);
    MatX m = MatX::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double v = g(rng);
            m(i, j) = I * v;
            m(j, i) = -I * v;
        }
    return m;
}

VecX random_state(Rng& rng, std::size_t n)
{
    std::normal_distribution<double> g;
    VecX v(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = cplx(g(rng), g(rng));
    return v.normalized();
}

// H = 1/2 (a^+ A a^+ + h.c.) + a^+ B a assembled from ladder matrices.
MatX dense_bosonic(const BosonicBilinearH& h, const FockSpace& space)
{
    const auto n = static_cast<Eigen::Index>(h.modes().size());
    std::vector<MatX> a, ad;
    for (const auto& m : h.modes()) {
        a.push_back(ladder_matrix(space, space.require(m), false));
        ad.push_back(ladder_matrix(space, space.require(m), true));
    }
    const auto d = static_cast<Eigen::Index>(space.dimension());
    MatX out = MatX::Zero(d, d);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
            const MatX pair = 0.5 * h.A()(i, j) * ad[si] * ad[sj];
            out += pair + pair.adjoint() + h.B()(i, j) * ad[si] * a[sj];
        }
    return out;
}

// Fermionic H over s = (b.., d^+..) assembled from ladder matrices.
MatX dense_fermionic(const FermionicBilinearH& h, const FockSpace& space)
{
    const auto phys = h.physical_modes();
    const auto n = h.fermion_modes().size();
    std::vector<MatX> s, sd;
    for (std::size_t j = 0; j < n; ++j) {
        s.push_back(ladder_matrix(space, space.require(phys[j]), false));
        sd.push_back(ladder_matrix(space, space.require(phys[j]), true));
    }
    for (std::size_t j = 0; j < n; ++j) {
        s.push_back(ladder_matrix(space, space.require(phys[n + j]), true));
        sd.push_back(ladder_matrix(space, space.require(phys[n + j]), false));
    }
    const auto d = static_cast<Eigen::Index>(space.dimension());
    MatX out = MatX::Zero(d, d);
    for (std::size_t i = 0; i < 2 * n; ++i)
        for (std::size_t j = 0; j < 2 * n; ++j) {
            const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
            const MatX pair = 0.5 * h.calA()(ii, jj) * sd[i] * sd[j];
            out += pair + pair.adjoint() + h.calB()(ii, jj) * sd[i] * s[j];
        }
    return out;
}

// Random state with at most `max_total` quanta, so number-conserving
// evolution stays inside the truncated space.
FockState bounded_state(Rng& rng, const FockSpacePtr& space, int max_total)
{
    VecX v = random_state(rng, space->dimension());
    for (std::size_t k = 0; k < space->dimension(); ++k) {
        const Occupation occ = space->occupation(k);
        int total = 0;
        for (int n : occ)
            total += n;
        if (total > max_total)
            v(static_cast<Eigen::Index>(k)) = 0.0;
    }
    return FockState(space, v.normalized());
}

std::vector<std::size_t> all_modes(const FockSpace& s)
{
    std::vector<std::size_t> out(s.mode_count());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = i;
    return out;
}

}  // namespace

TEST_CASE("Hamiltonian validation")
{
    const std::vector<ModeLabel> modes = {photon(1), photon(2)};
    MatX b = MatX::Zero(2, 2);
    b(0, 1) = 1.0;
    CHECK_THROWS_AS(BosonicBilinearH(modes, MatX::Zero(2, 2), b), ValidationError);
    MatX a = MatX::Zero(2, 2);
    a(0, 1) = 1.0;
    CHECK_THROWS_AS(BosonicBilinearH(modes, a, MatX::Zero(2, 2)), ValidationError);
    CHECK_THROWS_AS(BosonicBilinearH(modes, MatX::Zero(3, 3), MatX::Zero(2, 2)), ValidationError);
    CHECK_THROWS_AS(beam_splitter(photon(1), photon(1)), ValidationError);
    CHECK_THROWS_AS(BosonicBilinearH({electron(1, 1)}, MatX::Zero(1, 1), MatX::Zero(1, 1)), ValidationError);

    const std::vector<ModeLabel> fm = {electron(1, 1), electron(2, 1)};
    const MatX z = MatX::Zero(2, 2);
    MatX sym = MatX::Zero(2, 2);
    sym(0, 1) = sym(1, 0) = 1.0;
    CHECK_THROWS_AS(FermionicBilinearH::from_blocks(fm, sym, z, z, z, z, z), ValidationError);
    CHECK_THROWS_AS(FermionicBilinearH::from_blocks(fm, z, z, z, sym, z, z), ValidationError);
    MatX nonherm = MatX::Zero(4, 4);
    nonherm(0, 1) = 1.0;
    CHECK_THROWS_AS(FermionicBilinearH(fm, MatX::Zero(4, 4), nonherm), ValidationError);
    CHECK(FermionicBilinearH::from_blocks(fm, z, z, z, z, z, z).block_structure_defect() == 0.0);
}

TEST_CASE("50:50 beam splitter Heisenberg map")
{
    const auto h = beam_splitter(photon(1), photon(2));
    const auto map = heisenberg_transform(h);
    const double r = 1.0 / std::sqrt(2.0);
    MatX expected(2, 2);
    expected << r, r, -r, r;
    CHECK(max_abs(map.alpha - expected) < 1e-14);
    CHECK(max_abs(map.beta) < 1e-15);
    CHECK(map.symplectic_defect() < 1e-14);

    const auto zero = heisenberg_transform(beam_splitter(photon(1), photon(2), 0.0));
    CHECK(max_abs(zero.alpha - MatX::Identity(2, 2)) < 1e-15);
    const auto none = heisenberg_transform(BosonicBilinearH({photon(1), photon(2)}, MatX::Zero(2, 2), MatX::Zero(2, 2)));
    CHECK(max_abs(none.alpha - MatX::Identity(2, 2)) < 1e-15);
}

TEST_CASE("boosted beam splitter acts as the inverse on primed modes")
{
    const std::vector<ModeLabel> modes = {photon(1), photon(2)};
    const auto lambda = LorentzTransform::boost(1.0, Vec3::UnitZ());
    std::vector<ModeLabel> target;
    MatX alpha = MatX::Zero(2, 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto u = em_bogoliubov(lambda, modes[i].momentum, {});
        alpha(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = std::conj(u.phase * u.matrix(0, 0));
        target.push_back({lambda.apply(modes[i].momentum), 0, Species::boson, modes[i].port});
    }
    const BogoliubovMap frame{modes, target, alpha, MatX::Zero(2, 2), Statistics::bosonic};
    const auto moved = heisenberg_transform(transport_hamiltonian(beam_splitter(modes[0], modes[1]), frame));
    const double r = 1.0 / std::sqrt(2.0);
    // a(Lk1) -> (a'(Lk1) - a'(Lk2))/sqrt2 is the inverse of the transported map.
    const MatX inv = moved.inverse().alpha;
    CHECK(std::abs(inv(0, 0) - r) < 1e-14);
    CHECK(std::abs(inv(0, 1) + r) < 1e-14);
    CHECK(moved.target == target);
}

TEST_CASE("transport")
{
    Rng rng(31);
    const std::vector<ModeLabel> modes = {photon(1), photon(2)};
    const BosonicBilinearH h(modes, MatX::Zero(2, 2), random_hermitian(rng, 2));

    const auto same = transport_hamiltonian(h, BogoliubovMap::identity(modes, Statistics::bosonic));
    CHECK(max_abs(same.B() - h.B()) < 1e-15);
    CHECK(max_abs(same.A()) < 1e-15);

    // a_i = e^{i phi_i} b_i turns a_i^+ B_ik a_k into e^{-i phi_i} B_ik e^{i phi_k} b_i^+ b_k.
    const double p0 = 0.4, p1 = -1.3;
    MatX alpha = MatX::Zero(2, 2);
    alpha(0, 0) = std::exp(I * p0);
    alpha(1, 1) = std::exp(I * p1);
    const BogoliubovMap phases{modes, modes, alpha, MatX::Zero(2, 2), Statistics::bosonic};
    const auto moved = transport_hamiltonian(h, phases);
    MatX expected = h.B();
    expected(0, 1) *= std::exp(I * (p1 - p0));
    expected(1, 0) *= std::exp(I * (p0 - p1));
    CHECK(max_abs(moved.B() - expected) < 1e-14);

    CHECK_THROWS_AS(transport_hamiltonian(h, BogoliubovMap::identity({photon(3), photon(4)}, Statistics::bosonic)),
                    ValidationError);
}

TEST_CASE("transport commutes with the Heisenberg map")
{
    Rng rng(33);
    for (int trial = 0; trial < 20; ++trial) {
        const std::vector<ModeLabel> modes = {photon(1), photon(2), photon(3)};
        MatX a = random_complex(rng, 3, 0.3);
        a = 0.5 * (a + a.transpose()).eval();
        const BosonicBilinearH h(modes, a, random_hermitian(rng, 3));
        // Random symplectic frame map from a random quadratic generator.
        MatX fa = random_complex(rng, 3, 0.2);
        fa = 0.5 * (fa + fa.transpose()).eval();
        std::vector<ModeLabel> target = {photon(1, 0, 2.0), photon(2, 0, 2.0), photon(3, 0, 2.0)};
        BogoliubovMap f = heisenberg_transform(BosonicBilinearH(modes, fa, random_hermitian(rng, 3)));
        f.target = target;
        const auto lhs = heisenberg_transform(transport_hamiltonian(h, f));
        const auto rhs = f.inverse().then(heisenberg_transform(h)).then(f);
        CHECK(max_abs(lhs.alpha - rhs.alpha) < 1e-8);
        CHECK(max_abs(lhs.beta - rhs.beta) < 1e-8);
    }
}

TEST_CASE("evolution matches a dense exponential")
{
    Rng rng(35);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<ModeLabel> modes = {photon(1), photon(2), photon(3)};
        const BosonicBilinearH h(modes, MatX::Zero(3, 3), random_hermitian(rng, 3));
        const auto space = std::make_shared<const FockSpace>(modes, 3);
        const FockState psi = bounded_state(rng, space, 3);
        const VecX oracle = hermitian_exp_i(dense_bosonic(h, *space)) * psi.amplitudes();
        const auto out = evolve(psi, h);
        CHECK(max_abs(out.state.amplitudes() - oracle) < 1e-10);
        CHECK_FALSE(out.flagged);
        CHECK(std::abs(out.state.norm() - 1.0) < 1e-9);
        CHECK(max_abs(fock_operator(h, *space) - dense_bosonic(h, *space)) < 1e-12);
    }
}

TEST_CASE("H = 0 leaves states unchanged")
{
    const std::vector<ModeLabel> modes = {photon(1), photon(2)};
    const auto space = std::make_shared<const FockSpace>(modes, 2);
    Rng rng(1);
    const FockState psi(space, random_state(rng, space->dimension()));
    const auto out = evolve(psi, BosonicBilinearH(modes, MatX::Zero(2, 2), MatX::Zero(2, 2)));
    CHECK(max_abs(out.state.amplitudes() - psi.amplitudes()) < 1e-15);
}

TEST_CASE("Hong-Ou-Mandel")
{
    const std::vector<ModeLabel> modes = {photon(1), photon(2)};
    const auto space = std::make_shared<const FockSpace>(modes, 2);
    const auto in = prepare({{1.0, {modes[0], modes[1]}}}, space);
    const auto out = evolve(in, beam_splitter(modes[0], modes[1]));
    const auto stats = number_statistics(out.state, {0, 1});
    CHECK(stats.probability({1, 1}) < 1e-24);
    CHECK(stats.probability({2, 0}) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(stats.probability({0, 2}) == doctest::Approx(0.5).epsilon(1e-12));
    const auto pr = partial_trace(out.state, {0});
    CHECK(pr.purity() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("fermionic beam splitter maps the twin input onto itself")
{
    const std::vector<ModeLabel> fm = {electron(1, 1), electron(1, 2), electron(2, 1), electron(2, 2)};
    const auto h = fermionic_beam_splitter(fm, {{0, 2}, {1, 3}});
    const auto space = std::make_shared<const FockSpace>(h.physical_modes(), 1);
    for (std::size_t j = 0; j < 2; ++j) {
        const auto in = prepare({{1.0, {fm[j], fm[2 + j]}}}, space);
        const auto out = evolve(in, h).state;
        CHECK(std::abs(std::abs(in.amplitudes().dot(out.amplitudes())) - 1.0) < 1e-12);
    }
    const auto map = heisenberg_transform(h);
    CHECK(map.fermionic_unitarity_defect() < 1e-12);
}

TEST_CASE("fermionic evolution matches a dense exponential, pairing terms included")
{
    Rng rng(37);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<ModeLabel> fm = {electron(1, 1), electron(2, 1)};
        const MatX z = MatX::Zero(2, 2);
        auto anti = [&](double scale) {
            MatX m = random_complex(rng, 2, scale);
            return MatX(0.5 * (m - m.transpose()));
        };
        const MatX b1 = random_imaginary_antisymmetric(rng, 2);
        const MatX b2 = random_imaginary_antisymmetric(rng, 2);
        const auto h = FermionicBilinearH::from_blocks(fm, anti(0.5), anti(0.5), anti(0.5), b1, b2, z);
        const auto space = std::make_shared<const FockSpace>(h.physical_modes(), 1);
        const FockState psi(space, random_state(rng, space->dimension()));
        const VecX oracle = hermitian_exp_i(dense_fermionic(h, *space)) * psi.amplitudes();
        CHECK(max_abs(evolve(psi, h).state.amplitudes() - oracle) < 1e-10);
        CHECK(heisenberg_transform(h).fermionic_unitarity_defect() < 1e-10);

        // General (non-block) form with pairing between all s components.
        MatX ca = random_complex(rng, 4, 0.4);
        ca = 0.5 * (ca - ca.transpose()).eval();
        const FermionicBilinearH g(fm, ca, random_hermitian(rng, 4, 0.5));
        const VecX oracle_g = hermitian_exp_i(dense_fermionic(g, *space)) * psi.amplitudes();
        CHECK(max_abs(evolve(psi, g).state.amplitudes() - oracle_g) < 1e-10);
    }
}

TEST_CASE("Schroedinger and Heisenberg pictures agree")
{
    Rng rng(39);
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 2 + trial % 2;
        std::vector<ModeLabel> modes;
        for (int i = 0; i < n; ++i)
            modes.push_back(photon(i + 1));
        const BosonicBilinearH h(modes, MatX::Zero(n, n), random_hermitian(rng, n));
        const auto space = std::make_shared<const FockSpace>(modes, 3);
        const FockState psi = bounded_state(rng, space, 3);
        const auto a = number_statistics(evolve(psi, h).state, all_modes(*space));
        const auto b = number_statistics(apply_bogoliubov(psi, heisenberg_transform(h)), all_modes(*space));
        CHECK(max_discrepancy(a, b) < 1e-8);
    }
    for (int trial = 0; trial < 25; ++trial) {
        const Eigen::Index n = 2 + trial % 2;
        std::vector<ModeLabel> fm;
        for (int i = 0; i < n; ++i)
            fm.push_back(electron(i + 1, 1));
        const MatX z = MatX::Zero(n, n);
        const auto h = FermionicBilinearH::from_blocks(fm, z, z, z, random_imaginary_antisymmetric(rng, n),
                                                       random_imaginary_antisymmetric(rng, n), z);
        const auto space = std::make_shared<const FockSpace>(h.physical_modes(), 1);
        const FockState psi(space, random_state(rng, space->dimension()));
        const auto a = number_statistics(evolve(psi, h).state, all_modes(*space));
        const auto b = number_statistics(apply_bogoliubov(psi, heisenberg_transform(h)), all_modes(*space));
        CHECK(max_discrepancy(a, b) < 1e-8);
    }
}

TEST_CASE("energy is conserved")
{
    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        const std::vector<ModeLabel> modes = {photon(1), photon(2), photon(3)};
        const BosonicBilinearH h(modes, MatX::Zero(3, 3), random_hermitian(rng, 3));
        const auto space = std::make_shared<const FockSpace>(modes, 2);
        const FockState psi = bounded_state(rng, space, 2);
        CHECK(std::abs(energy(evolve(psi, h).state, h) - energy(psi, h)) < 1e-9);
    }
}

TEST_CASE("two-mode squeezing")
{
    const double r = 0.5;
    const std::vector<ModeLabel> modes = {photon(1), photon(2)};
    MatX a = MatX::Zero(2, 2);
    a(0, 1) = a(1, 0) = I * r;
    const BosonicBilinearH h(modes, a, MatX::Zero(2, 2));

    const auto map = heisenberg_transform(h);
    CHECK(map.symplectic_defect() < 1e-12);
    CHECK(std::abs(map.alpha(0, 0) - std::cosh(r)) < 1e-12);
    CHECK(std::abs(std::abs(map.beta(0, 1)) - std::sinh(r)) < 1e-12);

    const double expected = std::sinh(r) * std::sinh(r);
    double previous = 0.0;
    for (int cutoff : {12, 16}) {
        const auto out = evolve(vacuum(modes, cutoff), h);
        const double n = mean_occupation(out.state, 0);
        CHECK(std::abs(n - expected) < 1e-6);
        CHECK(std::abs(mean_occupation(out.state, 1) - expected) < 1e-6);
        if (cutoff == 16)
            CHECK(std::abs(n - previous) < 1e-6);
        previous = n;
    }
    // A small cutoff loses visible norm and is flagged.
    CHECK(evolve(vacuum(modes, 2), h).flagged);
}

TEST_CASE("maps from overlaps")
{
    const std::vector<ModeLabel> modes = {photon(1), photon(2)};
    const auto id = mode_overlap_map(MatX::Identity(2, 2), MatX::Zero(2, 2), modes, modes);
    CHECK(max_abs(id.alpha - MatX::Identity(2, 2)) == 0.0);

    const double t = 0.6;
    MatX mix(2, 2);
    mix << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
    const auto bs = mode_overlap_map(mix, MatX::Zero(2, 2), modes, modes);
    CHECK(bs.number_conserving());
    CHECK(bs.symplectic_defect() < 1e-14);

    const double r = 0.5;
    MatX gf = std::cosh(r) * MatX::Identity(2, 2);
    MatX fg = MatX::Zero(2, 2);
    fg(0, 1) = fg(1, 0) = -std::sinh(r);
    const auto sq = mode_overlap_map(gf, fg, modes, modes);
    CHECK(sq.symplectic_defect() < 1e-12);
    // The generating Hamiltonian reproduces the map and squeezes the vacuum.
    const auto h = hamiltonian_from_map(sq);
    const auto back = heisenberg_transform(h);
    CHECK(max_abs(back.alpha - sq.alpha) < 1e-10);
    CHECK(max_abs(back.beta - sq.beta) < 1e-10);
    const auto out = evolve(vacuum(modes, 16), h);
    CHECK(std::abs(mean_occupation(out.state, 0) - std::sinh(r) * std::sinh(r)) < 1e-6);

    MatX broken = MatX::Identity(2, 2);
    broken(0, 1) = 0.5;
    CHECK_THROWS_AS(mode_overlap_map(broken, MatX::Zero(2, 2), modes, modes), ValidationError);
}

TEST_CASE("Bogoliubov map algebra")
{
    Rng rng(43);
    const std::vector<ModeLabel> modes = {photon(1), photon(2)};
    MatX a = random_complex(rng, 2, 0.3);
    a = 0.5 * (a + a.transpose()).eval();
    const auto m = heisenberg_transform(BosonicBilinearH(modes, a, random_hermitian(rng, 2)));
    const auto round = m.then(m.inverse());
    CHECK(max_abs(round.alpha - MatX::Identity(2, 2)) < 1e-12);
    CHECK(max_abs(round.beta) < 1e-12);
    CHECK(max_abs(from_nambu(m.nambu(), modes, modes, Statistics::bosonic).alpha - m.alpha) == 0.0);

    BogoliubovMap bad = m;
    bad.alpha(0, 0) += 0.1;
    CHECK_THROWS_AS(bad.require_canonical(), ValidationError);
}
