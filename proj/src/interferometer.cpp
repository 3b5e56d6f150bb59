#include "relqi/interferometer.hpp"

#include "relqi/errors.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace relqi
{
namespace
{

constexpr double kHermitianTolerance = 1e-12;
const cplx kI{0.0, 1.0};

double scaled_tolerance(const MatX& m) { return kHermitianTolerance * std::max(1.0, max_abs(m)); }

void require_square(const MatX& m, Eigen::Index n, const char* name)
{
    if (m.rows() != n || m.cols() != n) {
        std::ostringstream os;
        os << name << " must be " << n << "x" << n;
        throw ValidationError(os.str());
    }
}

double antisymmetry_defect(const MatX& m) { return max_abs(m + m.transpose()); }

// Permutation taking the physical Nambu vector (b, d, b^+, d^+) to (s, s^+).
MatX s_from_physical(Eigen::Index n)
{
    MatX q = MatX::Zero(4 * n, 4 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        q(j, j) = 1.0;                  // s_j = b_j
        q(n + j, 3 * n + j) = 1.0;      // s_{N+j} = d_j^+
        q(2 * n + j, 2 * n + j) = 1.0;  // s_j^+ = b_j^+
        q(3 * n + j, n + j) = 1.0;      // s_{N+j}^+ = d_j
    }
    return q;
}

std::vector<std::size_t> locate(const std::vector<ModeLabel>& modes, const FockSpace& space)
{
    std::vector<std::size_t> idx;
    for (const auto& m : modes)
        idx.push_back(space.require(m));
    return idx;
}

struct Ladder
{
    std::size_t mode;
    bool dagger;
};

// coefficient * first * second; `second` acts first
struct Term
{
    cplx coefficient;
    Ladder first;
    Ladder second;
};

// Applies one ladder operator to an occupation pattern without cutoff limits.
// Returns false when the result vanishes.
bool apply_ladder(const FockSpace& space, Occupation& occ, const Ladder& op, double& factor)
{
    int& n = occ[op.mode];
    if (space.fermionic(op.mode)) {
        if (op.dagger == (n == 1))
            return false;
        int parity = 0;
        for (std::size_t i = 0; i < op.mode; ++i)
            if (space.fermionic(i))
                parity += occ[i];
        factor *= (parity % 2 == 0) ? 1.0 : -1.0;
        n = op.dagger ? 1 : 0;
        return true;
    }
    if (op.dagger) {
        factor *= std::sqrt(double(n + 1));
        ++n;
        return true;
    }
    if (n == 0)
        return false;
    factor *= std::sqrt(double(n));
    --n;
    return true;
}

bool within_cutoff(const FockSpace& space, const Occupation& occ)
{
    for (std::size_t m = 0; m < occ.size(); ++m)
        if (occ[m] > space.max_occupation(m))
            return false;
    return true;
}

std::vector<Term> bosonic_terms(const BosonicBilinearH& h, const FockSpace& space)
{
    const auto idx = locate(h.modes(), space);
    std::vector<Term> terms;
    for (std::size_t j = 0; j < idx.size(); ++j)
        for (std::size_t k = 0; k < idx.size(); ++k) {
            const auto jj = static_cast<Eigen::Index>(j), kk = static_cast<Eigen::Index>(k);
            const cplx a = h.A()(jj, kk);
            const cplx b = h.B()(jj, kk);
            if (a != cplx{0.0, 0.0}) {
                terms.push_back({0.5 * a, {idx[j], true}, {idx[k], true}});
                terms.push_back({0.5 * std::conj(a), {idx[k], false}, {idx[j], false}});
            }
            if (b != cplx{0.0, 0.0})
                terms.push_back({b, {idx[j], true}, {idx[k], false}});
        }
    return terms;
}

std::vector<Term> fermionic_terms(const FermionicBilinearH& h, const FockSpace& space)
{
    const auto idx = locate(h.physical_modes(), space);
    const std::size_t n = h.fermion_modes().size();
    // s_j = b_j, s_{N+j} = d_j^+
    auto s = [&](std::size_t j) { return Ladder{idx[j], j >= n}; };
    auto sd = [&](std::size_t j) { return Ladder{idx[j], j < n}; };
    std::vector<Term> terms;
    for (std::size_t j = 0; j < 2 * n; ++j)
        for (std::size_t k = 0; k < 2 * n; ++k) {
            const auto jj = static_cast<Eigen::Index>(j), kk = static_cast<Eigen::Index>(k);
            const cplx a = h.calA()(jj, kk);
            const cplx b = h.calB()(jj, kk);
            if (a != cplx{0.0, 0.0}) {
                terms.push_back({0.5 * a, sd(j), sd(k)});
                terms.push_back({0.5 * std::conj(a), s(k), s(j)});
            }
            if (b != cplx{0.0, 0.0})
                terms.push_back({b, sd(j), s(k)});
        }
    return terms;
}

MatX dense_operator(const std::vector<Term>& terms, const FockSpace& space)
{
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    MatX op = MatX::Zero(dim, dim);
    for (std::size_t b = 0; b < space.dimension(); ++b) {
        const Occupation start = space.occupation(b);
        for (const auto& t : terms) {
            Occupation occ = start;
            double factor = 1.0;
            if (!apply_ladder(space, occ, t.second, factor) || !apply_ladder(space, occ, t.first, factor))
                continue;
            if (within_cutoff(space, occ))
                op(static_cast<Eigen::Index>(space.index(occ)), static_cast<Eigen::Index>(b)) += t.coefficient * factor;
        }
    }
    return op;
}

// ||(1 - P_cutoff) H psi||^2 / ||psi||^2: weight H pushes past the bosonic cutoff.
double cutoff_leakage(const FockState& state, const std::vector<Term>& terms)
{
    const FockSpace& space = *state.space();
    std::map<Occupation, cplx> overflow;
    for (std::size_t b = 0; b < space.dimension(); ++b) {
        const cplx amp = state.amplitudes()(static_cast<Eigen::Index>(b));
        if (amp == cplx{0.0, 0.0})
            continue;
        const Occupation start = space.occupation(b);
        for (const auto& t : terms) {
            Occupation occ = start;
            double factor = 1.0;
            if (!apply_ladder(space, occ, t.second, factor) || !apply_ladder(space, occ, t.first, factor))
                continue;
            if (!within_cutoff(space, occ))
                overflow[occ] += t.coefficient * factor * amp;
        }
    }
    double out = 0.0;
    for (const auto& [occ, v] : overflow)
        out += std::norm(v);
    return out / std::max(state.amplitudes().squaredNorm(), 1e-300);
}

}  // namespace

BosonicBilinearH::BosonicBilinearH(std::vector<ModeLabel> modes, MatX A, MatX B)
    : modes_(std::move(modes)), A_(std::move(A)), B_(std::move(B))
{
    const auto n = static_cast<Eigen::Index>(modes_.size());
    require_square(A_, n, "A");
    require_square(B_, n, "B");
    for (const auto& m : modes_)
        if (m.species != Species::boson)
            throw ValidationError("bosonic Hamiltonian over non-bosonic mode " + describe(m));
    if (max_abs(B_ - B_.adjoint()) > scaled_tolerance(B_))
        throw ValidationError("B block must be Hermitian");
    if (max_abs(A_ - A_.transpose()) > scaled_tolerance(A_))
        throw ValidationError("A block must be symmetric");
}

MatX BosonicBilinearH::generator() const
{
    const Eigen::Index n = B_.rows();
    MatX g(2 * n, 2 * n);
    g << B_, A_, -A_.conjugate(), -B_.conjugate();
    return g;
}

FermionicBilinearH::FermionicBilinearH(std::vector<ModeLabel> fermion_modes, MatX calA, MatX calB)
    : modes_(std::move(fermion_modes)), calA_(std::move(calA)), calB_(std::move(calB))
{
    const auto n = static_cast<Eigen::Index>(modes_.size());
    require_square(calA_, 2 * n, "calA");
    require_square(calB_, 2 * n, "calB");
    for (const auto& m : modes_)
        if (m.species != Species::fermion)
            throw ValidationError("fermionic Hamiltonian expects fermion labels, got " + describe(m));
    if (max_abs(calB_ - calB_.adjoint()) > scaled_tolerance(calB_))
        throw ValidationError("calB must be Hermitian");
}

FermionicBilinearH FermionicBilinearH::from_blocks(std::vector<ModeLabel> fermion_modes, const MatX& A1,
                                                   const MatX& A2, const MatX& C, const MatX& B1, const MatX& B2,
                                                   const MatX& D)
{
    const auto n = static_cast<Eigen::Index>(fermion_modes.size());
    const std::pair<const MatX*, const char*> blocks[] = {{&A1, "A1"}, {&A2, "A2"}, {&C, "C"},
                                                          {&B1, "B1"}, {&B2, "B2"}, {&D, "D"}};
    for (const auto& [m, name] : blocks) {
        require_square(*m, n, name);
        if (antisymmetry_defect(*m) > scaled_tolerance(*m))
            throw ValidationError(std::string(name) + " block must be antisymmetric");
    }
    MatX calA(2 * n, 2 * n), calB(2 * n, 2 * n);
    calA << A1, C, -C, A2;
    calB << B1, D, -D, B2;
    return {std::move(fermion_modes), calA, calB};
}

std::vector<ModeLabel> FermionicBilinearH::physical_modes() const
{
    std::vector<ModeLabel> out = modes_;
    for (ModeLabel m : modes_) {
        m.species = Species::antifermion;
        out.push_back(m);
    }
    return out;
}

double FermionicBilinearH::block_structure_defect() const
{
    const Eigen::Index n = static_cast<Eigen::Index>(modes_.size());
    double worst = 0.0;
    for (const MatX* m : {&calA_, &calB_}) {
        worst = std::max(worst, antisymmetry_defect(m->topLeftCorner(n, n)));
        worst = std::max(worst, antisymmetry_defect(m->bottomRightCorner(n, n)));
        worst = std::max(worst, antisymmetry_defect(m->topRightCorner(n, n)));
        worst = std::max(worst, max_abs(m->bottomLeftCorner(n, n) + m->topRightCorner(n, n)));
    }
    return worst;
}

MatX FermionicBilinearH::generator() const
{
    const Eigen::Index n2 = calB_.rows();
    const MatX a = 0.5 * (calA_ - calA_.transpose());
    MatX g(2 * n2, 2 * n2);
    g << calB_, a, -a.conjugate(), -calB_.conjugate();
    return g;
}

BosonicBilinearH beam_splitter(const std::vector<ModeLabel>& modes,
                               const std::vector<std::pair<std::size_t, std::size_t>>& couplings, double theta)
{
    const auto n = static_cast<Eigen::Index>(modes.size());
    MatX b = MatX::Zero(n, n);
    for (const auto& [p, q] : couplings) {
        if (p == q || p >= modes.size() || q >= modes.size())
            throw ValidationError("beam splitter needs two distinct modes");
        b(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) += kI * theta;
        b(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) -= kI * theta;
    }
    return {modes, MatX::Zero(n, n), b};
}

BosonicBilinearH beam_splitter(const ModeLabel& mode1, const ModeLabel& mode2, double theta)
{
    if (mode1 == mode2)
        throw ValidationError("beam splitter needs two distinct modes");
    return beam_splitter({mode1, mode2}, {{0, 1}}, theta);
}

FermionicBilinearH fermionic_beam_splitter(const std::vector<ModeLabel>& fermion_modes,
                                           const std::vector<std::pair<std::size_t, std::size_t>>& couplings,
                                           double theta)
{
    const auto n = static_cast<Eigen::Index>(fermion_modes.size());
    MatX b1 = MatX::Zero(n, n);
    for (const auto& [p, q] : couplings) {
        if (p == q || p >= fermion_modes.size() || q >= fermion_modes.size())
            throw ValidationError("beam splitter needs two distinct modes");
        b1(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) += kI * theta;
        b1(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(p)) -= kI * theta;
    }
    const MatX zero = MatX::Zero(n, n);
    return FermionicBilinearH::from_blocks(fermion_modes, zero, zero, zero, b1, zero, zero);
}

BogoliubovMap heisenberg_transform(const BosonicBilinearH& h)
{
    const MatX t = expm(-kI * h.generator());
    return from_nambu(t, h.modes(), h.modes(), Statistics::bosonic);
}

BogoliubovMap heisenberg_transform(const FermionicBilinearH& h)
{
    const auto n = static_cast<Eigen::Index>(h.fermion_modes().size());
    const MatX t_s = expm(-kI * h.generator());
    const MatX q = s_from_physical(n);
    const MatX t_phys = q.transpose() * t_s * q;
    const auto modes = h.physical_modes();
    return from_nambu(t_phys, modes, modes, Statistics::fermionic);
}

BosonicBilinearH hamiltonian_from_map(const BogoliubovMap& map)
{
    if (map.statistics != Statistics::bosonic || map.source.size() != map.target.size())
        throw ValidationError("hamiltonian_from_map expects a square bosonic map");
    map.require_canonical(1e-8);
    const auto n = static_cast<Eigen::Index>(map.source.size());
    const MatX g = kI * logm(map.nambu());
    const MatX b = g.topLeftCorner(n, n);
    const MatX a = g.topRightCorner(n, n);
    return {map.source, 0.5 * (a + a.transpose()), 0.5 * (b + b.adjoint())};
}

BosonicBilinearH transport_hamiltonian(const BosonicBilinearH& h, const BogoliubovMap& frame_map)
{
    if (frame_map.statistics != Statistics::bosonic)
        throw ValidationError("bosonic Hamiltonian needs a bosonic frame map");
    const auto n = static_cast<Eigen::Index>(h.modes().size());
    const auto m = static_cast<Eigen::Index>(frame_map.target.size());
    MatX alpha(n, m), beta(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int row = find_mode(frame_map.source, h.modes()[static_cast<std::size_t>(i)]);
        if (row < 0)
            throw ValidationError("frame map does not cover mode " + describe(h.modes()[static_cast<std::size_t>(i)]));
        alpha.row(i) = frame_map.alpha.row(row);
        beta.row(i) = frame_map.beta.row(row);
    }
    MatX t(2 * n, 2 * m);
    t << alpha, beta, beta.conjugate(), alpha.conjugate();
    MatX form(2 * n, 2 * n);
    form << h.B(), h.A(), h.A().conjugate(), h.B().transpose();
    const MatX moved = t.adjoint() * form * t;
    const MatX b = moved.topLeftCorner(m, m);
    const MatX a = moved.topRightCorner(m, m);
    return {frame_map.target, 0.5 * (a + a.transpose()), 0.5 * (b + b.adjoint())};
}

FermionicBilinearH transport_hamiltonian(const FermionicBilinearH& h, const BogoliubovMap& frame_map)
{
    if (frame_map.statistics != Statistics::fermionic)
        throw ValidationError("fermionic Hamiltonian needs a fermionic frame map");
    const auto phys = h.physical_modes();
    const auto n = static_cast<Eigen::Index>(h.fermion_modes().size());
    // target must again split into [fermions.., matching antifermions..]
    const auto m2 = static_cast<Eigen::Index>(frame_map.target.size());
    if (m2 % 2 != 0)
        throw ValidationError("fermionic frame map target must pair fermions with antifermions");
    const Eigen::Index m = m2 / 2;
    std::vector<ModeLabel> target_fermions(frame_map.target.begin(), frame_map.target.begin() + m);
    for (Eigen::Index j = 0; j < m; ++j) {
        ModeLabel anti = target_fermions[static_cast<std::size_t>(j)];
        anti.species = Species::antifermion;
        if (target_fermions[static_cast<std::size_t>(j)].species != Species::fermion
            || frame_map.target[static_cast<std::size_t>(m + j)] != anti)
            throw ValidationError("fermionic frame map target must be [fermions.., antifermions..]");
    }

    MatX alpha(2 * n, m2), beta(2 * n, m2);
    for (Eigen::Index i = 0; i < 2 * n; ++i) {
        const int row = find_mode(frame_map.source, phys[static_cast<std::size_t>(i)]);
        if (row < 0)
            throw ValidationError("frame map does not cover mode " + describe(phys[static_cast<std::size_t>(i)]));
        alpha.row(i) = frame_map.alpha.row(row);
        beta.row(i) = frame_map.beta.row(row);
    }
    MatX t_phys(4 * n, 2 * m2);
    t_phys << alpha, beta, beta.conjugate(), alpha.conjugate();
    const MatX t_s = s_from_physical(n) * t_phys * s_from_physical(m).transpose();

    const MatX a = 0.5 * (h.calA() - h.calA().transpose());
    MatX form(4 * n, 4 * n);
    form << h.calB(), a, a.adjoint(), -h.calB().transpose();
    const MatX moved = t_s.adjoint() * form * t_s;
    const MatX b_new = moved.topLeftCorner(m2, m2);
    const MatX a_new = moved.topRightCorner(m2, m2);
    return {target_fermions, 0.5 * (a_new - a_new.transpose()), 0.5 * (b_new + b_new.adjoint())};
}

MatX fock_operator(const BosonicBilinearH& h, const FockSpace& space)
{
    return dense_operator(bosonic_terms(h, space), space);
}

MatX fock_operator(const FermionicBilinearH& h, const FockSpace& space)
{
    return dense_operator(fermionic_terms(h, space), space);
}

EvolutionResult evolve(const FockState& state, const BosonicBilinearH& h)
{
    const FockSpace& space = *state.space();
    const auto terms = bosonic_terms(h, space);
    FockState out(state.space(), hermitian_exp_i(dense_operator(terms, space)) * state.amplitudes(),
                  state.truncation_loss());
    // number-conserving H keeps the leakage of the input; squeezing can grow it
    double leak = cutoff_leakage(state, terms);
    if (max_abs(h.A()) > 0.0)
        leak = std::max(leak, cutoff_leakage(out, terms));
    return {std::move(out), leak, leak > kTruncationFlag};
}

EvolutionResult evolve(const FockState& state, const FermionicBilinearH& h)
{
    const MatX op = fock_operator(h, *state.space());
    return {FockState(state.space(), hermitian_exp_i(op) * state.amplitudes(), state.truncation_loss()), 0.0, false};
}

BogoliubovMap mode_overlap_map(const MatX& gf, const MatX& fg, std::vector<ModeLabel> source,
                               std::vector<ModeLabel> target)
{
    BogoliubovMap map{std::move(source), std::move(target), gf, -fg, Statistics::bosonic};
    if (gf.rows() != fg.rows() || gf.cols() != fg.cols())
        throw ValidationError("overlap matrices must have the same shape");
    try {
        map.require_canonical(1e-8);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("invalid overlap: completeness relation fails (") + e.what() + ")");
    }
    return map;
}

double energy(const FockState& state, const BosonicBilinearH& h)
{
    return expectation(state, fock_operator(h, *state.space())).real();
}

}  // namespace relqi
