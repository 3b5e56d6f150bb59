#pragma once

#include "relqi/bogoliubov.hpp"
#include "relqi/fock.hpp"

#include <numbers>
#include <utility>
#include <vector>

namespace relqi
{

/*!
 * H = 1/2 sum_jk (a_j^+ A_jk a_k^+ + 2 a_j^+ B_jk a_k + h.c. of the first term)
 *
 * A complex symmetric (squeezing), B Hermitian (mode mixing).
 */
class BosonicBilinearH
{
public:
    BosonicBilinearH(std::vector<ModeLabel> modes, MatX A, MatX B);

    const std::vector<ModeLabel>& modes() const { return modes_; }
    const MatX& A() const { return A_; }
    const MatX& B() const { return B_; }

    /// Single-particle generator [[B, A], [-A*, -B*]].
    MatX generator() const;

private:
    std::vector<ModeLabel> modes_;
    MatX A_;
    MatX B_;
};

/*!
 * Quadratic Hamiltonian over s = (b_1..b_N, d_1^+..d_N^+):
 *
 *   H = 1/2 sum (s^+_j cA_jk s^+_k + 2 s^+_j cB_jk s_k + h.c. of the first term)
 *
 * with cA = [[A1, C], [-C, A2]] and cB = [[B1, D], [-D, B2]].
 */
class FermionicBilinearH
{
public:
    /// General form; cB must be Hermitian. No block structure is imposed.
    FermionicBilinearH(std::vector<ModeLabel> fermion_modes, MatX calA, MatX calB);

    /// Block constructor: A1, A2, B1, B2, C, D must each be antisymmetric.
    static FermionicBilinearH from_blocks(std::vector<ModeLabel> fermion_modes, const MatX& A1, const MatX& A2,
                                          const MatX& C, const MatX& B1, const MatX& B2, const MatX& D);

    const std::vector<ModeLabel>& fermion_modes() const { return modes_; }
    /// Physical modes [b_1..b_N, d_1..d_N]; d labels mirror b labels as antifermions.
    std::vector<ModeLabel> physical_modes() const;

    const MatX& calA() const { return calA_; }
    const MatX& calB() const { return calB_; }

    /// Deviation from the block-antisymmetric layout (0 when it holds exactly).
    double block_structure_defect() const;

    /// Nambu generator over (s, s^+) using the antisymmetric part of cA.
    MatX generator() const;

private:
    std::vector<ModeLabel> modes_;
    MatX calA_;
    MatX calB_;
};

/// H = i theta (a1^+ a2 - a2^+ a1) on each coupled pair. theta = pi/4 is 50:50.
BosonicBilinearH beam_splitter(const ModeLabel& mode1, const ModeLabel& mode2,
                               double theta = std::numbers::pi / 4);
BosonicBilinearH beam_splitter(const std::vector<ModeLabel>& modes,
                               const std::vector<std::pair<std::size_t, std::size_t>>& couplings,
                               double theta = std::numbers::pi / 4);

/// The same coupling in the B1 block of a fermionic Hamiltonian.
FermionicBilinearH fermionic_beam_splitter(const std::vector<ModeLabel>& fermion_modes,
                                           const std::vector<std::pair<std::size_t, std::size_t>>& couplings,
                                           double theta = std::numbers::pi / 4);

/// e^{iH} a e^{-iH} = alpha a + beta a^+, from exp(-i generator).
BogoliubovMap heisenberg_transform(const BosonicBilinearH& h);
/// Map over physical modes [b.., d..].
BogoliubovMap heisenberg_transform(const FermionicBilinearH& h);

/// Hamiltonian whose Heisenberg map is `map` (principal logarithm).
BosonicBilinearH hamiltonian_from_map(const BogoliubovMap& map);

/*!
 * Substitute a = alpha a' + beta a'^+ into H and re-collect the bilinear
 * blocks over frame_map.target. H's modes must appear in frame_map.source.
 */
BosonicBilinearH transport_hamiltonian(const BosonicBilinearH& h, const BogoliubovMap& frame_map);
/// frame_map over physical modes; result drops the printed block constraints.
FermionicBilinearH transport_hamiltonian(const FermionicBilinearH& h, const BogoliubovMap& frame_map);

/// Dense operator of H on the state's truncated space (modes looked up by label).
MatX fock_operator(const BosonicBilinearH& h, const FockSpace& space);
MatX fock_operator(const FermionicBilinearH& h, const FockSpace& space);

struct EvolutionResult
{
    FockState state;
    /// 1 - ||psi_out||^2 / ||psi_in||^2 estimated from cutoff leakage
    double truncation_loss = 0.0;
    bool flagged = false;
};

/// Norm loss above which evolution results are flagged.
inline constexpr double kTruncationFlag = 1e-6;

/*!
 * psi -> exp(iH) psi on the truncated space, the Schroedinger counterpart of
 * the Heisenberg map e^{iH} a e^{-iH}: apply_bogoliubov(psi, heisenberg_transform(H))
 * produces the same state for number-conserving H.
 *
 * Leakage is estimated from the population reaching the cutoff under
 * evolution; values above kTruncationFlag set `flagged`.
 */
EvolutionResult evolve(const FockState& state, const BosonicBilinearH& h);
EvolutionResult evolve(const FockState& state, const FermionicBilinearH& h);

/*!
 * Map from finite overlap matrices:
 *   a_k = sum_j (g_j, f_k) b_j - (f*_k, g_j) b_j^+
 * gf(k, j) = (g_j, f_k), fg(k, j) = (f*_k, g_j). The discrete completeness
 * condition (symplectic relations) must hold within 1e-8.
 */
BogoliubovMap mode_overlap_map(const MatX& gf, const MatX& fg, std::vector<ModeLabel> source,
                               std::vector<ModeLabel> target);

/// <psi|H|psi>
double energy(const FockState& state, const BosonicBilinearH& h);

}  // namespace relqi
