#pragma once

#include "relqi/bogoliubov.hpp"
#include "relqi/linalg.hpp"
#include "relqi/modes.hpp"

#include <cstddef>
#include <map>
#include <memory>
#include <vector>

namespace relqi
{

/// Default per-mode bosonic occupation cutoff.
inline constexpr int kDefaultCutoff = 4;

using Occupation = std::vector<int>;

/*!
 * Truncated occupation-number space over an ordered list of modes.
 *
 * Bosonic modes hold 0..cutoff quanta, fermionic ones 0 or 1. Basis states
 * are enumerated in mixed radix with the first mode most significant.
 * Fermionic signs follow Jordan-Wigner ordering by position in the list.
 */
class FockSpace
{
public:
    FockSpace(std::vector<ModeLabel> modes, int cutoff = kDefaultCutoff);

    std::size_t dimension() const { return dimension_; }
    std::size_t mode_count() const { return modes_.size(); }
    const std::vector<ModeLabel>& modes() const { return modes_; }
    int cutoff() const { return cutoff_; }
    int max_occupation(std::size_t mode) const { return max_occ_[mode]; }
    bool fermionic(std::size_t mode) const { return is_fermionic(modes_[mode].species); }

    Occupation occupation(std::size_t index) const;
    std::size_t index(const Occupation& occ) const;

    /// Position of a label; throws ValidationError if absent.
    std::size_t require(const ModeLabel& label) const;

private:
    std::vector<ModeLabel> modes_;
    int cutoff_;
    std::vector<int> max_occ_;
    std::vector<std::size_t> stride_;
    std::size_t dimension_;
};

using FockSpacePtr = std::shared_ptr<const FockSpace>;

class FockState
{
public:
    FockState(FockSpacePtr space, VecX amplitudes, double truncation_loss = 0.0);

    const FockSpacePtr& space() const { return space_; }
    const VecX& amplitudes() const { return amplitudes_; }
    cplx amplitude(const Occupation& occ) const { return amplitudes_(static_cast<Eigen::Index>(space_->index(occ))); }

    double norm() const { return amplitudes_.norm(); }
    FockState normalized() const;

    /// Squared norm discarded by ladder operations at the cutoff.
    double truncation_loss() const { return truncation_loss_; }
    bool truncated() const { return truncation_loss_ > 0.0; }

private:
    FockSpacePtr space_;
    VecX amplitudes_;
    double truncation_loss_;
};

FockState vacuum(const std::vector<ModeLabel>& modes, int cutoff = kDefaultCutoff);
FockState vacuum(FockSpacePtr space);

/// a^dagger on one mode. Unnormalized; cutoff overflow is recorded in truncation_loss.
FockState create(const FockState& state, std::size_t mode);
FockState create(const FockState& state, const ModeLabel& mode);

FockState annihilate(const FockState& state, std::size_t mode);
FockState annihilate(const FockState& state, const ModeLabel& mode);

/// Dense matrix of a (dagger = false) or a^dagger on the truncated space.
MatX ladder_matrix(const FockSpace& space, std::size_t mode, bool dagger);

/// coefficient * a^dagger_{c[0]} a^dagger_{c[1]} ... |0>
struct CreationTerm
{
    cplx coefficient{1.0, 0.0};
    std::vector<ModeLabel> creators;
};

using CreationPolynomial = std::vector<CreationTerm>;

/// Evaluate a creation polynomial on the vacuum of `space`.
FockState prepare(const CreationPolynomial& poly, FockSpacePtr space);

/// Basis expansion of a state as a creation polynomial.
CreationPolynomial to_polynomial(const FockState& state);

/*!
 * Rewrite each creation operator through the map,
 * a^dagger_s -> sum_t conj(alpha(s, t)) b^dagger_t,
 * and re-expand on the target vacuum. Only number-conserving maps
 * (beta == 0) are accepted: a non-zero beta changes the vacuum itself.
 */
FockState apply_bogoliubov(const CreationPolynomial& poly, const BogoliubovMap& map, int cutoff = kDefaultCutoff);
FockState apply_bogoliubov(const FockState& state, const BogoliubovMap& map);

struct DetectionStatistics
{
    std::map<Occupation, double> outcomes;

    double probability(const Occupation& pattern) const;
    double total() const;
};

/// Born-rule marginal of the occupation of the listed modes.
DetectionStatistics number_statistics(const FockState& state, const std::vector<std::size_t>& modes);

/// Each detector counts the total number of quanta in its group of modes.
DetectionStatistics detector_statistics(const FockState& state, const std::vector<std::vector<std::size_t>>& detectors);

/// max over outcomes (union of keys) of |p_a - p_b|.
double max_discrepancy(const DetectionStatistics& a, const DetectionStatistics& b);

/// Density operator over kept modes, basis ordered as a FockSpace over them.
struct ReducedState
{
    std::vector<ModeLabel> modes;
    MatX rho;

    double trace() const { return rho.trace().real(); }
    double purity() const { return (rho * rho).trace().real(); }
    /// Smallest eigenvalue of rho.
    double min_eigenvalue() const;
};

ReducedState partial_trace(const FockState& state, const std::vector<std::size_t>& keep);

/// <psi| op |psi> / <psi|psi>
cplx expectation(const FockState& state, const MatX& op);

/// Mean occupation of one mode.
double mean_occupation(const FockState& state, std::size_t mode);

}  // namespace relqi
