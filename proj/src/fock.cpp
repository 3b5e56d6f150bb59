#include "relqi/fock.hpp"

#include "relqi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace relqi
{

FockSpace::FockSpace(std::vector<ModeLabel> modes, int cutoff) : modes_(std::move(modes)), cutoff_(cutoff)
{
    if (cutoff < 1)
        throw ValidationError("bosonic cutoff must be at least 1");
    for (std::size_t i = 0; i < modes_.size(); ++i)
        for (std::size_t j = i + 1; j < modes_.size(); ++j)
            if (modes_[i] == modes_[j])
                throw ValidationError("duplicate mode " + describe(modes_[i]));

    max_occ_.reserve(modes_.size());
    for (const auto& m : modes_)
        max_occ_.push_back(is_fermionic(m.species) ? 1 : cutoff);

    stride_.assign(modes_.size(), 1);
    dimension_ = 1;
    for (std::size_t i = modes_.size(); i-- > 0;) {
        stride_[i] = dimension_;
        dimension_ *= static_cast<std::size_t>(max_occ_[i] + 1);
        if (dimension_ > (std::size_t{1} << 24))
            throw ValidationError("Fock space too large for dense simulation");
    }
}

Occupation FockSpace::occupation(std::size_t index) const
{
    Occupation occ(modes_.size());
    for (std::size_t i = 0; i < modes_.size(); ++i)
        occ[i] = static_cast<int>((index / stride_[i]) % static_cast<std::size_t>(max_occ_[i] + 1));
    return occ;
}

std::size_t FockSpace::index(const Occupation& occ) const
{
    if (occ.size() != modes_.size())
        throw ValidationError("occupation pattern has wrong length");
    std::size_t idx = 0;
    for (std::size_t i = 0; i < occ.size(); ++i) {
        if (occ[i] < 0 || occ[i] > max_occ_[i])
            throw ValidationError("occupation outside the truncated space");
        idx += stride_[i] * static_cast<std::size_t>(occ[i]);
    }
    return idx;
}

std::size_t FockSpace::require(const ModeLabel& label) const
{
    const int pos = find_mode(modes_, label);
    if (pos < 0)
        throw ValidationError("mode not in state: " + describe(label));
    return static_cast<std::size_t>(pos);
}

FockState::FockState(FockSpacePtr space, VecX amplitudes, double truncation_loss)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes)), truncation_loss_(truncation_loss)
{
    if (!space_ || static_cast<std::size_t>(amplitudes_.size()) != space_->dimension())
        throw ValidationError("amplitude vector does not match the Fock space dimension");
}

FockState FockState::normalized() const
{
    const double n = norm();
    if (n == 0.0)
        throw NumericalError("cannot normalize the zero vector");
    return {space_, amplitudes_ / n, truncation_loss_};
}

FockState vacuum(FockSpacePtr space)
{
    VecX amps = VecX::Zero(static_cast<Eigen::Index>(space->dimension()));
    amps(0) = 1.0;
    return {std::move(space), std::move(amps)};
}

FockState vacuum(const std::vector<ModeLabel>& modes, int cutoff)
{
    return vacuum(std::make_shared<const FockSpace>(modes, cutoff));
}

namespace
{

// (-1)^(number of occupied fermionic modes before `mode`)
int jordan_wigner_sign(const FockSpace& space, const Occupation& occ, std::size_t mode)
{
    int parity = 0;
    for (std::size_t i = 0; i < mode; ++i)
        if (space.fermionic(i))
            parity += occ[i];
    return (parity % 2 == 0) ? 1 : -1;
}

FockState ladder(const FockState& state, std::size_t mode, bool dagger)
{
    const FockSpace& space = *state.space();
    if (mode >= space.mode_count())
        throw ValidationError("mode index out of range");
    VecX out = VecX::Zero(state.amplitudes().size());
    double lost = state.truncation_loss();
    for (std::size_t b = 0; b < space.dimension(); ++b) {
        const cplx amp = state.amplitudes()(static_cast<Eigen::Index>(b));
        if (amp == cplx{0.0, 0.0})
            continue;
        Occupation occ = space.occupation(b);
        const int n = occ[mode];
        const double sign = space.fermionic(mode) ? jordan_wigner_sign(space, occ, mode) : 1.0;
        if (dagger) {
            if (n == space.max_occupation(mode)) {
                // Pauli exclusion is exact; only bosonic overflow counts as truncation.
                if (!space.fermionic(mode))
                    lost += std::norm(amp) * (n + 1);
                continue;
            }
            occ[mode] = n + 1;
            out(static_cast<Eigen::Index>(space.index(occ))) += sign * std::sqrt(double(n + 1)) * amp;
        } else {
            if (n == 0)
                continue;
            occ[mode] = n - 1;
            out(static_cast<Eigen::Index>(space.index(occ))) += sign * std::sqrt(double(n)) * amp;
        }
    }
    return {state.space(), std::move(out), lost};
}

}  // namespace

FockState create(const FockState& state, std::size_t mode) { return ladder(state, mode, true); }
FockState create(const FockState& state, const ModeLabel& mode)
{
    return ladder(state, state.space()->require(mode), true);
}
FockState annihilate(const FockState& state, std::size_t mode) { return ladder(state, mode, false); }
FockState annihilate(const FockState& state, const ModeLabel& mode)
{
    return ladder(state, state.space()->require(mode), false);
}

MatX ladder_matrix(const FockSpace& space, std::size_t mode, bool dagger)
{
    if (mode >= space.mode_count())
        throw ValidationError("mode index out of range");
    const auto dim = static_cast<Eigen::Index>(space.dimension());
    MatX op = MatX::Zero(dim, dim);
    for (std::size_t b = 0; b < space.dimension(); ++b) {
        Occupation occ = space.occupation(b);
        const int n = occ[mode];
        if (n == 0)
            continue;
        const double sign = space.fermionic(mode) ? jordan_wigner_sign(space, occ, mode) : 1.0;
        Occupation lower = occ;
        lower[mode] = n - 1;
        // a |n> = sqrt(n) |n-1>
        op(static_cast<Eigen::Index>(space.index(lower)), static_cast<Eigen::Index>(b)) = sign * std::sqrt(double(n));
    }
    return dagger ? MatX(op.adjoint()) : op;
}

FockState prepare(const CreationPolynomial& poly, FockSpacePtr space)
{
    const FockState vac = vacuum(space);
    VecX total = VecX::Zero(vac.amplitudes().size());
    double lost = 0.0;
    for (const auto& term : poly) {
        FockState s = vac;
        for (auto it = term.creators.rbegin(); it != term.creators.rend(); ++it)
            s = create(s, *it);
        total += term.coefficient * s.amplitudes();
        lost += std::norm(term.coefficient) * s.truncation_loss();
    }
    return {std::move(space), std::move(total), lost};
}

CreationPolynomial to_polynomial(const FockState& state)
{
    const FockSpace& space = *state.space();
    CreationPolynomial poly;
    for (std::size_t b = 0; b < space.dimension(); ++b) {
        const cplx amp = state.amplitudes()(static_cast<Eigen::Index>(b));
        if (amp == cplx{0.0, 0.0})
            continue;
        const Occupation occ = space.occupation(b);
        CreationTerm term;
        double factorials = 1.0;
        for (std::size_t i = 0; i < occ.size(); ++i)
            for (int q = 0; q < occ[i]; ++q) {
                term.creators.push_back(space.modes()[i]);
                factorials *= q + 1;
            }
        term.coefficient = amp / std::sqrt(factorials);
        poly.push_back(std::move(term));
    }
    return poly;
}

FockState apply_bogoliubov(const CreationPolynomial& poly, const BogoliubovMap& map, int cutoff)
{
    if (!map.number_conserving())
        throw UnsupportedMapError("map mixes creation and annihilation operators; the transformed vacuum is "
                                  "not representable by operator substitution");
    const auto space = std::make_shared<const FockSpace>(map.target, cutoff);
    const FockState vac = vacuum(space);
    VecX total = VecX::Zero(vac.amplitudes().size());
    double lost = 0.0;

    for (const auto& term : poly) {
        FockState s = vac;
        for (auto it = term.creators.rbegin(); it != term.creators.rend(); ++it) {
            const int src = find_mode(map.source, *it);
            if (src < 0)
                throw ValidationError("map does not cover mode " + describe(*it));
            VecX next = VecX::Zero(s.amplitudes().size());
            double step_loss = 0.0;
            for (Eigen::Index t = 0; t < map.alpha.cols(); ++t) {
                const cplx c = std::conj(map.alpha(src, t));
                if (c == cplx{0.0, 0.0})
                    continue;
                const FockState created = create(s, static_cast<std::size_t>(t));
                next += c * created.amplitudes();
                step_loss += std::norm(c) * (created.truncation_loss() - s.truncation_loss());
            }
            s = FockState(space, std::move(next), s.truncation_loss() + step_loss);
        }
        total += term.coefficient * s.amplitudes();
        lost += std::norm(term.coefficient) * s.truncation_loss();
    }
    return {space, std::move(total), lost};
}

FockState apply_bogoliubov(const FockState& state, const BogoliubovMap& map)
{
    return apply_bogoliubov(to_polynomial(state), map, state.space()->cutoff());
}

double DetectionStatistics::probability(const Occupation& pattern) const
{
    const auto it = outcomes.find(pattern);
    return it == outcomes.end() ? 0.0 : it->second;
}

double DetectionStatistics::total() const
{
    double sum = 0.0;
    for (const auto& [pattern, p] : outcomes)
        sum += p;
    return sum;
}

DetectionStatistics detector_statistics(const FockState& state, const std::vector<std::vector<std::size_t>>& detectors)
{
    const FockSpace& space = *state.space();
    for (const auto& group : detectors)
        for (std::size_t m : group)
            if (m >= space.mode_count())
                throw ValidationError("detector mode index out of range");
    const double norm2 = state.amplitudes().squaredNorm();
    if (norm2 == 0.0)
        throw NumericalError("statistics of the zero vector are undefined");

    DetectionStatistics stats;
    for (std::size_t b = 0; b < space.dimension(); ++b) {
        const double p = std::norm(state.amplitudes()(static_cast<Eigen::Index>(b))) / norm2;
        const Occupation occ = space.occupation(b);
        Occupation pattern(detectors.size(), 0);
        for (std::size_t d = 0; d < detectors.size(); ++d)
            for (std::size_t m : detectors[d])
                pattern[d] += occ[m];
        stats.outcomes[pattern] += p;
    }
    return stats;
}

DetectionStatistics number_statistics(const FockState& state, const std::vector<std::size_t>& modes)
{
    std::vector<std::vector<std::size_t>> detectors;
    for (std::size_t m : modes)
        detectors.push_back({m});
    return detector_statistics(state, detectors);
}

double max_discrepancy(const DetectionStatistics& a, const DetectionStatistics& b)
{
    double worst = 0.0;
    for (const auto& [pattern, p] : a.outcomes)
        worst = std::max(worst, std::abs(p - b.probability(pattern)));
    for (const auto& [pattern, p] : b.outcomes)
        worst = std::max(worst, std::abs(p - a.probability(pattern)));
    return worst;
}

double ReducedState::min_eigenvalue() const
{
    Eigen::SelfAdjointEigenSolver<MatX> es(rho);
    return es.eigenvalues().minCoeff();
}

ReducedState partial_trace(const FockState& state, const std::vector<std::size_t>& keep)
{
    const FockSpace& space = *state.space();
    const std::size_t n = space.mode_count();
    std::set<std::size_t> kept(keep.begin(), keep.end());
    if (keep.empty() || kept.size() != keep.size() || kept.size() >= n || *kept.rbegin() >= n)
        throw ValidationError("keep_modes must be a non-empty proper subset of distinct modes");

    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < n; ++i)
        if (!kept.count(i))
            rest.push_back(i);
    // new position of each original mode
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < keep.size(); ++i)
        position[keep[i]] = i;
    for (std::size_t i = 0; i < rest.size(); ++i)
        position[rest[i]] = keep.size() + i;

    std::vector<ModeLabel> kept_modes, rest_modes;
    for (std::size_t i : keep)
        kept_modes.push_back(space.modes()[i]);
    for (std::size_t i : rest)
        rest_modes.push_back(space.modes()[i]);
    const FockSpace kept_space(kept_modes, space.cutoff());
    const FockSpace rest_space(rest_modes, space.cutoff());

    MatX psi = MatX::Zero(static_cast<Eigen::Index>(kept_space.dimension()),
                          static_cast<Eigen::Index>(rest_space.dimension()));
    for (std::size_t b = 0; b < space.dimension(); ++b) {
        const cplx amp = state.amplitudes()(static_cast<Eigen::Index>(b));
        if (amp == cplx{0.0, 0.0})
            continue;
        const Occupation occ = space.occupation(b);
        // reordering sign: inversions among occupied fermionic modes
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (space.fermionic(i) && space.fermionic(j) && occ[i] && occ[j] && position[i] > position[j])
                    ++inversions;
        Occupation ko, ro;
        for (std::size_t i : keep)
            ko.push_back(occ[i]);
        for (std::size_t i : rest)
            ro.push_back(occ[i]);
        psi(static_cast<Eigen::Index>(kept_space.index(ko)), static_cast<Eigen::Index>(rest_space.index(ro))) =
            (inversions % 2 ? -1.0 : 1.0) * amp;
    }
    const double norm2 = state.amplitudes().squaredNorm();
    if (norm2 == 0.0)
        throw NumericalError("partial trace of the zero vector");
    return {kept_modes, psi * psi.adjoint() / norm2};
}

cplx expectation(const FockState& state, const MatX& op)
{
    const VecX& v = state.amplitudes();
    return v.dot(op * v) / v.squaredNorm();
}

double mean_occupation(const FockState& state, std::size_t mode)
{
    const FockSpace& space = *state.space();
    double total = 0.0;
    for (std::size_t b = 0; b < space.dimension(); ++b)
        total += std::norm(state.amplitudes()(static_cast<Eigen::Index>(b))) * space.occupation(b)[mode];
    return total / state.amplitudes().squaredNorm();
}

}  // namespace relqi
