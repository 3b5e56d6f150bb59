#pragma once

#include "relqi/linalg.hpp"
#include "relqi/modes.hpp"

#include <vector>

namespace relqi
{

enum class Statistics
{
    bosonic,
    fermionic,
};

/*!
 * Linear map between two sets of ladder operators,
 *
 *   a_i = sum_j alpha(i, j) b_j + beta(i, j) b_j^dagger,
 *
 * with a over `source` modes and b over `target` modes. For a Heisenberg
 * interferometer map source and target coincide and a_i stands for
 * e^{iH} a_i e^{-iH}.
 */
struct BogoliubovMap
{
    std::vector<ModeLabel> source;
    std::vector<ModeLabel> target;
    MatX alpha;
    MatX beta;
    Statistics statistics = Statistics::bosonic;

    static BogoliubovMap identity(const std::vector<ModeLabel>& modes, Statistics statistics);

    /// [[alpha, beta], [conj(beta), conj(alpha)]]
    MatX nambu() const;

    /// max(||alpha alpha^+ - beta beta^+ - I||, ||alpha beta^T - beta alpha^T||)
    double symplectic_defect() const;
    /// ||T T^+ - I|| for the Nambu matrix T
    double fermionic_unitarity_defect() const;
    /// Whichever check matches `statistics`.
    double canonical_defect() const;

    bool number_conserving(double tol = 1e-12) const { return max_abs(beta) <= tol; }

    /// Throws ValidationError when the canonical relations fail beyond tol.
    void require_canonical(double tol = 1e-10) const;

    /// Apply `second` after this map: composes source -> target -> second.target.
    BogoliubovMap then(const BogoliubovMap& second) const;

    BogoliubovMap inverse() const;
};

/// Build a map from a Nambu matrix (2N x 2M).
BogoliubovMap from_nambu(const MatX& nambu, std::vector<ModeLabel> source, std::vector<ModeLabel> target,
                         Statistics statistics);

}  // namespace relqi
