#pragma once

#include "relqi/linalg.hpp"
#include "relqi/lorentz.hpp"

#include <string>
#include <vector>

namespace relqi
{

enum class FieldKind
{
    scalar,
    massive_vector,
    electromagnetic,
    dirac,
    antifermion,
};

std::string to_string(FieldKind kind);
FieldKind field_kind_from_string(const std::string& name);

/// Relative on-shell tolerance used when validating momenta.
inline constexpr double kShellTolerance = 1e-10;

/// Throws ValidationError unless k.k == m^2 within tolerance (and k^0 > 0).
void require_on_shell(const FourVector& k, double mass);

/// Complex four-vector eps^mu.
using Polarization = Eigen::Vector4cd;

enum class PolarizationKind
{
    massive_vector,
    electromagnetic,
};

struct PolarizationBasis
{
    PolarizationKind kind;
    FourVector momentum;
    std::vector<Polarization> vectors;

    /// max_j |k_mu eps_j^mu|
    double lorentz_residual() const;
    /// max_j |k . eps_j| (spatial parts)
    double coulomb_residual() const;
    /// max_jl |eps_j* . eps_l + delta_jl| (Minkowski products)
    double orthonormality_residual() const;
};

/// Rest-frame triple (x, y, z) for j = +1, 0, -1, carried to k by the pure
/// boost that takes (m, 0, 0, 0) to k.
PolarizationBasis vector_polarization_basis(const FourVector& k, double mass);

/*!
 * Transverse pair at lightlike k with zero time component.
 *
 * The first vector is the projection of a reference direction onto the
 * plane orthogonal to k: z, or x when k is parallel to z. The second is
 * khat x eps_1. For k along +z this is (x, y).
 */
PolarizationBasis em_polarization_basis(const FourVector& k);

struct GaugeFixResult
{
    std::vector<cplx> alphas;
    PolarizationBasis fixed_basis;
};

/// eps~_j = Lambda eps_j + i alpha_j k', alpha_j chosen so that k'.eps~_j = 0.
GaugeFixResult em_gauge_fix(const LorentzTransform& lambda, const FourVector& k, const PolarizationBasis& basis);

/// Which basis labels the photon polarization at the target momentum.
enum class PolarizationFrame
{
    /// Split Lambda = L R (rotation first). The target frame is the canonical
    /// basis at R k carried to Lambda k by the gauge-fixed boost L, so pure
    /// boosts act trivially and U is the rotation matrix of R.
    transported,
    /// Canonical em_polarization_basis at Lambda k. Composes exactly.
    canonical,
};

struct DiracSpinor
{
    Eigen::Vector4cd components;
    FourVector momentum;
    double mass;
    int spin_index;

    /// u^dagger gamma^0 as a row.
    Eigen::RowVector4cd bar() const;
};

/// u_j(k), j in {1, 2}.
DiracSpinor dirac_spinor(const FourVector& k, double mass, int j);

/// v_j(k) = i gamma^2 u_j(k)^*.
DiracSpinor dirac_antispinor(const FourVector& k, double mass, int j);

struct NormalizationDiagnostics
{
    /// ||raw^dagger raw - I||
    double raw_unitarity_defect = 0.0;
    /// ||M^dagger M - I|| of the final matrix
    double unitarity_defect = 0.0;
    /// raw formula prefactor denominator hit zero; raw is reported unscaled
    bool raw_singular = false;
    cplx raw_determinant{1.0, 0.0};
    /// 1/2 (1 - k.Lambda k) (Dirac kinds only)
    double reference_determinant = 0.0;
    std::string note;
};

/*!
 * Single-mode-momentum Bogoliubov block:
 * a'_j(Lambda k) = phase * sum_l matrix(j, l) a_l(k).
 */
struct ModeTransformMatrix
{
    FieldKind kind;
    MatX matrix;
    MatX raw;
    /// Dirac kinds: ubar_j(Lambda k) u_l(k) without the spinor lift.
    MatX bare_overlap;
    cplx phase{1.0, 0.0};
    FourVector source_momentum;
    FourVector target_momentum;
    NormalizationDiagnostics diagnostics;
};

/// exp(-i (Lambda k).ell)
cplx translation_phase(const LorentzTransform& lambda, const FourVector& k, const FourVector& ell);

ModeTransformMatrix scalar_bogoliubov(const LorentzTransform& lambda, const FourVector& k, const FourVector& ell);

ModeTransformMatrix vector_bogoliubov(const LorentzTransform& lambda, const FourVector& k, double mass,
                                      const FourVector& ell);

/// Contraction U_jl = -eps*_j(target) . eps~_l between explicit bases.
MatX em_overlap(const LorentzTransform& lambda, const FourVector& k, const PolarizationBasis& source,
                const PolarizationBasis& target);

/// Frame at Lambda k used by PolarizationFrame::transported.
PolarizationBasis em_transported_basis(const LorentzTransform& lambda, const FourVector& k);

ModeTransformMatrix em_bogoliubov(const LorentzTransform& lambda, const FourVector& k, const FourVector& ell,
                                  PolarizationFrame frame = PolarizationFrame::transported);

ModeTransformMatrix dirac_bogoliubov(const LorentzTransform& lambda, const FourVector& k, double mass,
                                     const FourVector& ell);

ModeTransformMatrix antifermion_bogoliubov(const LorentzTransform& lambda, const FourVector& k, double mass,
                                           const FourVector& ell);

/// Dispatch on kind; mass ignored for scalar/em.
ModeTransformMatrix field_bogoliubov(FieldKind kind, const LorentzTransform& lambda, const FourVector& k,
                                     double mass, const FourVector& ell,
                                     PolarizationFrame frame = PolarizationFrame::transported);

}  // namespace relqi
