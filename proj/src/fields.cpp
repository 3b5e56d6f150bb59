#include "relqi/fields.hpp"

#include "relqi/errors.hpp"

#include <cmath>

namespace relqi
{
namespace
{

constexpr double kDenominatorFloor = 1e-12;
const cplx kI{0.0, 1.0};

double shell_scale(const FourVector& k) { return std::max(1.0, k.t() * k.t()); }

Polarization to_polarization(const Eigen::Vector4d& v) { return v.cast<cplx>(); }

Eigen::Vector4cd lorentz_apply(const LorentzTransform& lambda, const Polarization& eps)
{
    return lambda.matrix().cast<cplx>() * eps;
}

NormalizationDiagnostics diagnose(const MatX& raw, const MatX& final_matrix)
{
    NormalizationDiagnostics d;
    d.raw_unitarity_defect = unitarity_defect(raw);
    d.unitarity_defect = unitarity_defect(final_matrix);
    d.raw_determinant = raw.determinant();
    return d;
}

void require_lightlike(const FourVector& k)
{
    if (!k.components().allFinite() || k.spatial().norm() == 0.0)
        throw ValidationError("photon momentum must have non-zero 3-momentum");
    if (k.t() <= 0 || std::abs(k.square()) > kShellTolerance * shell_scale(k))
        throw ValidationError("photon momentum must be lightlike and future-pointing");
}

void require_massive(double mass)
{
    if (!std::isfinite(mass) || mass <= 0)
        throw ValidationError("mass must be positive");
}

// Pure boost taking (m, 0, 0, 0) to k.
LorentzTransform standard_boost(const FourVector& k, double mass)
{
    const Vec3 p = k.spatial();
    const double norm = p.norm();
    if (norm == 0.0)
        return LorentzTransform::identity();
    return LorentzTransform::boost(std::asinh(norm / mass), p / norm);
}

}  // namespace

std::string to_string(FieldKind kind)
{
    switch (kind) {
    case FieldKind::scalar: return "scalar";
    case FieldKind::massive_vector: return "vector";
    case FieldKind::electromagnetic: return "em";
    case FieldKind::dirac: return "dirac";
    case FieldKind::antifermion: return "antifermion";
    }
    return "unknown";
}

FieldKind field_kind_from_string(const std::string& name)
{
    if (name == "scalar") return FieldKind::scalar;
    if (name == "vector") return FieldKind::massive_vector;
    if (name == "em") return FieldKind::electromagnetic;
    if (name == "dirac") return FieldKind::dirac;
    if (name == "antifermion") return FieldKind::antifermion;
    throw ValidationError("unknown field kind '" + name + "'");
}

void require_on_shell(const FourVector& k, double mass)
{
    if (!k.components().allFinite())
        throw ValidationError("momentum must be finite");
    if (k.t() <= 0)
        throw ValidationError("momentum must be future-pointing");
    if (std::abs(k.square() - mass * mass) > kShellTolerance * shell_scale(k))
        throw ValidationError("momentum is off the mass shell");
}

double PolarizationBasis::lorentz_residual() const
{
    double worst = 0.0;
    const Eigen::Vector4cd kc = momentum.components().cast<cplx>();
    for (const auto& eps : vectors)
        worst = std::max(worst, std::abs(minkowski_dot(kc, eps)));
    return worst;
}

double PolarizationBasis::coulomb_residual() const
{
    double worst = 0.0;
    const Eigen::Vector3cd kc = momentum.spatial().cast<cplx>();
    for (const auto& eps : vectors)
        worst = std::max(worst, std::abs(kc.dot(eps.tail<3>())));
    return worst;
}

double PolarizationBasis::orthonormality_residual() const
{
    double worst = 0.0;
    for (std::size_t j = 0; j < vectors.size(); ++j)
        for (std::size_t l = 0; l < vectors.size(); ++l) {
            const cplx expected = (j == l) ? -1.0 : 0.0;
            worst = std::max(worst, std::abs(minkowski_dot(vectors[j], vectors[l]) - expected));
        }
    return worst;
}

PolarizationBasis vector_polarization_basis(const FourVector& k, double mass)
{
    require_massive(mass);
    require_on_shell(k, mass);
    const Mat4 b = standard_boost(k, mass).matrix();
    PolarizationBasis basis{PolarizationKind::massive_vector, k, {}};
    for (int axis = 1; axis <= 3; ++axis)
        basis.vectors.push_back(to_polarization(b.col(axis)));
    return basis;
}

PolarizationBasis em_polarization_basis(const FourVector& k)
{
    require_lightlike(k);
    const Vec3 khat = k.spatial().normalized();
    Vec3 first;
    const Vec3 a = Vec3::UnitZ().cross(khat);
    if (a.norm() < 1e-9)
        first = (Vec3::UnitX() - khat.x() * khat).normalized();
    else
        first = khat.cross(a).normalized();
    const Vec3 second = khat.cross(first).normalized();

    PolarizationBasis basis{PolarizationKind::electromagnetic, k, {}};
    basis.vectors.push_back(to_polarization(Eigen::Vector4d(0, first.x(), first.y(), first.z())));
    basis.vectors.push_back(to_polarization(Eigen::Vector4d(0, second.x(), second.y(), second.z())));
    return basis;
}

GaugeFixResult em_gauge_fix(const LorentzTransform& lambda, const FourVector& k, const PolarizationBasis& basis)
{
    require_lightlike(k);
    const FourVector kp = lambda.apply(k);
    const Eigen::Vector3cd kp3 = kp.spatial().cast<cplx>();
    const double kp2 = kp.spatial().squaredNorm();
    const Eigen::Vector4cd kp4 = kp.components().cast<cplx>();

    GaugeFixResult out{{}, PolarizationBasis{basis.kind, kp, {}}};
    for (const auto& eps : basis.vectors) {
        const Eigen::Vector4cd moved = lorentz_apply(lambda, eps);
        // k'.(Lambda eps) + i alpha |k'|^2 = 0
        const cplx i_alpha = -kp3.dot(moved.tail<3>()) / kp2;
        const cplx alpha = -kI * i_alpha;
        Eigen::Vector4cd fixed = moved + i_alpha * kp4;
        out.alphas.push_back(alpha);
        out.fixed_basis.vectors.push_back(fixed);
    }
    return out;
}

cplx translation_phase(const LorentzTransform& lambda, const FourVector& k, const FourVector& ell)
{
    const double arg = lambda.apply(k).dot(ell);
    return {std::cos(arg), -std::sin(arg)};
}

ModeTransformMatrix scalar_bogoliubov(const LorentzTransform& lambda, const FourVector& k, const FourVector& ell)
{
    const double m2 = k.square();
    if (m2 < -kShellTolerance * shell_scale(k))
        throw ValidationError("scalar momentum is spacelike");
    require_on_shell(k, std::sqrt(std::max(m2, 0.0)));
    if (m2 <= kShellTolerance * shell_scale(k) && k.spatial().norm() == 0.0)
        throw ValidationError("degenerate zero momentum");

    ModeTransformMatrix out{FieldKind::scalar, MatX::Identity(1, 1), MatX::Identity(1, 1), {},
                            translation_phase(lambda, k, ell), k, lambda.apply(k), {}};
    out.diagnostics = diagnose(out.raw, out.matrix);
    return out;
}

ModeTransformMatrix vector_bogoliubov(const LorentzTransform& lambda, const FourVector& k, double mass,
                                      const FourVector& ell)
{
    const PolarizationBasis source = vector_polarization_basis(k, mass);
    const FourVector kp = lambda.apply(k);
    const PolarizationBasis target = vector_polarization_basis(kp, mass);

    const double denominator = k.dot(kp);
    if (std::abs(denominator) < kDenominatorFloor)
        throw SingularityError("k.Lambda k vanishes in the spin-1 normalization");

    MatX raw(3, 3);
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
            raw(j, l) = -mass * mass
                        * minkowski_dot(target.vectors[j], lorentz_apply(lambda, source.vectors[l]))
                        / denominator;

    ModeTransformMatrix out{FieldKind::massive_vector, polar_unitary(raw), raw, {},
                            translation_phase(lambda, k, ell), k, kp, {}};
    out.diagnostics = diagnose(raw, out.matrix);
    return out;
}

MatX em_overlap(const LorentzTransform& lambda, const FourVector& k, const PolarizationBasis& source,
                const PolarizationBasis& target)
{
    const GaugeFixResult fixed = em_gauge_fix(lambda, k, source);
    const auto n = static_cast<Eigen::Index>(target.vectors.size());
    const auto m = static_cast<Eigen::Index>(fixed.fixed_basis.vectors.size());
    MatX u(n, m);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index l = 0; l < m; ++l)
            u(j, l) = -minkowski_dot(target.vectors[j], fixed.fixed_basis.vectors[l]);
    return u;
}

PolarizationBasis em_transported_basis(const LorentzTransform& lambda, const FourVector& k)
{
    // Lambda = (R l R^-1) R: rotate first, then boost.
    const BoostDecomposition parts = decompose(lambda);
    const LorentzTransform& rot = parts.r2;
    const LorentzTransform boost = lambda * rot.inverse();
    const FourVector rotated = rot.apply(k);
    return em_gauge_fix(boost, rotated, em_polarization_basis(rotated)).fixed_basis;
}

ModeTransformMatrix em_bogoliubov(const LorentzTransform& lambda, const FourVector& k, const FourVector& ell,
                                  PolarizationFrame frame)
{
    const PolarizationBasis source = em_polarization_basis(k);
    const FourVector kp = lambda.apply(k);
    const PolarizationBasis target = frame == PolarizationFrame::canonical ? em_polarization_basis(kp)
                                                                           : em_transported_basis(lambda, k);
    const MatX raw = em_overlap(lambda, k, source, target);
    ModeTransformMatrix out{FieldKind::electromagnetic, polar_unitary(raw), raw, {},
                            translation_phase(lambda, k, ell), k, kp, {}};
    out.diagnostics = diagnose(raw, out.matrix);
    return out;
}

DiracSpinor dirac_spinor(const FourVector& k, double mass, int j)
{
    require_massive(mass);
    require_on_shell(k, mass);
    if (j != 1 && j != 2)
        throw ValidationError("spin index must be 1 or 2");
    const double e = std::sqrt(k.spatial().squaredNorm() + mass * mass);
    const double norm = std::sqrt((e + mass) / (2 * mass));
    const double d = e + mass;
    Eigen::Vector4cd u;
    if (j == 1)
        u << 1.0, 0.0, k.z() / d, cplx(k.x(), k.y()) / d;
    else
        u << 0.0, 1.0, cplx(k.x(), -k.y()) / d, -k.z() / d;
    return {norm * u, k, mass, j};
}

DiracSpinor dirac_antispinor(const FourVector& k, double mass, int j)
{
    DiracSpinor u = dirac_spinor(k, mass, j);
    u.components = kI * gamma(2) * u.components.conjugate();
    return u;
}

Eigen::RowVector4cd DiracSpinor::bar() const
{
    return components.adjoint() * gamma(0);
}

namespace
{

// Shared Dirac path; `anti` selects v-spinors.
ModeTransformMatrix spinor_bogoliubov(const LorentzTransform& lambda, const FourVector& k, double mass,
                                      const FourVector& ell, bool anti)
{
    require_massive(mass);
    require_on_shell(k, mass);
    const FourVector kp = lambda.apply(k);
    auto spinor = anti ? dirac_antispinor : dirac_spinor;

    MatX lifted(2, 2);
    MatX bare(2, 2);
    for (int j = 1; j <= 2; ++j)
        for (int l = 1; l <= 2; ++l) {
            const auto target = spinor(kp, mass, j).bar();
            const auto source = spinor(k, mass, l).components;
            cplx c = (target * lambda.spinor() * source).value();
            cplx b = (target * source).value();
            if (anti) {
                // d'_j = sum_l conj(-vbar_j S v_l) d_l
                c = std::conj(-c);
                b = std::conj(-b);
            }
            lifted(j - 1, l - 1) = c;
            bare(j - 1, l - 1) = b;
        }

    const double denominator = 1.0 - k.dot(kp);
    ModeTransformMatrix out{anti ? FieldKind::antifermion : FieldKind::dirac, polar_unitary(lifted), lifted,
                            bare, translation_phase(lambda, k, ell), k, kp, {}};
    const bool singular = std::abs(denominator) < kDenominatorFloor;
    if (!singular)
        out.raw = 2.0 * lifted / denominator;
    out.diagnostics = diagnose(out.raw, out.matrix);
    out.diagnostics.raw_singular = singular;
    out.diagnostics.reference_determinant = 0.5 * denominator;
    if (singular)
        out.diagnostics.note = "1 - k.Lambda k vanishes; raw matrix reported without the 2/(1 - k.Lambda k) factor";
    return out;
}

}  // namespace

ModeTransformMatrix dirac_bogoliubov(const LorentzTransform& lambda, const FourVector& k, double mass,
                                     const FourVector& ell)
{
    return spinor_bogoliubov(lambda, k, mass, ell, false);
}

ModeTransformMatrix antifermion_bogoliubov(const LorentzTransform& lambda, const FourVector& k, double mass,
                                           const FourVector& ell)
{
    return spinor_bogoliubov(lambda, k, mass, ell, true);
}

ModeTransformMatrix field_bogoliubov(FieldKind kind, const LorentzTransform& lambda, const FourVector& k,
                                     double mass, const FourVector& ell, PolarizationFrame frame)
{
    switch (kind) {
    case FieldKind::scalar: return scalar_bogoliubov(lambda, k, ell);
    case FieldKind::massive_vector: return vector_bogoliubov(lambda, k, mass, ell);
    case FieldKind::electromagnetic: return em_bogoliubov(lambda, k, ell, frame);
    case FieldKind::dirac: return dirac_bogoliubov(lambda, k, mass, ell);
    case FieldKind::antifermion: return antifermion_bogoliubov(lambda, k, mass, ell);
    }
    throw ValidationError("unknown field kind");
}

}  // namespace relqi
