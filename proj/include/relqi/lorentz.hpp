#pragma once

#include <Eigen/Dense>

#include <complex>

namespace relqi
{

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat4c = Eigen::Matrix4cd;

/// Largest rapidity accepted anywhere; cosh(20) ~ 2.4e8 keeps products in range.
inline constexpr double kMaxRapidity = 20.0;

/// g = diag(1, -1, -1, -1).
const Mat4& metric();

/*!
 * Contravariant four-vector (t, x, y, z) in natural units.
 *
 * Inner products use the (+,-,-,-) signature throughout the library.
 */
class FourVector
{
public:
    FourVector() : v_(Eigen::Vector4d::Zero()) {}
    FourVector(double t, double x, double y, double z) : v_(t, x, y, z) {}
    explicit FourVector(const Eigen::Vector4d& v) : v_(v) {}

    double t() const { return v_(0); }
    double x() const { return v_(1); }
    double y() const { return v_(2); }
    double z() const { return v_(3); }
    double operator[](int mu) const { return v_(mu); }

    Vec3 spatial() const { return v_.tail<3>(); }
    const Eigen::Vector4d& components() const { return v_; }

    /// Minkowski square t^2 - |x|^2.
    double square() const { return dot(*this); }
    double dot(const FourVector& other) const
    {
        return v_(0) * other.v_(0) - v_.tail<3>().dot(other.v_.tail<3>());
    }

    FourVector operator+(const FourVector& o) const { return FourVector(Eigen::Vector4d(v_ + o.v_)); }
    FourVector operator-(const FourVector& o) const { return FourVector(Eigen::Vector4d(v_ - o.v_)); }
    FourVector operator*(double s) const { return FourVector(Eigen::Vector4d(v_ * s)); }

private:
    Eigen::Vector4d v_;
};

inline double minkowski_dot(const FourVector& a, const FourVector& b) { return a.dot(b); }

/// Complex Minkowski contraction conj(a)_mu b^mu.
cplx minkowski_dot(const Eigen::Vector4cd& a, const Eigen::Vector4cd& b);

/// On-shell momentum (sqrt(|p|^2 + m^2), p).
FourVector mass_shell(double mass, const Vec3& momentum);

/*!
 * Element of the restricted Lorentz group SO+(1,3).
 *
 * Besides the 4x4 vector representation the transform carries its lift to
 * the Dirac spinor representation, so that a rotation by 2 pi is
 * distinguishable from the identity when acting on spinors. Composition
 * multiplies both representations.
 */
class LorentzTransform
{
public:
    LorentzTransform();

    static LorentzTransform identity() { return {}; }

    /// Pure boost along a unit axis, Lambda^0_0 = cosh(rapidity).
    static LorentzTransform boost(double rapidity, const Vec3& axis);

    /// Active right-handed rotation 1 (+) R.
    static LorentzTransform rotation(double angle, const Vec3& axis);

    /// Validates a raw matrix and lifts it to the spinor representation
    /// (the lift with non-negative spinor trace branch of L*R).
    static LorentzTransform from_matrix(const Mat4& m);

    const Mat4& matrix() const { return vector_; }

    /// Dirac-representation matrix S with S^-1 gamma^mu S = Lambda^mu_nu gamma^nu.
    const Mat4c& spinor() const { return spinor_; }

    LorentzTransform inverse() const;

    /// Same matrix, spinor lift -S (the other branch of the double cover).
    LorentzTransform other_lift() const { return {vector_, Mat4c(-spinor_)}; }

    FourVector apply(const FourVector& v) const { return FourVector(Eigen::Vector4d(vector_ * v.components())); }

    bool is_pure_rotation(double tol = 1e-12) const;
    bool is_pure_boost(double tol = 1e-12) const;

    /// Infinity norm of Lambda^T g Lambda - g.
    double metric_defect() const;

    friend LorentzTransform compose(const LorentzTransform& a, const LorentzTransform& b);

private:
    LorentzTransform(const Mat4& v, const Mat4c& s) : vector_(v), spinor_(s) {}

    Mat4 vector_;
    Mat4c spinor_;
};

/// a * b: apply b first, then a.
LorentzTransform compose(const LorentzTransform& a, const LorentzTransform& b);

inline LorentzTransform operator*(const LorentzTransform& a, const LorentzTransform& b) { return compose(a, b); }

inline FourVector apply(const LorentzTransform& t, const FourVector& v) { return t.apply(v); }

/// Lambda = r2 * l * r1 with l a pure boost and r1, r2 of the form 1 (+) R.
struct BoostDecomposition
{
    LorentzTransform r2;
    LorentzTransform l;
    LorentzTransform r1;

    LorentzTransform recompose() const { return r2 * l * r1; }
};

/*!
 * Polar split Lambda = R * L, returned as {r2 = R, l = L, r1 = I}.
 *
 * L is the symmetric positive-definite factor. The spinor lift of r2 is
 * chosen so that r2 * l reproduces the spinor of Lambda exactly.
 */
BoostDecomposition decompose(const LorentzTransform& lambda);

/// Dirac-representation gamma matrices, gamma^0 = diag(1, 1, -1, -1).
const Mat4c& gamma(int mu);

/// Rapidity and unit axis of the pure-boost factor in the polar split.
struct BoostParameters
{
    double rapidity;
    Vec3 axis;
};
BoostParameters boost_parameters(const LorentzTransform& lambda);

}  // namespace relqi
