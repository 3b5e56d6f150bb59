#include "relqi/lorentz.hpp"

#include "relqi/errors.hpp"

#include <Eigen/Geometry>

#include <array>
#include <cmath>
#include <string>

namespace relqi
{
namespace
{

constexpr double kAxisTolerance = 1e-12;

const std::array<Eigen::Matrix2cd, 3>& pauli()
{
    static const std::array<Eigen::Matrix2cd, 3> sigma = [] {
        const cplx i{0.0, 1.0};
        std::array<Eigen::Matrix2cd, 3> s;
        s[0] << 0, 1, 1, 0;
        s[1] << 0, -i, i, 0;
        s[2] << 1, 0, 0, -1;
        return s;
    }();
    return sigma;
}

Vec3 checked_axis(const Vec3& axis)
{
    if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > kAxisTolerance)
        throw ValidationError("axis must be a unit 3-vector");
    return axis;
}

void check_rapidity(double rapidity)
{
    if (!std::isfinite(rapidity))
        throw ValidationError("rapidity must be finite");
    if (std::abs(rapidity) > kMaxRapidity)
        throw RangeError("rapidity " + std::to_string(rapidity) + " exceeds cap of "
                         + std::to_string(kMaxRapidity));
}

Mat4 boost_matrix(double rapidity, const Vec3& n)
{
    const double c = std::cosh(rapidity);
    const double s = std::sinh(rapidity);
    Mat4 m = Mat4::Identity();
    m(0, 0) = c;
    m.block<1, 3>(0, 1) = s * n.transpose();
    m.block<3, 1>(1, 0) = s * n;
    m.block<3, 3>(1, 1) += (c - 1.0) * n * n.transpose();
    return m;
}

// cosh(eta/2) + sinh(eta/2) n.alpha, alpha_i = gamma^0 gamma^i
Mat4c boost_spinor(double rapidity, const Vec3& n)
{
    Eigen::Matrix2cd ns = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 3; ++i)
        ns += n(i) * pauli()[i];
    Mat4c s = std::cosh(rapidity / 2) * Mat4c::Identity();
    s.block<2, 2>(0, 2) += std::sinh(rapidity / 2) * ns;
    s.block<2, 2>(2, 0) += std::sinh(rapidity / 2) * ns;
    return s;
}

// cos(theta/2) - i sin(theta/2) n.Sigma
Mat4c rotation_spinor(double angle, const Vec3& n)
{
    Eigen::Matrix2cd ns = Eigen::Matrix2cd::Zero();
    for (int i = 0; i < 3; ++i)
        ns += n(i) * pauli()[i];
    const cplx i{0.0, 1.0};
    Mat4c s = std::cos(angle / 2) * Mat4c::Identity();
    s.block<2, 2>(0, 0) -= i * std::sin(angle / 2) * ns;
    s.block<2, 2>(2, 2) -= i * std::sin(angle / 2) * ns;
    return s;
}

Mat3 rotation_block(const Mat4& m) { return m.block<3, 3>(1, 1); }

// Lambda = boost(eta, n) * (1 (+) R): rapidity from the first column.
struct LeftSplit
{
    double rapidity;
    Vec3 axis;
    Mat3 rotation;
};

LeftSplit left_split(const Mat4& m)
{
    const Vec3 u = m.block<3, 1>(1, 0);
    const double s = u.norm();
    LeftSplit out{std::asinh(s), Vec3::UnitZ(), Mat3::Identity()};
    if (s > 0)
        out.axis = u / s;
    const Mat4 boost_inv = boost_matrix(-out.rapidity, out.axis);
    out.rotation = rotation_block(boost_inv * m);
    return out;
}

}  // namespace

const Mat4& metric()
{
    static const Mat4 g = Eigen::Vector4d(1, -1, -1, -1).asDiagonal();
    return g;
}

cplx minkowski_dot(const Eigen::Vector4cd& a, const Eigen::Vector4cd& b)
{
    return std::conj(a(0)) * b(0) - a.tail<3>().dot(b.tail<3>());
}

FourVector mass_shell(double mass, const Vec3& momentum)
{
    if (!std::isfinite(mass) || mass < 0)
        throw ValidationError("mass must be non-negative");
    if (!momentum.allFinite())
        throw ValidationError("momentum must be finite");
    if (mass == 0 && momentum.squaredNorm() == 0)
        throw ValidationError("degenerate momentum: massless particle with zero 3-momentum");
    const double e = std::sqrt(momentum.squaredNorm() + mass * mass);
    return {e, momentum(0), momentum(1), momentum(2)};
}

LorentzTransform::LorentzTransform() : vector_(Mat4::Identity()), spinor_(Mat4c::Identity()) {}

LorentzTransform LorentzTransform::boost(double rapidity, const Vec3& axis)
{
    check_rapidity(rapidity);
    const Vec3 n = checked_axis(axis);
    return {boost_matrix(rapidity, n), boost_spinor(rapidity, n)};
}

LorentzTransform LorentzTransform::rotation(double angle, const Vec3& axis)
{
    if (!std::isfinite(angle))
        throw ValidationError("rotation angle must be finite");
    const Vec3 n = checked_axis(axis);
    Mat4 m = Mat4::Identity();
    m.block<3, 3>(1, 1) = Eigen::AngleAxisd(angle, n).toRotationMatrix();
    return {m, rotation_spinor(angle, n)};
}

LorentzTransform LorentzTransform::from_matrix(const Mat4& m)
{
    if (!m.allFinite())
        throw ValidationError("Lorentz matrix has non-finite entries");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    const double defect = (m.transpose() * metric() * m - metric()).cwiseAbs().maxCoeff();
    if (defect > 1e-10 * scale * scale)
        throw ValidationError("matrix does not preserve the Minkowski metric (defect "
                              + std::to_string(defect) + ")");
    if (m(0, 0) < 1.0 - 1e-10 * scale || m.determinant() < 0)
        throw ValidationError("matrix is not in the restricted (proper orthochronous) group");

    const LeftSplit split = left_split(m);
    check_rapidity(split.rapidity);
    const Eigen::AngleAxisd aa{Eigen::Quaterniond(split.rotation).normalized()};
    return {m, boost_spinor(split.rapidity, split.axis) * rotation_spinor(aa.angle(), aa.axis())};
}

LorentzTransform LorentzTransform::inverse() const
{
    const Mat4c& g0 = gamma(0);
    return {Mat4(metric() * vector_.transpose() * metric()), Mat4c(g0 * spinor_.adjoint() * g0)};
}

bool LorentzTransform::is_pure_rotation(double tol) const
{
    return std::abs(vector_(0, 0) - 1.0) <= tol && vector_.block<1, 3>(0, 1).cwiseAbs().maxCoeff() <= tol
           && vector_.block<3, 1>(1, 0).cwiseAbs().maxCoeff() <= tol;
}

bool LorentzTransform::is_pure_boost(double tol) const
{
    return (decompose(*this).r2.matrix() - Mat4::Identity()).cwiseAbs().maxCoeff() <= tol;
}

double LorentzTransform::metric_defect() const
{
    return (vector_.transpose() * metric() * vector_ - metric()).cwiseAbs().maxCoeff();
}

LorentzTransform compose(const LorentzTransform& a, const LorentzTransform& b)
{
    return {Mat4(a.vector_ * b.vector_), Mat4c(a.spinor_ * b.spinor_)};
}

BoostDecomposition decompose(const LorentzTransform& lambda)
{
    // boost(eta, n) * R == R * boost(eta, R^T n)
    const LeftSplit split = left_split(lambda.matrix());
    const Vec3 right_axis = split.rotation.transpose() * split.axis;
    const LorentzTransform l = LorentzTransform::boost(split.rapidity, right_axis.normalized());
    return {lambda * l.inverse(), l, LorentzTransform::identity()};
}

BoostParameters boost_parameters(const LorentzTransform& lambda)
{
    const Mat4 l = decompose(lambda).l.matrix();
    const Vec3 u = l.block<3, 1>(1, 0);
    const double s = u.norm();
    return {std::asinh(s), s > 0 ? Vec3(u / s) : Vec3::UnitZ()};
}

const Mat4c& gamma(int mu)
{
    static const std::array<Mat4c, 4> g = [] {
        std::array<Mat4c, 4> out;
        out[0] = Mat4c::Zero();
        out[0].diagonal() << 1, 1, -1, -1;
        for (int i = 0; i < 3; ++i) {
            out[i + 1] = Mat4c::Zero();
            out[i + 1].block<2, 2>(0, 2) = pauli()[i];
            out[i + 1].block<2, 2>(2, 0) = -pauli()[i];
        }
        return out;
    }();
    if (mu < 0 || mu > 3)
        throw ValidationError("gamma index out of range");
    return g[mu];
}

}  // namespace relqi
