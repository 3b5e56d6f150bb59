#include "relqi/linalg.hpp"

#include "relqi/errors.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <complex>

namespace relqi
{

double max_abs(const MatX& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double unitarity_defect(const MatX& m)
{
    return max_abs(m.adjoint() * m - MatX::Identity(m.cols(), m.cols()));
}

MatX polar_unitary(const MatX& m)
{
    Eigen::JacobiSVD<MatX> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues().minCoeff() <= 1e-300)
        throw SingularityError("polar decomposition of a singular matrix");
    return svd.matrixU() * svd.matrixV().adjoint();
}

MatX expm(const MatX& m)
{
    return m.exp();
}

MatX logm(const MatX& m)
{
    return m.log();
}

MatX hermitian_exp_i(const MatX& h, double t)
{
    Eigen::SelfAdjointEigenSolver<MatX> es(h);
    const Eigen::VectorXcd phases =
        (std::complex<double>(0.0, t) * es.eigenvalues().cast<std::complex<double>>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace relqi
