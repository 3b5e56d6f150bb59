#pragma once

#include <Eigen/Dense>

namespace relqi
{

using MatX = Eigen::MatrixXcd;
using VecX = Eigen::VectorXcd;

/// Largest absolute entry.
double max_abs(const MatX& m);

/// ||M^dagger M - I||_inf (entrywise max).
double unitarity_defect(const MatX& m);

/// Closest unitary in the Frobenius sense: U from M = U P.
MatX polar_unitary(const MatX& m);

/// exp(m), scaling and squaring with Pade approximants.
MatX expm(const MatX& m);

/// Principal matrix logarithm.
MatX logm(const MatX& m);

/// exp(i t H) for Hermitian H via eigendecomposition.
MatX hermitian_exp_i(const MatX& h, double t = 1.0);

}  // namespace relqi
