#pragma once

#include <Eigen/Dense>
#include <complex>

namespace doa {

// Hermitian matrix with conjugate symmetry enforced on construction:
// the input is symmetrized A <- (A + A^H)/2 and rejected if the residual
// max|A - A^H| exceeds 1e-10 * max|A|.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const Eigen::MatrixXcd& a);

  const Eigen::MatrixXcd& matrix() const { return data_; }
  Eigen::Index order() const { return data_.rows(); }

 private:
  Eigen::MatrixXcd data_;
};

// Eigendecomposition with real eigenvalues sorted descending and matching
// orthonormal eigenvector columns.
struct EigenPair {
  Eigen::VectorXd values;
  Eigen::MatrixXcd vectors;
};

// (1/L) * sum_l y(l) y(l)^H over the columns of rows. Positive semidefinite.
HermitianMatrix sample_covariance(const Eigen::MatrixXcd& rows);

EigenPair hermitian_evd(const HermitianMatrix& a);

// All D roots (with multiplicity) of sum_k coeffs[k] z^k, degree D after
// trimming trailing coefficients below 1e-14 * max|coeff|. Companion-matrix
// eigenvalues followed by Newton polishing.
Eigen::VectorXcd poly_roots(const Eigen::VectorXcd& coeffs);

}  // namespace doa
