#include "doa/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace doa {

HermitianMatrix::HermitianMatrix(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols() || a.rows() == 0)
    throw std::invalid_argument("HermitianMatrix needs a nonempty square matrix");
  if (!a.allFinite())
    throw std::invalid_argument("HermitianMatrix entries must be finite");
  const double scale = a.cwiseAbs().maxCoeff();
  const double asym = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-10 * scale)
    throw std::invalid_argument("matrix is not Hermitian within tolerance");
  data_ = 0.5 * (a + a.adjoint().eval());
}

HermitianMatrix sample_covariance(const Eigen::MatrixXcd& rows) {
  if (rows.rows() == 0 || rows.cols() == 0)
    throw std::invalid_argument("sample_covariance: empty input");
  const double inv_l = 1.0 / static_cast<double>(rows.cols());
  return HermitianMatrix(inv_l * (rows * rows.adjoint()));
}

EigenPair hermitian_evd(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a.matrix());
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian_evd: eigensolver failed");
  const Eigen::Index n = a.order();
  EigenPair out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // SelfAdjointEigenSolver returns ascending order; flip to descending.
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

Eigen::VectorXcd poly_roots(const Eigen::VectorXcd& coeffs) {
  const double max_abs = coeffs.size() ? coeffs.cwiseAbs().maxCoeff() : 0.0;
  if (coeffs.size() == 0 || max_abs == 0.0)
    throw std::invalid_argument("poly_roots: zero polynomial");

  Eigen::Index degree = coeffs.size() - 1;
  while (degree > 0 && std::abs(coeffs(degree)) < 1e-14 * max_abs) --degree;
  if (degree == 0) throw std::invalid_argument("poly_roots: degree zero");

  const Eigen::VectorXcd c = coeffs.head(degree + 1) / coeffs(degree);
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
  for (Eigen::Index i = 1; i < degree; ++i) companion(i, i - 1) = 1.0;
  for (Eigen::Index i = 0; i < degree; ++i) companion(i, degree - 1) = -c(i);

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("poly_roots: companion eigensolver failed");
  Eigen::VectorXcd roots = solver.eigenvalues();

  // Newton polishing; a couple of steps recovers the accuracy lost in the
  // unbalanced companion form. Near a multiple root the derivative can
  // vanish between the split eigenvalues and throw the iterate into another
  // root's basin, so a step is only kept when it shrinks the residual.
  auto eval = [&](std::complex<double> z, std::complex<double>& dp) {
    std::complex<double> p = c(degree);
    dp = 0.0;
    for (Eigen::Index k = degree - 1; k >= 0; --k) {
      dp = dp * z + p;
      p = p * z + c(k);
    }
    return p;
  };
  for (Eigen::Index r = 0; r < roots.size(); ++r) {
    std::complex<double> best = roots(r);
    std::complex<double> dp;
    double best_residual = std::abs(eval(best, dp));
    std::complex<double> z = best;
    for (int it = 0; it < 3; ++it) {
      const std::complex<double> p = eval(z, dp);
      if (std::abs(dp) < 1e-300) break;
      const std::complex<double> step = p / dp;
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
      if (std::abs(step) > 0.1 * (1.0 + std::abs(z))) break;
      z -= step;
      const double residual = std::abs(eval(z, dp));
      if (residual < best_residual) {
        best_residual = residual;
        best = z;
      }
    }
    roots(r) = best;
  }
  return roots;
}

}  // namespace doa
