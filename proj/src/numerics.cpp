#include "eemimo/numerics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace eemimo {

void require_hermitian(const Matrix& a, double atol) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("matrix is not square: " +
                                std::to_string(a.rows()) + "x" +
                                std::to_string(a.cols()));
  }
  if (!a.allFinite()) {
    throw std::invalid_argument("matrix has non-finite entries");
  }
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double err = (a - a.adjoint()).cwiseAbs().maxCoeff();
  if (err > atol * scale) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max |A - A^H| = " << err;
    throw std::invalid_argument(msg.str());
  }
}

EigResult hermitian_eig(const Matrix& a) {
  require_hermitian(a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitianize(a));
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigendecomposition failed to converge");
  }
  const int n = static_cast<int>(a.rows());
  EigResult out;
  out.eigenvalues.resize(n);
  out.U.resize(n, n);
  // Eigen sorts ascending; flip to descending.
  for (int k = 0; k < n; ++k) {
    out.eigenvalues(k) = es.eigenvalues()(n - 1 - k);
    out.U.col(k) = es.eigenvectors().col(n - 1 - k);
  }
  return out;
}

double logdet_psd(const Matrix& a, bool base2) {
  require_hermitian(a);
  const int n = static_cast<int>(a.rows());
  // Plain complex Cholesky; failing pivots pinpoint the loss of positive
  // definiteness, which Eigen's LLT does not report.
  Matrix l = Matrix::Zero(n, n);
  double logdet = 0.0;
  for (int j = 0; j < n; ++j) {
    double d = a(j, j).real();
    for (int k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0) || !std::isfinite(d)) {
      std::ostringstream msg;
      msg << "matrix is not positive definite: pivot " << j << " = " << d;
      throw std::domain_error(msg.str());
    }
    const double root = std::sqrt(d);
    l(j, j) = root;
    logdet += 2.0 * std::log(root);
    for (int i = j + 1; i < n; ++i) {
      Complex s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / root;
    }
  }
  return base2 ? logdet / std::log(2.0) : logdet;
}

Matrix inv_sqrt_psd(const Matrix& a) {
  EigResult eig = hermitian_eig(a);
  const int n = static_cast<int>(a.rows());
  const double ev_min = eig.eigenvalues(n - 1);
  if (!(ev_min > 0.0)) {
    std::ostringstream msg;
    msg << "matrix is singular or indefinite: min eigenvalue = " << ev_min;
    throw std::domain_error(msg.str());
  }
  RealVector inv_roots = eig.eigenvalues.cwiseSqrt().cwiseInverse();
  Matrix r = eig.U * inv_roots.asDiagonal() * eig.U.adjoint();
  return hermitianize(r);
}

bool is_psd(const Matrix& a, double* min_eigenvalue) {
  EigResult eig = hermitian_eig(a);
  const int n = static_cast<int>(a.rows());
  const double ev_min = eig.eigenvalues(n - 1);
  const double ev_max_mag = eig.eigenvalues.cwiseAbs().maxCoeff();
  if (min_eigenvalue != nullptr) *min_eigenvalue = ev_min;
  return ev_min >= -kPsdEps * ev_max_mag;
}

Matrix hermitianize(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace eemimo
