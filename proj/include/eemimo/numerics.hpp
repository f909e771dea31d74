#pragma once

#include "eemimo/types.hpp"

namespace eemimo {

// Relative cutoff below which eigenvalues are treated as exactly zero when
// counting water-filling modes. Keeps floating-point noise from opening
// spurious modes.
inline constexpr double kRankEps = 1e-12;

// Relative PSD slack: eigenvalues >= -kPsdEps * max|eigenvalue| still count
// as nonnegative.
inline constexpr double kPsdEps = 1e-10;

struct EigResult {
  RealVector eigenvalues;  // sorted descending
  Matrix U;                // unitary, columns match eigenvalue order
};

/// Throws std::invalid_argument if A is not square or not Hermitian within
/// an absolute tolerance scaled by max(1, max|A_jk|).
void require_hermitian(const Matrix& a, double atol = 1e-12);

/// Eigendecomposition of a Hermitian matrix, eigenvalues descending.
EigResult hermitian_eig(const Matrix& a);

/// log|A| for Hermitian positive definite A via Cholesky, in base 2 when
/// base2 is set, natural log otherwise. Throws std::domain_error naming the
/// offending pivot if A is not positive definite.
double logdet_psd(const Matrix& a, bool base2 = true);

/// A^{-1/2} for Hermitian positive definite A; result R satisfies R A R = I.
Matrix inv_sqrt_psd(const Matrix& a);

/// True when all eigenvalues of Hermitian a are >= -kPsdEps * max|eig|.
bool is_psd(const Matrix& a, double* min_eigenvalue = nullptr);

/// (A + A^H)/2, used to strip accumulation noise off Hermitian aggregates.
Matrix hermitianize(const Matrix& a);

}  // namespace eemimo
