#pragma once

#include <Eigen/Dense>
#include <complex>

#include "tsspec/errors.hpp"

namespace tsspec {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

// Relative threshold separating numerical rank from noise. Desk-scale
// problems keep genuine singular values far above it, and the rank r feeds
// the admissible-space dimension count, so the cutoff must be crisp.
inline constexpr double kRankRelTol = 1e-10;

// Default tolerance for hypothesis checks and identity residuals.
inline constexpr double kDefaultTol = 1e-9;

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and
/// orthonormal eigenvector columns.
struct HermitianEigen {
  RVector eigenvalues;
  CMatrix eigenvectors;
  double asymmetry = 0.0;  // ||A - A*||_F measured before symmetrization
};

struct SvdResult {
  CMatrix U;
  RVector singular_values;  // nonnegative, descending
  CMatrix V;
};

bool all_finite(const CMatrix& A);

/// Solves the Hermitian eigenproblem for A. The input is symmetrized to
/// (A + A*)/2 first, so the returned eigenvalues are exactly real; the
/// asymmetry of the raw input is recorded and rejected above tol * ||A||.
HermitianEigen hermitian_eigendecompose(const CMatrix& A, double tol = kDefaultTol);

SvdResult svd(const CMatrix& A);

/// Number of singular values above max(rel_tol * largest singular value,
/// abs_floor); 0 for the zero matrix. The floor matters when A was assembled
/// with cancellation and "zero" means "roundoff relative to the inputs".
Eigen::Index rank_with_tolerance(const CMatrix& A, double rel_tol = kRankRelTol,
                                 double abs_floor = 0.0);

/// Orthonormal basis of ker(A) under the standard inner product, one column
/// per kernel direction (cols(A) - rank columns).
CMatrix null_space_basis(const CMatrix& A, double rel_tol = kRankRelTol);

/// Solves A X = B for square well-conditioned A; throws Singular when the
/// condition estimate exceeds 1/kCondRelTol.
CMatrix solve_linear(const CMatrix& A, const CMatrix& B);

}  // namespace tsspec
