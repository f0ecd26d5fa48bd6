#pragma once

#include <functional>

#include "tsspec/dynamic_operator.hpp"

namespace tsspec {

struct SpectralResult {
  RVector eigenvalues;  // m real eigenvalues, ascending
  std::vector<GridFunction> eigenfunctions;  // full window [-1, N], phase-fixed
  CMatrix coeffs;      // m x m: column j = coordinates of x_j in the admissible basis
  CMatrix op_matrix;   // the operator matrix the eigenvalues came from
  std::vector<double> equation_residuals;  // per pair, relative to (1+|l|)*||omega||*||x||
  double gram_defect = 0.0;   // max | <x_j, x_k> - delta_jk |
  double asymmetry = 0.0;     // hermiticity defect of the operator matrix
  double closure_residual = 0.0;
  int r = 0;
  int m = 0;
};

/// Full pipeline: admissible space, operator matrix, Hermitian eigensolve,
/// grid eigenfunctions with reconstructed boundary values, residual
/// diagnostics. Requires self-adjoint boundary conditions.
SpectralResult solve_spectrum(const SpectralProblem& p, double tol = kDefaultTol);
SpectralResult solve_spectrum(const SpectralProblem& p, const AdmissibleSpace& space,
                              const OperatorMatrix& op, double tol = kDefaultTol);

struct BruteForceOracle {
  RVector eigenvalues;        // ascending
  int pencil_dim = 0;         // m
  double gram_min_eig = 0.0;  // smallest eigenvalue of the weighted Gram B'
  double asymmetry = 0.0;     // hermiticity defect of the projected pencil A'
};

/// Independent verification path: the full d(N+2)-dimensional equation
/// stencil restricted to the (unweighted-orthonormal) admissible null-space
/// basis, solved as a generalized Hermitian-definite pencil A' v = l B' v.
BruteForceOracle brute_force_oracle(const SpectralProblem& p, double tol = kDefaultTol);

/// Expansion coefficients c_j = <x, x_j> of an admissible x; the
/// reconstruction must reproduce x on the full window. Throws NotAdmissible.
CVector expand(const SpectralProblem& p, const SpectralResult& result, const GridFunction& x,
               double tol = kDefaultTol);

struct ParsevalCheck {
  double lhs = 0.0;     // <x, x>
  double rhs = 0.0;     // sum |c_j|^2
  double defect = 0.0;  // |lhs - rhs|
};

ParsevalCheck parseval_check(const SpectralProblem& p, const SpectralResult& result,
                             const GridFunction& x, double tol = kDefaultTol);

/// Spectral resolution of L: rank-one projectors in basis coordinates,
/// eigenspace projectors after degenerate grouping, and the two-branch step
/// function E_lambda.
struct SpectralResolution {
  RVector eigenvalues;
  std::vector<CMatrix> pi;                // m rank-one projectors
  std::vector<std::vector<int>> groups;   // indices per distinct eigenvalue
  std::vector<CMatrix> group_pi;
  std::vector<double> group_lambda;
  double reconstruction_defect = 0.0;  // || sum l_j pi_j - A ||
  double completeness_defect = 0.0;    // || sum pi_j - I ||
  double projector_defect = 0.0;       // max || pi_g pi_h - delta pi_g || over groups

  /// E_lambda: sum of pi_j over 0 < l_j <= lambda for lambda >= 0, and
  /// minus the sum over lambda < l_j <= 0 for lambda < 0.
  CMatrix E(double lambda) const;
};

SpectralResolution spectral_resolution(const SpectralProblem& p, const SpectralResult& result);

struct DualOrthogonality {
  double gram_defect = 0.0;       // || X* W X - I ||_max
  double outer_defect = 0.0;      // || X X* - W^{-1} ||_max
  double unweighted_form_defect = 0.0; // graininess-free form; exact only when mu_rho == 1
  bool unit_uniform = false;
  double max_defect = 0.0;        // max of the two contractual defects
};

/// Proper case r = 2d only (throws NotProper otherwise): the square matrix
/// of eigenfunctions restricted to [a, b] is unitary for the weight
/// W = blockdiag(omega(t) mu_rho(t)), so eigenfunction outer products
/// resolve W^{-1}.
DualOrthogonality dual_orthogonality_check(const SpectralProblem& p,
                                           const SpectralResult& result);

}  // namespace tsspec
