#pragma once

#include "tsspec/problem.hpp"

namespace tsspec {

/// Unitary reduction of the boundary coefficient matrix Gamma to
/// diag{0, M} with the zero block leading, plus the derived blocks used by
/// the admissible-space characterization. U1, V1 hold the first 2d - r
/// columns of U, V; M is the trailing r x r block and J the r x r weighting
/// matrix M V2* diag{mu_rho(a)^2 omega(a), mu_rho(b) mu_sigma(b) omega(b)} V2.
struct GammaDecomposition {
  CMatrix Gamma;  // 2d x 2d
  int r = 0;
  CMatrix U, V;          // 2d x 2d unitary
  CMatrix M;             // r x r, invertible
  CMatrix U1, U2, V1, V2;
  CMatrix J;             // r x r, invertible
  double reduction_residual = 0.0;  // || U* Gamma V - diag{0, M} ||
};

/// Orthonormal basis of the admissible function space L^2_omega, together
/// with the raw (unweighted-orthonormal) null-space basis and the stacked
/// constraint matrix that produced it.
struct AdmissibleSpace {
  int m = 0;
  std::vector<GridFunction> basis;  // weighted-orthonormal, full window [-1, N]
  CMatrix basis_mat;                // d(N+2) x m, stacked columns of `basis`
  CMatrix raw_basis;                // d(N+2) x m, orthonormal in the standard ip
  CMatrix constraints;              // (2d + (2d - r)) x d(N+2), row-normalized
  GammaDecomposition dec;
  double gram_min_eigenvalue = 0.0;  // of the raw basis under the weighted ip
};

/// Gamma = (R1 P^{rho-1}(a) + S1/mu_rho(a), S2/mu_sigma(b)).
CMatrix build_gamma(const SpectralProblem& p);

/// Absolute singular-value floor below which Gamma's entries are roundoff
/// of the assembling data rather than structure.
double gamma_rank_floor(const SpectralProblem& p);

/// r = rank(R1 + S1 P^rho(a)/mu_rho(a), S2/mu_sigma(b)); also asserts
/// agreement with rank(Gamma).
int compute_r(const SpectralProblem& p);

GammaDecomposition decompose_gamma(const SpectralProblem& p, double tol = kDefaultTol);

/// The 2d boundary-condition rows acting on the stacked vector
/// (x(t_{-1}), ..., x(t_N)).
CMatrix bc_constraint_rows(const SpectralProblem& p);

/// The dN x d(N+2) matrix of the omega-free equation form
/// (-(P x^delta)^nabla + Q x)(t_k) over the stacked vector, one d-row block
/// per interior point.
CMatrix equation_stencil_rows(const SpectralProblem& p);

/// The 2d - r lambda-free rows V1* diag(omega^{-1}(a), omega^{-1}(b)) applied
/// to the first/last equation stencils; overlapping stencil columns merge by
/// index addition (the N = 2 case).
CMatrix admissibility_constraints(const SpectralProblem& p, const GammaDecomposition& dec);

/// Null space of the stacked boundary + admissibility constraints,
/// orthonormalized against the weighted inner product. Throws
/// DimensionMismatch when the null-space dimension is not d(N-2) + r.
AdmissibleSpace build_admissible_space(const SpectralProblem& p, double tol = kDefaultTol);

/// Diagonal weight of the inner product on stacked full-window vectors:
/// blockdiag(0, omega(t_0) mu_rho(t_0), ..., omega(t_{N-1}) mu_rho(t_{N-1}), 0).
CMatrix weight_matrix(const SpectralProblem& p);

struct BoundaryTraceData {
  CVector x_rho_a;  // reconstructed boundary value at rho(a)
  CVector x_sigma_b;
  CVector gamma;    // C^r coefficient from the characterization
};

/// Reconstructs the boundary values of an admissible function from its
/// interior traces x(a), x^sigma(a), x^rho(b), x(b).
BoundaryTraceData boundary_values_from_interior(const SpectralProblem& p,
                                                const GammaDecomposition& dec,
                                                const CVector& x_a, const CVector& x_sigma_a,
                                                const CVector& x_rho_b, const CVector& x_b);

struct CharacterizationResult {
  bool member = false;
  double boundary_residual = 0.0;   // against the reconstructed boundary values
  double extra_residual = 0.0;      // the 2d - r interior-trace conditions
  double membership_residual = 0.0; // distance to span(basis)
};

/// The trace-based membership characterization (reconstructed boundary values
/// plus the 2d - r interior conditions with gamma determined by the data),
/// cross-checked against projection onto the basis. Throws ToleranceFailure
/// if the two membership tests disagree.
CharacterizationResult characterization_crosscheck(const SpectralProblem& p,
                                                   const AdmissibleSpace& space,
                                                   const GridFunction& x,
                                                   double tol = kDefaultTol);

}  // namespace tsspec
