#pragma once

#include "tsspec/timescale.hpp"

namespace tsspec {

/// Coefficients of a linear Hamiltonian nabla system
///   x^nabla = A(t) x + B(t) u^rho,  u^nabla = C(t) x - A*(t) u^rho,
/// with B, C Hermitian per point and I - mu_rho(t) A*(t) invertible.
struct HamiltonianSystem {
  ScaleRef scale;
  int n = 0;
  int lo = 0, hi = 0;  // coefficient window; lo >= 0 so mu_rho exists
  std::vector<CMatrix> A, B, C;

  const CMatrix& A_at(int i) const { return A[static_cast<size_t>(i - lo)]; }
  const CMatrix& B_at(int i) const { return B[static_cast<size_t>(i - lo)]; }
  const CMatrix& C_at(int i) const { return C[static_cast<size_t>(i - lo)]; }

  /// The 2n x 2n block (A, B; C, -A*) at grid index i.
  CMatrix H_at(int i) const;
};

struct SymplecticSystem {
  ScaleRef scale;
  int n2 = 0;  // block size 2n
  int lo = 0, hi = 0;
  std::vector<CMatrix> S;
  std::vector<double> symplectic_defect;  // || S*J + JS - mu_rho S*JS || per point
  double max_symplectic_defect = 0.0;
  double max_formula_gap = 0.0;  // resolvent formula vs explicit block formula

  const CMatrix& S_at(int i) const { return S[static_cast<size_t>(i - lo)]; }
};

struct HamiltonianCheck {
  bool structure_ok = false;     // H*J + JH = 0 at every point
  bool invertibility_ok = false; // I + mu_rho H M*M invertible at every point
  double max_structure_defect = 0.0;
  int first_bad_index = 0;  // meaningful when a check fails
  bool ok() const { return structure_ok && invertibility_ok; }
};

/// Checks the Hamiltonian structure condition and the resolvent
/// invertibility condition for per-point 2n x 2n blocks H on [lo, lo+count).
HamiltonianCheck hamiltonian_check(const std::vector<CMatrix>& H_blocks,
                                   const IsolatedTimeScale& scale, int lo,
                                   double tol = kDefaultTol);

/// Conversion of a Hamiltonian nabla system to the symplectic form
/// z^nabla = S(t) z via S = (I + mu_rho H M*M)^{-1} H, cross-checked against
/// the explicit block formula, with the symplectic identity verified at
/// every point. Throws Singular (reporting the grid point) when the
/// invertibility condition fails.
SymplecticSystem hamiltonian_to_symplectic(const HamiltonianSystem& h, double tol = kDefaultTol);

struct ZSystemResult {
  GridFunction Z;             // (X; P X^delta)
  std::vector<CMatrix> S;     // per point on [res_lo, res_hi]
  int res_lo = 0, res_hi = 0;
  std::vector<double> residuals;  // || Z^nabla - S Z || per point
  double max_residual = 0.0;
};

/// The second-order matrix equation -(P X^delta)^nabla + Q X = 0 recast as
/// the first-order system Z^nabla = S(t) Z with Z = (X; P X^delta) and
/// S = (-mu_rho P^{rho-1} Q, P^{rho-1}; Q, 0). Residuals vanish exactly when
/// X solves the equation at the corresponding points.
ZSystemResult second_order_to_z_system(const GridFunction& P, const GridFunction& Q,
                                       const GridFunction& X);

/// Forward recursion producing an exact solution of
/// -(P X^delta)^nabla + Q X = 0 on the full window from initial values at
/// rho(a) and a. P must be invertible at every interior point.
GridFunction generate_second_order_solution(const GridFunction& P, const GridFunction& Q,
                                            const CMatrix& X_rho_a, const CMatrix& X_a);

/// Pseudo-derivatives y^[0], ..., y^[2n] of a scalar grid function together
/// with the Sturm-Liouville coefficients that define them.
struct PseudoDerivativeFrame {
  int order = 0;  // n
  std::vector<GridFunction> y_pseudo;  // 2n + 1 entries, tracked windows
  std::vector<GridFunction> p;         // p_0 ... p_n
};

struct SlToHamiltonianResult {
  PseudoDerivativeFrame frame;
  GridFunction x, u;          // stacked (n x 1) grid functions
  GridFunction My;            // direct evaluation of the 2n-th order operator
  int res_lo = 0, res_hi = 0;
  std::vector<double> residual_x, residual_u;  // per point
  double max_residual = 0.0;
};

/// Even-order Sturm-Liouville dynamic equation in Hamiltonian form: builds
/// the pseudo-derivatives, stacks x = (y^[0]; ...; y^[n-1]) and
/// u = (y^[2n-1]; ...; y^[n]), and verifies the nabla relations pointwise
/// (the u_1 row carries the operator value My as its source term, so the
/// residuals vanish for every y, solution or not).
SlToHamiltonianResult sturm_liouville_to_hamiltonian(const std::vector<GridFunction>& p_coeffs,
                                                     const GridFunction& y);

/// Direct evaluation of My = p_0 y + sum_{k=1..n} (-1)^k
/// (p_k y^{nabla^{k-1} delta})^{delta^{k-1} nabla}.
GridFunction sturm_liouville_operator(const std::vector<GridFunction>& p_coeffs,
                                      const GridFunction& y);

struct HamiltonianLagrange {
  Complex lhs, rhs, residual;
  double scale = 0.0;
};

/// Lagrange identity for the Hamiltonian operator
/// l(x,u) = J (x^nabla; u^nabla) - (H + lambda W)(x; u^rho) with
/// J = (0, -I; I, 0): the nabla integral of the bilinear concomitant equals
/// the boundary form (y*, v*) J (x; u) evaluated between rho(a) and b.
/// Holds for all pairs; H and W must be Hermitian per point.
HamiltonianLagrange hamiltonian_lagrange_residual(
    const std::vector<CMatrix>& H, const std::vector<CMatrix>& W, double lambda,
    const GridFunction& x, const GridFunction& u, const GridFunction& y,
    const GridFunction& v);

}  // namespace tsspec
