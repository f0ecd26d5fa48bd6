#pragma once

#include <string>
#include <vector>

#include "tsspec/timescale.hpp"

namespace tsspec {

/// A spectral problem instance: Hermitian coefficients P (on [rho(a), b]),
/// Q and omega (on [a, b]) with omega positive definite, and 2d x 2d
/// boundary matrices R, S of joint rank 2d. Interior P may be singular;
/// P at rho(a) and at b must be invertible.
struct SpectralProblem {
  ScaleRef scale;
  int d = 0;
  std::vector<CMatrix> P;      // global indices -1 .. N-1
  std::vector<CMatrix> Q;      // global indices  0 .. N-1
  std::vector<CMatrix> omega;  // global indices  0 .. N-1
  CMatrix R, S;

  int N() const { return scale->N(); }

  const CMatrix& P_at(int i) const { return P[static_cast<size_t>(i + 1)]; }
  const CMatrix& Q_at(int k) const { return Q[static_cast<size_t>(k)]; }
  const CMatrix& omega_at(int k) const { return omega[static_cast<size_t>(k)]; }

  CMatrix R1() const { return R.leftCols(d); }
  CMatrix R2() const { return R.rightCols(d); }
  CMatrix S1() const { return S.leftCols(d); }
  CMatrix S2() const { return S.rightCols(d); }

  /// P~(t) = Q(t) + P(t)/(mu_rho mu_sigma)(t) + P^rho(t)/mu_rho^2(t),
  /// the diagonal coefficient of the three-term stencil; k in [0, N-1].
  CMatrix p_tilde(int k) const;

  /// Throws InvalidParameter unless all container sizes and matrix shapes
  /// are consistent with scale and d.
  void check_shape() const;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double defect = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;  // the standing hypotheses; all mandatory
  bool bc_self_adjoint = false;     // SR* = RS*, reported but not gating
  double bc_defect = 0.0;
  double tol = kDefaultTol;

  bool pass() const;
};

/// Checks every standing hypothesis numerically; never throws on failed
/// hypotheses (failures live in the report).
ValidationReport validate(const SpectralProblem& p, double tol = kDefaultTol);

struct SelfAdjointCheck {
  bool self_adjoint = false;
  double defect = 0.0;  // ||SR* - RS*||
};

/// SR* = RS* test with defect, normalized by ||R|| ||S|| + 1.
/// Throws RankDeficient when rank(R, S) < 2d.
SelfAdjointCheck check_self_adjoint_bc(const CMatrix& R, const CMatrix& S,
                                       double tol = kDefaultTol);

/// Boundary-condition residual of x: || R(-x^rho(a); x(b)) + S(P^rho(a) x^nabla(a);
/// P(b) x^delta(b)) ||.
double boundary_condition_defect(const SpectralProblem& p, const GridFunction& x);

struct EtaCheck {
  bool ok = false;
  CVector eta;
  double residual = 0.0;
};

/// Verifies the unique-eta parametrization of boundary data for x satisfying
/// self-adjoint boundary conditions: (-x^rho(a); x(b)) = -S* eta and
/// (P^rho(a) x^nabla(a); P(b) x^delta(b)) = R* eta for exactly one eta.
/// Throws NotInBoundarySet when x violates the boundary conditions.
EtaCheck eta_parametrization_check(const SpectralProblem& p, const GridFunction& x,
                                   double tol = kDefaultTol);

// JSON problem files (schema tsspec-problem/1): complex numbers as [re, im],
// matrices as nested row-major arrays, the scale as an ascending point list.
SpectralProblem load_problem(const std::string& path);
void save_problem(const SpectralProblem& p, const std::string& path);
SpectralProblem problem_from_json_text(const std::string& text);
std::string problem_to_json_text(const SpectralProblem& p);

bool operator==(const SpectralProblem& lhs, const SpectralProblem& rhs);

}  // namespace tsspec
