#pragma once

#include "tsspec/boundary.hpp"

namespace tsspec {

/// ell x(t) = omega^{-1}(t) [-(P x^delta)^nabla(t) + Q(t) x(t)] on [a, b],
/// computed through the explicit three-term stencil and cross-checked
/// against the composed delta/nabla evaluation.
GridFunction apply_ell(const SpectralProblem& p, const GridFunction& x);

/// The omega-free numerator (-(P x^delta)^nabla + Q x) on [a, b].
GridFunction ell_numerator(const SpectralProblem& p, const GridFunction& x);

/// <x, y> = sum over [a, b] of y*(t) omega(t) x(t) mu_rho(t);
/// linear in x, conjugate-linear in y.
Complex inner_product(const SpectralProblem& p, const GridFunction& x, const GridFunction& y);

double weighted_norm(const SpectralProblem& p, const GridFunction& x);

struct LagrangeTerms {
  Complex lhs;       // <ell x, y> - <x, ell y>
  Complex rhs;       // boundary form at b minus at rho(a)
  Complex residual;  // lhs - rhs
  double scale;      // sum of the magnitudes of the four constituent terms
};

/// The Lagrange identity residual; holds for all grid functions on the full
/// window, no boundary-condition assumption.
LagrangeTerms lagrange_residual(const SpectralProblem& p, const GridFunction& x,
                                const GridFunction& y);

struct OperatorMatrix {
  CMatrix A;  // m x m representation of L in the orthonormal admissible basis
  double hermiticity_defect = 0.0;   // ||A - A*|| / max(1, ||A||)
  double closure_residual = 0.0;     // worst projection defect of L e_k
  std::vector<GridFunction> images;  // L e_k on the full window
};

/// Applies L = ell restricted to the admissible space to each basis vector,
/// assigns the boundary values of the image from its interior traces, checks
/// that the image stays in the space, and assembles A_{jk} = <L e_k, e_j>.
OperatorMatrix build_operator_matrix(const SpectralProblem& p, const AdmissibleSpace& space,
                                     double tol = kDefaultTol);

/// Extends interior values of an admissible image to the full window via the
/// boundary reconstruction (used for L e_k and for eigenfunction handling).
GridFunction extend_to_full_window(const SpectralProblem& p, const GammaDecomposition& dec,
                                   const GridFunction& interior);

}  // namespace tsspec
