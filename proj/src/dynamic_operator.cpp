#include "tsspec/dynamic_operator.hpp"

#include <algorithm>
#include <cmath>

namespace tsspec {

GridFunction ell_numerator(const SpectralProblem& p, const GridFunction& x) {
  const int n = p.N();
  if (!x.covers(-1, n)) throw WindowMismatch("ell needs the full window [-1, N]");
  if (x.cols() != 1 || x.rows() != p.d) throw InvalidParameter("ell expects a C^d-valued function");
  const auto& sc = *p.scale;
  GridFunction out(p.scale, 0, n - 1, p.d, 1);
  for (int k = 0; k < n; ++k) {
    const double mr = sc.mu_rho(k);
    const double ms = sc.mu_sigma(k);
    out.at(k) = -p.P_at(k) * x.at(k + 1) / (mr * ms) + p.p_tilde(k) * x.at(k) -
                p.P_at(k - 1) * x.at(k - 1) / (mr * mr);
  }
  return out;
}

GridFunction apply_ell(const SpectralProblem& p, const GridFunction& x) {
  const int n = p.N();
  const GridFunction num = ell_numerator(p, x);

  // Second route: compose delta, the P product, and nabla directly.
  GridFunction xd = delta(x);  // [-1, N-1]
  GridFunction pxd(p.scale, -1, n - 1, p.d, 1);
  for (int i = -1; i <= n - 1; ++i) pxd.at(i) = p.P_at(i) * xd.at(i);
  const GridFunction div = nabla(pxd);  // [0, N-1]

  GridFunction out(p.scale, 0, n - 1, p.d, 1);
  double gap = 0.0, scale = 0.0;
  for (int k = 0; k < n; ++k) {
    const CVector composed = -div.at(k) + p.Q_at(k) * x.at(k);
    out.at(k) = solve_linear(p.omega_at(k), CMatrix(num.at(k)));
    gap = std::max(gap, (CVector(num.at(k)) - composed).norm());
    scale = std::max(scale, std::max(num.at(k).norm(), composed.norm()));
  }
  if (gap > 1e-12 * std::max(1.0, scale)) {
    throw ToleranceFailure("apply_ell: stencil and composed evaluations disagree by " +
                           std::to_string(gap));
  }
  return out;
}

Complex inner_product(const SpectralProblem& p, const GridFunction& x, const GridFunction& y) {
  const int n = p.N();
  if (!x.covers(0, n - 1) || !y.covers(0, n - 1)) {
    throw WindowMismatch("inner_product needs both functions on [a, b]");
  }
  if (x.cols() != 1 || y.cols() != 1) throw InvalidParameter("inner_product expects vectors");
  Complex acc = 0.0;
  for (int k = 0; k < n; ++k) {
    acc += (y.at(k).adjoint() * p.omega_at(k) * x.at(k))(0, 0) * p.scale->mu_rho(k);
  }
  return acc;
}

double weighted_norm(const SpectralProblem& p, const GridFunction& x) {
  return std::sqrt(std::max(0.0, inner_product(p, x, x).real()));
}

LagrangeTerms lagrange_residual(const SpectralProblem& p, const GridFunction& x,
                                const GridFunction& y) {
  const int n = p.N();
  const auto& sc = *p.scale;
  const GridFunction lx = apply_ell(p, x);
  const GridFunction ly = apply_ell(p, y);

  LagrangeTerms out;
  const Complex a1 = inner_product(p, lx, y);
  const Complex a2 = inner_product(p, x, ly);
  out.lhs = a1 - a2;

  // [(P y^delta)* x - y* P x^delta] at b and at rho(a)
  auto boundary_form = [&](int i) {
    const CVector xd = (CVector(x.at(i + 1)) - CVector(x.at(i))) / sc.mu_sigma(i);
    const CVector yd = (CVector(y.at(i + 1)) - CVector(y.at(i))) / sc.mu_sigma(i);
    return ((p.P_at(i) * yd).adjoint() * x.at(i))(0, 0) -
           (y.at(i).adjoint() * (p.P_at(i) * xd))(0, 0);
  };
  const Complex at_b = boundary_form(n - 1);
  const Complex at_rho_a = boundary_form(-1);
  out.rhs = at_b - at_rho_a;
  out.residual = out.lhs - out.rhs;
  out.scale = std::abs(a1) + std::abs(a2) + std::abs(at_b) + std::abs(at_rho_a);
  return out;
}

GridFunction extend_to_full_window(const SpectralProblem& p, const GammaDecomposition& dec,
                                   const GridFunction& interior) {
  const int n = p.N();
  if (!interior.covers(0, n - 1)) throw WindowMismatch("extend needs interior values on [a, b]");
  const BoundaryTraceData btd = boundary_values_from_interior(
      p, dec, interior.at(0), interior.at(1), interior.at(n - 2), interior.at(n - 1));
  GridFunction full(p.scale, -1, n, p.d, 1);
  for (int k = 0; k < n; ++k) full.at(k) = interior.at(k);
  full.at(-1) = btd.x_rho_a;
  full.at(n) = btd.x_sigma_b;
  return full;
}

OperatorMatrix build_operator_matrix(const SpectralProblem& p, const AdmissibleSpace& space,
                                     double tol) {
  const int m = space.m;
  OperatorMatrix out;
  out.A = CMatrix::Zero(m, m);
  out.images.reserve(static_cast<size_t>(m));

  for (int k = 0; k < m; ++k) {
    const GridFunction image_interior = apply_ell(p, space.basis[static_cast<size_t>(k)]);
    GridFunction image = extend_to_full_window(p, space.dec, image_interior);

    // Closure: L e_k must stay inside the admissible space.
    CVector coords(m);
    for (int j = 0; j < m; ++j) {
      coords(j) = inner_product(p, image, space.basis[static_cast<size_t>(j)]);
    }
    const CVector stacked = stack_window(image, -1, p.N());
    const CVector proj = space.basis_mat * coords;
    const double resid = (stacked - proj).norm() / std::max(1.0, stacked.norm());
    out.closure_residual = std::max(out.closure_residual, resid);
    if (resid > tol) {
      throw ClosureFailure("operator image of basis vector " + std::to_string(k) +
                           " leaves the admissible space (residual " + std::to_string(resid) +
                           ")");
    }
    out.A.col(k) = coords;
    out.images.push_back(std::move(image));
  }

  out.hermiticity_defect = (out.A - out.A.adjoint()).norm() / std::max(1.0, out.A.norm());
  if (out.hermiticity_defect > tol) {
    throw NotSelfAdjoint("operator matrix hermiticity defect " +
                         std::to_string(out.hermiticity_defect));
  }
  return out;
}

}  // namespace tsspec
