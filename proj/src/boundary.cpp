#include "tsspec/boundary.hpp"

#include <algorithm>
#include <cmath>

namespace tsspec {

namespace {

// X = A * B^{-1} for Hermitian invertible B, via the transposed solve.
CMatrix right_solve(const CMatrix& A, const CMatrix& B) {
  return solve_linear(B.transpose(), A.transpose()).transpose();
}

}  // namespace

CMatrix build_gamma(const SpectralProblem& p) {
  const auto& sc = *p.scale;
  CMatrix gamma(2 * p.d, 2 * p.d);
  gamma.leftCols(p.d) = right_solve(p.R1(), p.P_at(-1)) + p.S1() / sc.mu_rho(0);
  gamma.rightCols(p.d) = p.S2() / sc.mu_sigma(p.N() - 1);
  return gamma;
}

double gamma_rank_floor(const SpectralProblem& p) {
  // Gamma and its rank-defining sibling are assembled with cancellation, so
  // singular values below roundoff-relative-to-the-inputs are "zero".
  const auto& sc = *p.scale;
  const SvdResult ps = svd(p.P_at(-1));
  const double p_inv_norm = 1.0 / ps.singular_values(ps.singular_values.size() - 1);
  const double scale =
      p.R1().norm() * std::max(1.0, p_inv_norm) +
      p.S1().norm() * (1.0 + p.P_at(-1).norm()) / sc.mu_rho(0) +
      p.S2().norm() * (1.0 + p.P_at(p.N() - 1).norm()) / sc.mu_sigma(p.N() - 1);
  return kRankRelTol * scale;
}

int compute_r(const SpectralProblem& p) {
  const auto& sc = *p.scale;
  CMatrix probe(2 * p.d, 2 * p.d);
  probe.leftCols(p.d) = p.R1() + p.S1() * p.P_at(-1) / sc.mu_rho(0);
  probe.rightCols(p.d) = p.S2() / sc.mu_sigma(p.N() - 1);
  const double floor = gamma_rank_floor(p);
  const int r = static_cast<int>(rank_with_tolerance(probe, kRankRelTol, floor));
  const int r_gamma =
      static_cast<int>(rank_with_tolerance(build_gamma(p), kRankRelTol, floor));
  if (r != r_gamma) {
    throw ToleranceFailure("compute_r: rank of the defining block matrix (" +
                           std::to_string(r) + ") disagrees with rank(Gamma) (" +
                           std::to_string(r_gamma) + ")");
  }
  return r;
}

GammaDecomposition decompose_gamma(const SpectralProblem& p, double tol) {
  const auto& sc = *p.scale;
  const int n = p.N();
  const int two_d = 2 * p.d;

  GammaDecomposition dec;
  dec.Gamma = build_gamma(p);
  dec.r = compute_r(p);

  // SVD with singular values sorted ascending so the zero block leads.
  const SvdResult s = svd(dec.Gamma);
  Eigen::PermutationMatrix<Eigen::Dynamic> rev(two_d);
  for (int i = 0; i < two_d; ++i) rev.indices()(i) = two_d - 1 - i;
  dec.U = s.U * rev;
  dec.V = s.V * rev;

  const int z = two_d - dec.r;  // leading zero-block size
  const CMatrix core = dec.U.adjoint() * dec.Gamma * dec.V;
  dec.M = core.bottomRightCorner(dec.r, dec.r);
  dec.U1 = dec.U.leftCols(z);
  dec.U2 = dec.U.rightCols(dec.r);
  dec.V1 = dec.V.leftCols(z);
  dec.V2 = dec.V.rightCols(dec.r);

  CMatrix target = CMatrix::Zero(two_d, two_d);
  target.bottomRightCorner(dec.r, dec.r) = dec.M;
  dec.reduction_residual = (core - target).norm();

  const double gscale = std::max(1.0, dec.Gamma.norm());
  if (dec.reduction_residual > tol * gscale) {
    throw ToleranceFailure("decompose_gamma: off-block residual " +
                           std::to_string(dec.reduction_residual));
  }
  if ((dec.U.adjoint() * dec.U - CMatrix::Identity(two_d, two_d)).norm() > tol ||
      (dec.V.adjoint() * dec.V - CMatrix::Identity(two_d, two_d)).norm() > tol) {
    throw ToleranceFailure("decompose_gamma: U or V lost unitarity");
  }
  if ((dec.U1.adjoint() * dec.Gamma).norm() > tol * gscale) {
    throw ToleranceFailure("decompose_gamma: U1* Gamma != 0");
  }
  if (dec.r > 0) {
    const CMatrix v2_check = dec.Gamma.adjoint() * dec.U2 * solve_linear(dec.M.adjoint(), CMatrix::Identity(dec.r, dec.r));
    if ((v2_check - dec.V2).norm() > tol * std::max(1.0, v2_check.norm())) {
      throw ToleranceFailure("decompose_gamma: V2 != Gamma* U2 M^{-*}");
    }
  }

  // J = M V2* diag{mu_rho(a)^2 omega(a), mu_rho(b) mu_sigma(b) omega(b)} V2
  CMatrix D = CMatrix::Zero(two_d, two_d);
  D.topLeftCorner(p.d, p.d) = sc.mu_rho(0) * sc.mu_rho(0) * p.omega_at(0);
  D.bottomRightCorner(p.d, p.d) = sc.mu_rho(n - 1) * sc.mu_sigma(n - 1) * p.omega_at(n - 1);
  dec.J = dec.M * dec.V2.adjoint() * D * dec.V2;
  if (dec.r > 0 && rank_with_tolerance(dec.J) != dec.r) {
    throw ToleranceFailure("decompose_gamma: J is not invertible");
  }
  return dec;
}

CMatrix bc_constraint_rows(const SpectralProblem& p) {
  const auto& sc = *p.scale;
  const int n = p.N();
  const int d = p.d;
  CMatrix rows = CMatrix::Zero(2 * d, d * (n + 2));
  auto col = [d](int global_index) { return d * (global_index + 1); };

  const CMatrix S1P = p.S1() * p.P_at(-1) / sc.mu_rho(0);
  const CMatrix S2P = p.S2() * p.P_at(n - 1) / sc.mu_sigma(n - 1);
  rows.middleCols(col(-1), d) += -p.R1() - S1P;
  rows.middleCols(col(0), d) += S1P;
  rows.middleCols(col(n - 1), d) += p.R2() - S2P;
  rows.middleCols(col(n), d) += S2P;
  return rows;
}

CMatrix equation_stencil_rows(const SpectralProblem& p) {
  const auto& sc = *p.scale;
  const int n = p.N();
  const int d = p.d;
  CMatrix rows = CMatrix::Zero(d * n, d * (n + 2));
  auto col = [d](int global_index) { return d * (global_index + 1); };
  for (int k = 0; k < n; ++k) {
    const double mr = sc.mu_rho(k);
    const double ms = sc.mu_sigma(k);
    rows.block(d * k, col(k - 1), d, d) = -p.P_at(k - 1) / (mr * mr);
    rows.block(d * k, col(k), d, d) = p.p_tilde(k);
    rows.block(d * k, col(k + 1), d, d) = -p.P_at(k) / (mr * ms);
  }
  return rows;
}

CMatrix admissibility_constraints(const SpectralProblem& p, const GammaDecomposition& dec) {
  const int n = p.N();
  const int d = p.d;
  const CMatrix eq = equation_stencil_rows(p);

  // (F_a; G_b): the first equation block and the negated last one.
  CMatrix T(2 * d, d * (n + 2));
  T.topRows(d) = eq.topRows(d);
  T.bottomRows(d) = -eq.bottomRows(d);

  CMatrix weighted(2 * d, d * (n + 2));
  weighted.topRows(d) = solve_linear(p.omega_at(0), T.topRows(d));
  weighted.bottomRows(d) = solve_linear(p.omega_at(n - 1), T.bottomRows(d));
  return dec.V1.adjoint() * weighted;
}

CMatrix weight_matrix(const SpectralProblem& p) {
  const auto& sc = *p.scale;
  const int n = p.N();
  const int d = p.d;
  CMatrix W = CMatrix::Zero(d * (n + 2), d * (n + 2));
  for (int k = 0; k < n; ++k) {
    W.block(d * (k + 1), d * (k + 1), d, d) = p.omega_at(k) * sc.mu_rho(k);
  }
  return W;
}

AdmissibleSpace build_admissible_space(const SpectralProblem& p, double tol) {
  const int n = p.N();
  const int d = p.d;

  AdmissibleSpace space;
  space.dec = decompose_gamma(p, tol);

  const CMatrix bc = bc_constraint_rows(p);
  const CMatrix extra = admissibility_constraints(p, space.dec);
  CMatrix constraints(bc.rows() + extra.rows(), d * (n + 2));
  constraints.topRows(bc.rows()) = bc;
  constraints.bottomRows(extra.rows()) = extra;
  // Row scaling keeps the rank threshold meaningful when stencil rows and
  // boundary rows live on very different magnitudes.
  for (Eigen::Index i = 0; i < constraints.rows(); ++i) {
    const double nrm = constraints.row(i).norm();
    if (nrm > 0.0) constraints.row(i) /= nrm;
  }
  space.constraints = constraints;

  space.raw_basis = null_space_basis(constraints);
  const int m_expected = d * (n - 2) + space.dec.r;
  if (static_cast<int>(space.raw_basis.cols()) != m_expected) {
    throw DimensionMismatch("admissible space dimension " +
                            std::to_string(space.raw_basis.cols()) + " != d(N-2)+r = " +
                            std::to_string(m_expected));
  }
  space.m = m_expected;

  if (space.m == 0) {
    // N = 2 with r = 0: the space is trivial and every spectral statement
    // about it is vacuous, but the dimension count above still had to match.
    space.basis_mat = space.raw_basis;
    space.gram_min_eigenvalue = std::numeric_limits<double>::infinity();
    return space;
  }

  // Orthonormalize against the weighted inner product via the Gram matrix.
  const CMatrix W = weight_matrix(p);
  CMatrix gram = space.raw_basis.adjoint() * W * space.raw_basis;
  gram = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(gram);
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("build_admissible_space: Gram eigensolve failed");
  }
  space.gram_min_eigenvalue = es.eigenvalues()(0);
  if (!(space.gram_min_eigenvalue > 0.0)) {
    throw ToleranceFailure("build_admissible_space: weighted Gram matrix not positive definite");
  }
  const CMatrix scaling =
      es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
  space.basis_mat = space.raw_basis * scaling;

  space.basis.reserve(static_cast<size_t>(space.m));
  for (int j = 0; j < space.m; ++j) {
    space.basis.push_back(unstack_window(p.scale, -1, n, d, space.basis_mat.col(j)));
  }
  return space;
}

BoundaryTraceData boundary_values_from_interior(const SpectralProblem& p,
                                                const GammaDecomposition& dec,
                                                const CVector& x_a, const CVector& x_sigma_a,
                                                const CVector& x_rho_b, const CVector& x_b) {
  const auto& sc = *p.scale;
  const int n = p.N();
  const int d = p.d;
  const double mra = sc.mu_rho(0), msa = sc.mu_sigma(0);
  const double mrb = sc.mu_rho(n - 1), msb = sc.mu_sigma(n - 1);

  // g feeds f(x(a), x^sigma(a), x^rho(b), x(b)) and the first part of the
  // boundary reconstruction.
  CVector g(2 * d);
  g.head(d) = mra * mra * p.p_tilde(0) * x_a - (mra / msa) * p.P_at(0) * x_sigma_a;
  g.tail(d) = (msb / mrb) * p.P_at(n - 2) * x_rho_b - mrb * msb * p.p_tilde(n - 1) * x_b;

  // f = Gamma g - (S1 P^rho(a)/mu_rho(a), R2 - S2 P(b)/mu_sigma(b)) (x(a); x(b));
  // both subtracted blocks are 2d x d, so each product fills all of f.
  CVector f = dec.Gamma * g;
  f -= p.S1() * p.P_at(-1) * x_a / mra;
  f -= (p.R2() - p.S2() * p.P_at(n - 1) / msb) * x_b;

  BoundaryTraceData out;
  if (dec.r > 0) {
    out.gamma = solve_linear(dec.J, dec.U2.adjoint() * f);
  } else {
    out.gamma = CVector::Zero(0);
  }
  CVector v2g = dec.r > 0 ? CVector(dec.V2 * out.gamma) : CVector(CVector::Zero(2 * d));

  out.x_rho_a = solve_linear(p.P_at(-1), CMatrix(g.head(d))) -
                mra * mra * solve_linear(p.P_at(-1), CMatrix(p.omega_at(0) * v2g.head(d)));
  out.x_sigma_b = solve_linear(p.P_at(n - 1), CMatrix(-g.tail(d))) +
                  mrb * msb * solve_linear(p.P_at(n - 1), CMatrix(p.omega_at(n - 1) * v2g.tail(d)));
  return out;
}

CharacterizationResult characterization_crosscheck(const SpectralProblem& p,
                                                   const AdmissibleSpace& space,
                                                   const GridFunction& x, double tol) {
  const int n = p.N();
  if (!x.covers(-1, n)) throw WindowMismatch("characterization needs the full window [-1, N]");
  const auto& dec = space.dec;
  const auto& sc = *p.scale;

  const BoundaryTraceData btd = boundary_values_from_interior(
      p, dec, x.at(0), x.at(1), x.at(n - 2), x.at(n - 1));

  CharacterizationResult out;
  out.boundary_residual = std::max((CVector(x.at(-1)) - btd.x_rho_a).norm(),
                                   (CVector(x.at(n)) - btd.x_sigma_b).norm());
  out.extra_residual =
      (dec.U1.adjoint() * (p.S1() * p.P_at(-1) * x.at(0) / sc.mu_rho(0) + p.R2() * x.at(n - 1)))
          .norm();

  const CVector stacked = stack_window(x, -1, n);
  const CVector proj = space.raw_basis * (space.raw_basis.adjoint() * stacked);
  out.membership_residual = (stacked - proj).norm();

  double coef_scale = 1.0 + dec.Gamma.norm() + p.R.norm() + p.S.norm();
  for (int k = 0; k < n; ++k) coef_scale = std::max(coef_scale, p.p_tilde(k).norm());
  const double threshold = tol * (1.0 + x.sup_norm()) * coef_scale;

  const bool char_member =
      out.boundary_residual <= threshold && out.extra_residual <= threshold;
  const bool span_member = out.membership_residual <= threshold;
  if (char_member != span_member) {
    throw ToleranceFailure(
        "characterization_crosscheck: characterization and span membership disagree");
  }
  out.member = char_member;
  return out;
}

}  // namespace tsspec
