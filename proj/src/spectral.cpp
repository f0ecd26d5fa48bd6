#include "tsspec/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace tsspec {

namespace {

void fix_phase(CVector& stacked, Eigen::Ref<CVector> coords) {
  Eigen::Index imax = 0;
  double best = -1.0;
  for (Eigen::Index i = 0; i < stacked.size(); ++i) {
    if (std::abs(stacked(i)) > best) {
      best = std::abs(stacked(i));
      imax = i;
    }
  }
  if (best <= 0.0) return;
  const Complex rot = std::conj(stacked(imax)) / best;
  stacked *= rot;
  coords *= rot;
}

double omega_sup(const SpectralProblem& p) {
  double w = 0.0;
  for (int k = 0; k < p.N(); ++k) w = std::max(w, p.omega_at(k).norm());
  return w;
}

}  // namespace

SpectralResult solve_spectrum(const SpectralProblem& p, double tol) {
  const ValidationReport rep = validate(p, tol);
  if (!rep.pass()) {
    std::string bad;
    for (const auto& c : rep.checks) {
      if (!c.passed) bad = c.name;
    }
    throw InvalidParameter("solve_spectrum: hypothesis check failed: " + bad);
  }
  if (!rep.bc_self_adjoint) {
    throw NotSelfAdjoint("solve_spectrum: boundary conditions are not self-adjoint (defect " +
                         std::to_string(rep.bc_defect) + ")");
  }
  const AdmissibleSpace space = build_admissible_space(p, tol);
  const OperatorMatrix op = build_operator_matrix(p, space, tol);
  return solve_spectrum(p, space, op, tol);
}

SpectralResult solve_spectrum(const SpectralProblem& p, const AdmissibleSpace& space,
                              const OperatorMatrix& op, double tol) {
  const int n = p.N();
  const int m = space.m;

  if (m == 0) {
    SpectralResult empty;
    empty.eigenvalues = RVector::Zero(0);
    empty.coeffs = CMatrix::Zero(0, 0);
    empty.op_matrix = op.A;
    empty.r = space.dec.r;
    return empty;
  }

  const HermitianEigen eig = hermitian_eigendecompose(op.A, tol);

  SpectralResult out;
  out.eigenvalues = eig.eigenvalues;
  out.coeffs = eig.eigenvectors;
  out.op_matrix = op.A;
  out.asymmetry = op.hermiticity_defect;
  out.closure_residual = op.closure_residual;
  out.r = space.dec.r;
  out.m = m;

  const double wmax = omega_sup(p);
  out.eigenfunctions.reserve(static_cast<size_t>(m));
  out.equation_residuals.resize(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) {
    CVector stacked = space.basis_mat * out.coeffs.col(j);
    fix_phase(stacked, out.coeffs.col(j));
    GridFunction xj = unstack_window(p.scale, -1, n, p.d, stacked);

    // residual of the original equation at every interior point
    const GridFunction num = ell_numerator(p, xj);
    const double lambda = out.eigenvalues(j);
    double res = 0.0;
    for (int k = 0; k < n; ++k) {
      res = std::max(res, (CVector(num.at(k)) - lambda * (p.omega_at(k) * xj.at(k))).norm());
    }
    const double scale = (1.0 + std::abs(lambda)) * std::max(1.0, wmax) *
                         std::max(1.0, xj.sup_norm());
    out.equation_residuals[static_cast<size_t>(j)] = res / scale;
    out.eigenfunctions.push_back(std::move(xj));
  }

  CMatrix gram(m, m);
  for (int j = 0; j < m; ++j) {
    for (int k = 0; k < m; ++k) {
      gram(j, k) = inner_product(p, out.eigenfunctions[static_cast<size_t>(j)],
                                 out.eigenfunctions[static_cast<size_t>(k)]);
    }
  }
  out.gram_defect = (gram - CMatrix::Identity(m, m)).cwiseAbs().maxCoeff();
  return out;
}

BruteForceOracle brute_force_oracle(const SpectralProblem& p, double tol) {
  const int n = p.N();
  const int d = p.d;
  const AdmissibleSpace space = build_admissible_space(p, tol);
  const CMatrix& Z = space.raw_basis;  // d(N+2) x m, unweighted-orthonormal
  const int m = space.m;

  // Interior slice of the stacked vectors and the mu_rho block weight.
  const CMatrix Zint = Z.middleRows(d, d * n);
  CMatrix Wmu = CMatrix::Zero(d * n, d * n);
  CMatrix W = CMatrix::Zero(d * n, d * n);
  for (int k = 0; k < n; ++k) {
    const double mr = p.scale->mu_rho(k);
    Wmu.block(d * k, d * k, d, d) = mr * CMatrix::Identity(d, d);
    W.block(d * k, d * k, d, d) = mr * p.omega_at(k);
  }

  const CMatrix K = equation_stencil_rows(p);  // dN x d(N+2)
  CMatrix A = Zint.adjoint() * Wmu * K * Z;    // m x m
  CMatrix B = Zint.adjoint() * W * Zint;

  BruteForceOracle out;
  out.pencil_dim = m;
  if (m == 0) {
    out.eigenvalues = RVector::Zero(0);
    out.gram_min_eig = std::numeric_limits<double>::infinity();
    return out;
  }
  out.asymmetry = (A - A.adjoint()).norm() / std::max(1.0, A.norm());
  A = 0.5 * (A + A.adjoint());
  B = 0.5 * (B + B.adjoint());

  Eigen::SelfAdjointEigenSolver<CMatrix> bes(B);
  out.gram_min_eig = bes.eigenvalues()(0);
  if (!(out.gram_min_eig > 0.0)) {
    throw ToleranceFailure("brute_force_oracle: weighted Gram is not positive definite");
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<CMatrix> ges(A, B);
  if (ges.info() != Eigen::Success) {
    throw ConvergenceFailure("brute_force_oracle: pencil solve failed");
  }
  out.eigenvalues = ges.eigenvalues();
  return out;
}

CVector expand(const SpectralProblem& p, const SpectralResult& result, const GridFunction& x,
               double tol) {
  const int n = p.N();
  if (!x.covers(-1, n)) throw WindowMismatch("expand needs the full window [-1, N]");
  const int m = result.m;
  CVector c(m);
  for (int j = 0; j < m; ++j) {
    c(j) = inner_product(p, x, result.eigenfunctions[static_cast<size_t>(j)]);
  }
  // Membership: the eigenfunctions are an orthonormal basis of the space, so
  // an admissible x must be reproduced everywhere, boundary points included.
  CVector recon = CVector::Zero(stack_window(x, -1, n).size());
  for (int j = 0; j < m; ++j) {
    recon += c(j) * stack_window(result.eigenfunctions[static_cast<size_t>(j)], -1, n);
  }
  const CVector stacked = stack_window(x, -1, n);
  const double resid = (stacked - recon).cwiseAbs().maxCoeff();
  if (resid > tol * std::max(1.0, stacked.cwiseAbs().maxCoeff())) {
    throw NotAdmissible("expand: x is not in the admissible space (residual " +
                        std::to_string(resid) + ")");
  }
  return c;
}

ParsevalCheck parseval_check(const SpectralProblem& p, const SpectralResult& result,
                             const GridFunction& x, double tol) {
  const CVector c = expand(p, result, x, tol);
  ParsevalCheck out;
  out.lhs = inner_product(p, x, x).real();
  out.rhs = c.squaredNorm();
  out.defect = std::abs(out.lhs - out.rhs);
  return out;
}

CMatrix SpectralResolution::E(double lambda) const {
  const Eigen::Index m = eigenvalues.size();
  CMatrix acc = CMatrix::Zero(m, m);
  if (lambda >= 0.0) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (eigenvalues(j) > 0.0 && eigenvalues(j) <= lambda) acc += pi[static_cast<size_t>(j)];
    }
  } else {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (eigenvalues(j) > lambda && eigenvalues(j) <= 0.0) acc -= pi[static_cast<size_t>(j)];
    }
  }
  return acc;
}

SpectralResolution spectral_resolution(const SpectralProblem&, const SpectralResult& result) {
  const int m = result.m;
  SpectralResolution out;
  out.eigenvalues = result.eigenvalues;

  out.pi.reserve(static_cast<size_t>(m));
  CMatrix sum_lpi = CMatrix::Zero(m, m);
  CMatrix sum_pi = CMatrix::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    const CVector v = result.coeffs.col(j);
    CMatrix pj = v * v.adjoint();
    sum_lpi += result.eigenvalues(j) * pj;
    sum_pi += pj;
    out.pi.push_back(std::move(pj));
  }
  out.reconstruction_defect = (sum_lpi - result.op_matrix).norm();
  out.completeness_defect = (sum_pi - CMatrix::Identity(m, m)).norm();

  // Group numerically coincident eigenvalues before forming eigenspace
  // projectors; the delta_jk statement is basis-independent only there.
  for (int j = 0; j < m; ++j) {
    if (!out.groups.empty() &&
        result.eigenvalues(j) - result.eigenvalues(out.groups.back().back()) <=
            1e-8 * (1.0 + std::abs(result.eigenvalues(j)))) {
      out.groups.back().push_back(j);
    } else {
      out.groups.push_back({j});
    }
  }
  for (const auto& g : out.groups) {
    CMatrix pg = CMatrix::Zero(m, m);
    double lam = 0.0;
    for (int j : g) {
      pg += out.pi[static_cast<size_t>(j)];
      lam += result.eigenvalues(j);
    }
    out.group_pi.push_back(std::move(pg));
    out.group_lambda.push_back(lam / static_cast<double>(g.size()));
  }
  for (size_t g = 0; g < out.group_pi.size(); ++g) {
    for (size_t h = 0; h < out.group_pi.size(); ++h) {
      const CMatrix prod = out.group_pi[g] * out.group_pi[h];
      const CMatrix expected = (g == h) ? out.group_pi[g] : CMatrix::Zero(m, m);
      out.projector_defect = std::max(out.projector_defect, (prod - expected).norm());
    }
  }
  return out;
}

DualOrthogonality dual_orthogonality_check(const SpectralProblem& p,
                                           const SpectralResult& result) {
  const int n = p.N();
  const int d = p.d;
  if (result.r < 2 * d) {
    throw NotProper("dual orthogonality requires proper boundary conditions (r = 2d), got r = " +
                    std::to_string(result.r));
  }
  const int dn = d * n;

  CMatrix X(dn, result.m);
  for (int j = 0; j < result.m; ++j) {
    X.col(j) = stack_window(result.eigenfunctions[static_cast<size_t>(j)], 0, n - 1);
  }
  CMatrix W = CMatrix::Zero(dn, dn);
  CMatrix Winv = CMatrix::Zero(dn, dn);
  CMatrix OmegaInv = CMatrix::Zero(dn, dn);
  bool unit_uniform = true;
  for (int k = 0; k < n; ++k) {
    const double mr = p.scale->mu_rho(k);
    if (std::abs(mr - 1.0) > 0.0) unit_uniform = false;
    W.block(d * k, d * k, d, d) = mr * p.omega_at(k);
    const CMatrix oinv = solve_linear(p.omega_at(k), CMatrix::Identity(d, d));
    OmegaInv.block(d * k, d * k, d, d) = oinv;
    Winv.block(d * k, d * k, d, d) = oinv / mr;
  }

  DualOrthogonality out;
  out.unit_uniform = unit_uniform;
  out.gram_defect = (X.adjoint() * W * X - CMatrix::Identity(dn, dn)).cwiseAbs().maxCoeff();
  const CMatrix outer = X * X.adjoint();
  out.outer_defect =
      (outer - Winv).cwiseAbs().maxCoeff() / std::max(1.0, Winv.cwiseAbs().maxCoeff());
  out.unweighted_form_defect =
      (outer - OmegaInv).cwiseAbs().maxCoeff() / std::max(1.0, OmegaInv.cwiseAbs().maxCoeff());
  out.max_defect = std::max(out.gram_defect, out.outer_defect);
  return out;
}

}  // namespace tsspec
