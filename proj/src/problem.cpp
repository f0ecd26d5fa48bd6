#include "tsspec/problem.hpp"

#include <algorithm>
#include <cmath>

namespace tsspec {

CMatrix SpectralProblem::p_tilde(int k) const {
  const auto& sc = *scale;
  return Q_at(k) + P_at(k) / (sc.mu_rho(k) * sc.mu_sigma(k)) +
         P_at(k - 1) / (sc.mu_rho(k) * sc.mu_rho(k));
}

void SpectralProblem::check_shape() const {
  if (!scale) throw InvalidParameter("problem has no scale");
  const int n = N();
  if (d <= 0) throw InvalidParameter("problem dimension d must be positive");
  if (static_cast<int>(P.size()) != n + 1) {
    throw InvalidParameter("P must have N+1 entries (indices -1..N-1)");
  }
  if (static_cast<int>(Q.size()) != n || static_cast<int>(omega.size()) != n) {
    throw InvalidParameter("Q and omega must have N entries (indices 0..N-1)");
  }
  auto check_mat = [this](const CMatrix& m, const char* what) {
    if (m.rows() != d || m.cols() != d) {
      throw InvalidParameter(std::string(what) + " has wrong shape");
    }
  };
  for (const auto& m : P) check_mat(m, "P entry");
  for (const auto& m : Q) check_mat(m, "Q entry");
  for (const auto& m : omega) check_mat(m, "omega entry");
  if (R.rows() != 2 * d || R.cols() != 2 * d || S.rows() != 2 * d || S.cols() != 2 * d) {
    throw InvalidParameter("R and S must be 2d x 2d");
  }
}

bool ValidationReport::pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

namespace {

double hermiticity_defect(const CMatrix& A) {
  return (A - A.adjoint()).norm() / std::max(1.0, A.norm());
}

}  // namespace

ValidationReport validate(const SpectralProblem& p, double tol) {
  p.check_shape();
  ValidationReport rep;
  rep.tol = tol;
  const int n = p.N();

  {
    CheckResult c{"finite_entries", true, 0.0, ""};
    auto scan = [&c](const CMatrix& m, const std::string& what) {
      if (!all_finite(m)) {
        c.passed = false;
        if (c.detail.empty()) c.detail = what;
      }
    };
    for (int i = -1; i <= n - 1; ++i) scan(p.P_at(i), "P[" + std::to_string(i) + "]");
    for (int k = 0; k <= n - 1; ++k) {
      scan(p.Q_at(k), "Q[" + std::to_string(k) + "]");
      scan(p.omega_at(k), "omega[" + std::to_string(k) + "]");
    }
    scan(p.R, "R");
    scan(p.S, "S");
    rep.checks.push_back(std::move(c));
  }

  {
    CheckResult c{"hermitian_coefficients", true, 0.0, ""};
    auto scan = [&](const CMatrix& m, const std::string& what) {
      const double dft = hermiticity_defect(m);
      if (dft > c.defect) c.defect = dft;
      if (dft > tol && c.passed) {
        c.passed = false;
        c.detail = what;
      }
    };
    for (int i = -1; i <= n - 1; ++i) scan(p.P_at(i), "P[" + std::to_string(i) + "]");
    for (int k = 0; k <= n - 1; ++k) {
      scan(p.Q_at(k), "Q[" + std::to_string(k) + "]");
      scan(p.omega_at(k), "omega[" + std::to_string(k) + "]");
    }
    rep.checks.push_back(std::move(c));
  }

  {
    // omega(t) > 0: smallest eigenvalue over all interior points
    CheckResult c{"omega_positive_definite", true, 0.0, ""};
    double min_eig = std::numeric_limits<double>::infinity();
    std::string where;
    for (int k = 0; k <= n - 1; ++k) {
      const CMatrix sym = 0.5 * (p.omega_at(k) + p.omega_at(k).adjoint());
      Eigen::SelfAdjointEigenSolver<CMatrix> es(sym);
      if (es.eigenvalues()(0) < min_eig) {
        min_eig = es.eigenvalues()(0);
        where = "omega[" + std::to_string(k) + "]";
      }
    }
    c.defect = min_eig;
    c.passed = min_eig > 0.0;
    if (!c.passed) c.detail = where;
    rep.checks.push_back(std::move(c));
  }

  {
    CheckResult c{"endpoint_P_invertible", true, 0.0, ""};
    auto smin = [](const CMatrix& m) {
      const SvdResult s = svd(m);
      return s.singular_values(s.singular_values.size() - 1) /
             std::max(1.0, s.singular_values(0));
    };
    const double sa = smin(p.P_at(-1));
    const double sb = smin(p.P_at(n - 1));
    c.defect = std::min(sa, sb);
    if (sa <= tol) {
      c.passed = false;
      c.detail = "P^rho(a)";
    } else if (sb <= tol) {
      c.passed = false;
      c.detail = "P(b)";
    }
    rep.checks.push_back(std::move(c));
  }

  {
    // rank(R, S) on the 2d x 4d horizontal concatenation
    CheckResult c{"rank_RS", true, 0.0, ""};
    CMatrix RS(2 * p.d, 4 * p.d);
    RS << p.R, p.S;
    const auto r = rank_with_tolerance(RS);
    c.defect = static_cast<double>(r);
    c.passed = (r == 2 * p.d);
    if (!c.passed) c.detail = "rank " + std::to_string(r) + " < " + std::to_string(2 * p.d);
    rep.checks.push_back(std::move(c));
  }

  {
    const CMatrix diff = p.S * p.R.adjoint() - p.R * p.S.adjoint();
    rep.bc_defect = diff.norm();
    rep.bc_self_adjoint = rep.bc_defect <= tol * (p.R.norm() * p.S.norm() + 1.0);
  }

  return rep;
}

SelfAdjointCheck check_self_adjoint_bc(const CMatrix& R, const CMatrix& S, double tol) {
  if (R.rows() != S.rows() || R.cols() != S.cols() || R.rows() != R.cols() ||
      R.rows() % 2 != 0) {
    throw InvalidParameter("check_self_adjoint_bc: R and S must be 2d x 2d");
  }
  CMatrix RS(R.rows(), R.cols() + S.cols());
  RS << R, S;
  if (rank_with_tolerance(RS) != R.rows()) {
    throw RankDeficient("check_self_adjoint_bc: rank(R, S) < 2d");
  }
  SelfAdjointCheck out;
  out.defect = (S * R.adjoint() - R * S.adjoint()).norm();
  out.self_adjoint = out.defect <= tol * (R.norm() * S.norm() + 1.0);
  return out;
}

double boundary_condition_defect(const SpectralProblem& p, const GridFunction& x) {
  const int n = p.N();
  if (!x.covers(-1, n)) throw WindowMismatch("boundary data needs the full window [-1, N]");
  const auto& sc = *p.scale;
  CVector bv(2 * p.d);
  bv.head(p.d) = -x.at(-1);
  bv.tail(p.d) = x.at(n - 1);
  CVector dv(2 * p.d);
  dv.head(p.d) = p.P_at(-1) * (x.at(0) - x.at(-1)) / sc.mu_rho(0);
  dv.tail(p.d) = p.P_at(n - 1) * (x.at(n) - x.at(n - 1)) / sc.mu_sigma(n - 1);
  return (p.R * bv + p.S * dv).norm();
}

EtaCheck eta_parametrization_check(const SpectralProblem& p, const GridFunction& x,
                                   double tol) {
  const int n = p.N();
  const auto& sc = *p.scale;
  const double xs = std::max(1.0, x.sup_norm());
  if (boundary_condition_defect(p, x) > tol * (p.R.norm() + p.S.norm() + 1.0) * xs) {
    throw NotInBoundarySet("eta_parametrization_check: x violates the boundary conditions");
  }

  // Stack (-x^rho(a); x(b)) = -S* eta over (P^rho(a) x^nabla(a); P(b) x^delta(b)) = R* eta.
  CMatrix lhs(4 * p.d, 2 * p.d);
  lhs.topRows(2 * p.d) = -p.S.adjoint();
  lhs.bottomRows(2 * p.d) = p.R.adjoint();
  CVector rhs(4 * p.d);
  rhs.segment(0, p.d) = -x.at(-1);
  rhs.segment(p.d, p.d) = x.at(n - 1);
  rhs.segment(2 * p.d, p.d) = p.P_at(-1) * (x.at(0) - x.at(-1)) / sc.mu_rho(0);
  rhs.segment(3 * p.d, p.d) = p.P_at(n - 1) * (x.at(n) - x.at(n - 1)) / sc.mu_sigma(n - 1);

  EtaCheck out;
  const bool unique = rank_with_tolerance(lhs) == 2 * p.d;
  out.eta = lhs.colPivHouseholderQr().solve(rhs);
  out.residual = (lhs * out.eta - rhs).norm();
  out.ok = unique && out.residual <= tol * (p.R.norm() + p.S.norm() + 1.0) * xs;
  return out;
}

bool operator==(const SpectralProblem& lhs, const SpectralProblem& rhs) {
  auto mat_eq = [](const CMatrix& a, const CMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && a == b;
  };
  if (!(lhs.scale && rhs.scale && *lhs.scale == *rhs.scale)) return false;
  if (lhs.d != rhs.d) return false;
  if (lhs.P.size() != rhs.P.size() || lhs.Q.size() != rhs.Q.size() ||
      lhs.omega.size() != rhs.omega.size()) {
    return false;
  }
  for (size_t i = 0; i < lhs.P.size(); ++i) {
    if (!mat_eq(lhs.P[i], rhs.P[i])) return false;
  }
  for (size_t i = 0; i < lhs.Q.size(); ++i) {
    if (!mat_eq(lhs.Q[i], rhs.Q[i]) || !mat_eq(lhs.omega[i], rhs.omega[i])) return false;
  }
  return mat_eq(lhs.R, rhs.R) && mat_eq(lhs.S, rhs.S);
}

}  // namespace tsspec
