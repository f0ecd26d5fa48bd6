#include "tsspec/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace tsspec {

namespace {

// Block constants. The two J sign conventions stay local to the
// operations that use them: Jcal = (0, I; -I, 0) for the symplectic
// machinery, Jham = (0, -I; I, 0) for the Hamiltonian operator form.
CMatrix jcal(int n) {
  CMatrix J = CMatrix::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = CMatrix::Identity(n, n);
  J.bottomLeftCorner(n, n) = -CMatrix::Identity(n, n);
  return J;
}

CMatrix jham(int n) {
  return -jcal(n);
}

CMatrix mstar_m(int n) {
  CMatrix MM = CMatrix::Zero(2 * n, 2 * n);
  MM.bottomRightCorner(n, n) = CMatrix::Identity(n, n);
  return MM;
}

void require_hermitian(const CMatrix& A, const char* what, double tol = kDefaultTol) {
  if ((A - A.adjoint()).norm() > tol * std::max(1.0, A.norm())) {
    throw InvalidParameter(std::string(what) + " must be Hermitian");
  }
}

}  // namespace

CMatrix HamiltonianSystem::H_at(int i) const {
  CMatrix H(2 * n, 2 * n);
  H.topLeftCorner(n, n) = A_at(i);
  H.topRightCorner(n, n) = B_at(i);
  H.bottomLeftCorner(n, n) = C_at(i);
  H.bottomRightCorner(n, n) = -A_at(i).adjoint();
  return H;
}

HamiltonianCheck hamiltonian_check(const std::vector<CMatrix>& H_blocks,
                                   const IsolatedTimeScale& scale, int lo, double tol) {
  HamiltonianCheck out;
  out.structure_ok = true;
  out.invertibility_ok = true;
  if (H_blocks.empty()) throw InvalidParameter("hamiltonian_check: no blocks");
  const int two_n = static_cast<int>(H_blocks.front().rows());
  if (two_n % 2 != 0) throw InvalidParameter("hamiltonian_check: blocks must be 2n x 2n");
  const CMatrix J = jcal(two_n / 2);
  const CMatrix MM = mstar_m(two_n / 2);

  for (size_t idx = 0; idx < H_blocks.size(); ++idx) {
    const int i = lo + static_cast<int>(idx);
    const CMatrix& H = H_blocks[idx];
    const double defect = (H.adjoint() * J + J * H).norm();
    out.max_structure_defect = std::max(out.max_structure_defect, defect);
    if (defect > tol * (1.0 + H.norm())) {
      if (out.structure_ok) out.first_bad_index = i;
      out.structure_ok = false;
    }
    const CMatrix T = CMatrix::Identity(two_n, two_n) + scale.mu_rho(i) * H * MM;
    if (rank_with_tolerance(T) != two_n) {
      if (out.ok()) out.first_bad_index = i;
      out.invertibility_ok = false;
    }
  }
  return out;
}

SymplecticSystem hamiltonian_to_symplectic(const HamiltonianSystem& h, double tol) {
  if (h.lo < 0) throw InvalidParameter("hamiltonian system window must start at index >= 0");
  const int two_n = 2 * h.n;
  const CMatrix J = jcal(h.n);
  const CMatrix MM = mstar_m(h.n);
  const CMatrix I2 = CMatrix::Identity(two_n, two_n);
  const CMatrix In = CMatrix::Identity(h.n, h.n);

  SymplecticSystem out;
  out.scale = h.scale;
  out.n2 = two_n;
  out.lo = h.lo;
  out.hi = h.hi;

  for (int i = h.lo; i <= h.hi; ++i) {
    require_hermitian(h.B_at(i), "B");
    require_hermitian(h.C_at(i), "C");
    const double mu = h.scale->mu_rho(i);
    const CMatrix H = h.H_at(i);

    CMatrix S_res;
    try {
      S_res = solve_linear(I2 + mu * H * MM, H);
    } catch (const Singular&) {
      throw Singular("hamiltonian_to_symplectic: I + mu_rho H M*M singular at grid index " +
                     std::to_string(i));
    }

    CMatrix Ginv;
    try {
      Ginv = solve_linear(In - mu * h.A_at(i).adjoint(), In);
    } catch (const Singular&) {
      throw Singular("hamiltonian_to_symplectic: I - mu_rho A* singular at grid index " +
                     std::to_string(i));
    }
    CMatrix S_blk(two_n, two_n);
    S_blk.topLeftCorner(h.n, h.n) = h.A_at(i) - mu * h.B_at(i) * Ginv * h.C_at(i);
    S_blk.topRightCorner(h.n, h.n) = h.B_at(i) * Ginv;
    S_blk.bottomLeftCorner(h.n, h.n) = Ginv * h.C_at(i);
    S_blk.bottomRightCorner(h.n, h.n) = -Ginv * h.A_at(i).adjoint();

    const double gap = (S_res - S_blk).norm();
    out.max_formula_gap = std::max(out.max_formula_gap, gap);
    if (gap > tol * (1.0 + S_res.norm())) {
      throw ToleranceFailure("hamiltonian_to_symplectic: resolvent and block formulas disagree at index " +
                             std::to_string(i));
    }

    const double defect = (S_res.adjoint() * J + J * S_res - mu * S_res.adjoint() * J * S_res).norm();
    out.symplectic_defect.push_back(defect);
    out.max_symplectic_defect = std::max(out.max_symplectic_defect, defect);
    out.S.push_back(std::move(S_res));
  }
  return out;
}

ZSystemResult second_order_to_z_system(const GridFunction& P, const GridFunction& Q,
                                       const GridFunction& X) {
  if (P.rows() != P.cols() || Q.rows() != Q.cols() || P.rows() != X.rows()) {
    throw InvalidParameter("second_order_to_z_system: dimension mismatch");
  }
  for (int i = P.lo(); i <= P.hi(); ++i) require_hermitian(P.at(i), "P");
  for (int i = Q.lo(); i <= Q.hi(); ++i) require_hermitian(Q.at(i), "Q");
  const int d = P.rows();
  const auto& sc = X.scale();

  const int zlo = std::max(X.lo(), P.lo());
  const int zhi = std::min(X.hi() - 1, P.hi());
  if (zlo > zhi) throw WindowTooSmall("second_order_to_z_system: no room for Z = (X; P X^delta)");

  ZSystemResult out;
  out.Z = GridFunction(X.scale_ptr(), zlo, zhi, 2 * d, X.cols());
  for (int i = zlo; i <= zhi; ++i) {
    out.Z.at(i).topRows(d) = X.at(i);
    out.Z.at(i).bottomRows(d) = P.at(i) * (X.at(i + 1) - X.at(i)) / sc.mu_sigma(i);
  }

  out.res_lo = std::max({zlo + 1, Q.lo(), P.lo() + 1, 0});
  out.res_hi = std::min(zhi, Q.hi());
  if (out.res_lo > out.res_hi) {
    throw WindowTooSmall("second_order_to_z_system: empty residual window");
  }
  for (int i = out.res_lo; i <= out.res_hi; ++i) {
    const double mu = sc.mu_rho(i);
    const CMatrix Pinv = solve_linear(P.at(i - 1), CMatrix::Identity(d, d));
    CMatrix S(2 * d, 2 * d);
    S.topLeftCorner(d, d) = -mu * Pinv * Q.at(i);
    S.topRightCorner(d, d) = Pinv;
    S.bottomLeftCorner(d, d) = Q.at(i);
    S.bottomRightCorner(d, d) = CMatrix::Zero(d, d);

    const CMatrix znabla = (out.Z.at(i) - out.Z.at(i - 1)) / mu;
    const double res = (znabla - S * out.Z.at(i)).norm();
    out.S.push_back(std::move(S));
    out.residuals.push_back(res);
    out.max_residual = std::max(out.max_residual, res);
  }
  return out;
}

GridFunction generate_second_order_solution(const GridFunction& P, const GridFunction& Q,
                                            const CMatrix& X_rho_a, const CMatrix& X_a) {
  const auto& sc = P.scale();
  const int n = sc.N();
  if (!P.covers(-1, n - 1) || !Q.covers(0, n - 1)) {
    throw WindowMismatch("generate_second_order_solution: P needs [-1, N-1], Q needs [0, N-1]");
  }
  const int d = P.rows();
  if (X_rho_a.rows() != d || X_a.rows() != d || X_rho_a.cols() != X_a.cols()) {
    throw InvalidParameter("generate_second_order_solution: bad initial data");
  }

  GridFunction X(P.scale_ptr(), -1, n, d, static_cast<int>(X_a.cols()));
  X.at(-1) = X_rho_a;
  X.at(0) = X_a;
  // Track G_k = (P X^delta)(t_k); the equation advances G, then X.
  CMatrix G = P.at(-1) * (X.at(0) - X.at(-1)) / sc.mu_sigma(-1);
  for (int k = 0; k < n; ++k) {
    G += sc.mu_rho(k) * (Q.at(k) * X.at(k));
    X.at(k + 1) = X.at(k) + sc.mu_sigma(k) * solve_linear(P.at(k), G);
  }
  return X;
}

GridFunction sturm_liouville_operator(const std::vector<GridFunction>& p_coeffs,
                                      const GridFunction& y) {
  const int n = static_cast<int>(p_coeffs.size()) - 1;
  if (n < 1) throw InvalidParameter("sturm_liouville_operator: need p_0 ... p_n with n >= 1");
  GridFunction acc = mmul(p_coeffs[0], y);
  for (int k = 1; k <= n; ++k) {
    std::vector<Deriv> inner(static_cast<size_t>(k - 1), Deriv::Nabla);
    inner.push_back(Deriv::Delta);
    GridFunction w = iterated_derivative(y, inner);
    w = mmul(p_coeffs[static_cast<size_t>(k)], w);
    std::vector<Deriv> outer(static_cast<size_t>(k - 1), Deriv::Delta);
    outer.push_back(Deriv::Nabla);
    w = iterated_derivative(w, outer);
    acc = (k % 2 == 0) ? acc + w : acc - w;
  }
  return acc;
}

SlToHamiltonianResult sturm_liouville_to_hamiltonian(const std::vector<GridFunction>& p_coeffs,
                                                     const GridFunction& y) {
  const int n = static_cast<int>(p_coeffs.size()) - 1;
  if (n < 1) throw InvalidParameter("sturm_liouville_to_hamiltonian: need n >= 1");
  if (y.rows() != 1 || y.cols() != 1) {
    throw InvalidParameter("sturm_liouville_to_hamiltonian: y must be scalar-valued");
  }
  const GridFunction& pn = p_coeffs[static_cast<size_t>(n)];
  double pn_sup = 0.0;
  for (int i = pn.lo(); i <= pn.hi(); ++i) pn_sup = std::max(pn_sup, std::abs(pn.at(i)(0, 0)));
  for (int i = pn.lo(); i <= pn.hi(); ++i) {
    if (std::abs(pn.at(i)(0, 0)) <= 1e-12 * std::max(1.0, pn_sup)) {
      throw ZeroLeadingCoefficient("p_n vanishes at grid index " + std::to_string(i));
    }
  }
  if (y.length() < 2 * n + 2) {
    throw WindowTooSmall("sturm_liouville_to_hamiltonian: window of length " +
                         std::to_string(y.length()) + " cannot carry 2n derivatives");
  }

  SlToHamiltonianResult out;
  out.frame.order = n;
  out.frame.p = p_coeffs;
  auto& yk = out.frame.y_pseudo;
  yk.reserve(static_cast<size_t>(2 * n + 1));

  // y^[k] = y^{nabla^k} for 0 <= k <= n-1
  yk.push_back(y);
  for (int k = 1; k <= n - 1; ++k) yk.push_back(nabla(yk.back()));
  // y^[n] = p_n y^{nabla^{n-1} delta}
  {
    std::vector<Deriv> word(static_cast<size_t>(n - 1), Deriv::Nabla);
    word.push_back(Deriv::Delta);
    yk.push_back(mmul(pn, iterated_derivative(y, word)));
  }
  // y^[n+k] = p_{n-k} y^{nabla^{n-k-1} delta} - (y^[n+k-1])^delta
  for (int k = 1; k <= n - 1; ++k) {
    std::vector<Deriv> word(static_cast<size_t>(n - k - 1), Deriv::Nabla);
    word.push_back(Deriv::Delta);
    const GridFunction lead =
        mmul(p_coeffs[static_cast<size_t>(n - k)], iterated_derivative(y, word));
    yk.push_back(lead - delta(yk.back()));
  }
  // y^[2n] = p_0 y - (y^[2n-1])^nabla
  yk.push_back(mmul(p_coeffs[0], y) - nabla(yk.back()));

  out.My = sturm_liouville_operator(p_coeffs, y);

  // Stack x = (y^[0]; ...; y^[n-1]) and u = (y^[2n-1]; ...; y^[n]) on the
  // windows the pseudo-derivatives actually survive on.
  int xlo = y.lo(), xhi = y.hi();
  for (int k = 0; k <= n - 1; ++k) {
    xlo = std::max(xlo, yk[static_cast<size_t>(k)].lo());
    xhi = std::min(xhi, yk[static_cast<size_t>(k)].hi());
  }
  int ulo = y.lo(), uhi = y.hi();
  for (int k = n; k <= 2 * n - 1; ++k) {
    ulo = std::max(ulo, yk[static_cast<size_t>(k)].lo());
    uhi = std::min(uhi, yk[static_cast<size_t>(k)].hi());
  }
  out.x = GridFunction(y.scale_ptr(), xlo, xhi, n, 1);
  for (int i = xlo; i <= xhi; ++i) {
    for (int row = 0; row < n; ++row) out.x.at(i)(row, 0) = yk[static_cast<size_t>(row)].at(i)(0, 0);
  }
  out.u = GridFunction(y.scale_ptr(), ulo, uhi, n, 1);
  for (int i = ulo; i <= uhi; ++i) {
    for (int row = 0; row < n; ++row) {
      out.u.at(i)(row, 0) = yk[static_cast<size_t>(2 * n - 1 - row)].at(i)(0, 0);
    }
  }

  CMatrix Acal = CMatrix::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) Acal(i, i + 1) = 1.0;

  out.res_lo = std::max({xlo + 1, ulo + 1, out.My.lo(), 0});
  out.res_hi = std::min({xhi, uhi, out.My.hi()});
  if (out.res_lo > out.res_hi) {
    throw WindowTooSmall("sturm_liouville_to_hamiltonian: empty residual window");
  }
  const auto& sc = y.scale();
  for (int i = out.res_lo; i <= out.res_hi; ++i) {
    const double mu = sc.mu_rho(i);
    const CVector xnab = (CVector(out.x.at(i)) - CVector(out.x.at(i - 1))) / mu;
    const CVector unab = (CVector(out.u.at(i)) - CVector(out.u.at(i - 1))) / mu;
    const CVector urho = out.u.at(i - 1);

    CMatrix Bcal = CMatrix::Zero(n, n);
    Bcal(n - 1, n - 1) = 1.0 / pn.at(i - 1)(0, 0);
    CMatrix Ccal = CMatrix::Zero(n, n);
    Ccal(0, 0) = p_coeffs[0].at(i)(0, 0);
    for (int row = 1; row < n; ++row) {
      Ccal(row, row) = p_coeffs[static_cast<size_t>(row)].at(i - 1)(0, 0);
    }

    const double rx = (xnab - Acal * CVector(out.x.at(i)) - Bcal * urho).norm();
    CVector source = CVector::Zero(n);
    source(0) = out.My.at(i)(0, 0);
    const double ru =
        (unab - Ccal * CVector(out.x.at(i)) + Acal.adjoint() * urho + source).norm();
    out.residual_x.push_back(rx);
    out.residual_u.push_back(ru);
    out.max_residual = std::max({out.max_residual, rx, ru});
  }
  return out;
}

HamiltonianLagrange hamiltonian_lagrange_residual(
    const std::vector<CMatrix>& H, const std::vector<CMatrix>& W, double lambda,
    const GridFunction& x, const GridFunction& u, const GridFunction& y,
    const GridFunction& v) {
  const int lo = x.lo();
  const int hi = x.hi();
  for (const GridFunction* g : {&u, &y, &v}) {
    if (g->lo() != lo || g->hi() != hi || g->rows() != x.rows() || g->cols() != 1) {
      throw WindowMismatch("hamiltonian_lagrange_residual: all four functions need one window");
    }
  }
  const int d = x.rows();
  const size_t count = static_cast<size_t>(hi - lo);
  if (H.size() != count || W.size() != count) {
    throw WindowMismatch("hamiltonian_lagrange_residual: need one H and W block per point of (lo, hi]");
  }
  const CMatrix J = jham(d);
  const auto& sc = x.scale();

  auto pair_at = [d](const GridFunction& top, const GridFunction& bottom, int i, int ishift) {
    CVector z(2 * d);
    z.head(d) = top.at(i);
    z.tail(d) = bottom.at(ishift);
    return z;
  };

  Complex lhs = 0.0;
  double scale = 0.0;
  for (int i = lo + 1; i <= hi; ++i) {
    const size_t idx = static_cast<size_t>(i - lo - 1);
    require_hermitian(H[idx], "H");
    require_hermitian(W[idx], "W");
    const CMatrix Heff = H[idx] + lambda * W[idx];
    const double mu = sc.mu_rho(i);

    CVector znab(2 * d);
    znab.head(d) = (CVector(x.at(i)) - CVector(x.at(i - 1))) / mu;
    znab.tail(d) = (CVector(u.at(i)) - CVector(u.at(i - 1))) / mu;
    const CVector ell_xu = J * znab - Heff * pair_at(x, u, i, i - 1);

    CVector wnab(2 * d);
    wnab.head(d) = (CVector(y.at(i)) - CVector(y.at(i - 1))) / mu;
    wnab.tail(d) = (CVector(v.at(i)) - CVector(v.at(i - 1))) / mu;
    const CVector ell_yv = J * wnab - Heff * pair_at(y, v, i, i - 1);

    const Complex t1 = (pair_at(y, v, i, i - 1).adjoint() * ell_xu)(0, 0);
    const Complex t2 = (ell_yv.adjoint() * pair_at(x, u, i, i - 1))(0, 0);
    lhs += (t1 - t2) * mu;
    scale += (std::abs(t1) + std::abs(t2)) * mu;
  }

  auto boundary = [&](int i) {
    CVector zw(2 * d), zx(2 * d);
    zw.head(d) = y.at(i);
    zw.tail(d) = v.at(i);
    zx.head(d) = x.at(i);
    zx.tail(d) = u.at(i);
    return (zw.adjoint() * (J * zx))(0, 0);
  };
  const Complex at_hi = boundary(hi);
  const Complex at_lo = boundary(lo);

  HamiltonianLagrange out;
  out.lhs = lhs;
  out.rhs = at_hi - at_lo;
  out.residual = out.lhs - out.rhs;
  out.scale = scale + std::abs(at_hi) + std::abs(at_lo);
  return out;
}

}  // namespace tsspec
