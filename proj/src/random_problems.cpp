#include "tsspec/random_problems.hpp"

#include <algorithm>
#include <cmath>

namespace tsspec {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 step on base + index
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CMatrix random_complex_matrix(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = rng.entry();
  }
  return m;
}

CMatrix random_unitary(Rng& rng, int d) {
  const CMatrix g = random_complex_matrix(rng, d, d);
  Eigen::HouseholderQR<CMatrix> qr(g);
  return qr.householderQ() * CMatrix::Identity(d, d);
}

CMatrix random_hermitian(Rng& rng, int d, double lo, double hi) {
  const CMatrix u = random_unitary(rng, d);
  RVector vals(d);
  for (int i = 0; i < d; ++i) vals(i) = rng.uniform(lo, hi);
  return u * vals.asDiagonal() * u.adjoint();
}

CMatrix random_invertible_hermitian(Rng& rng, int d) {
  const CMatrix u = random_unitary(rng, d);
  RVector vals(d);
  for (int i = 0; i < d; ++i) {
    const double mag = rng.uniform(0.5, 2.0);
    vals(i) = rng.pick(2) == 0 ? mag : -mag;
  }
  return u * vals.asDiagonal() * u.adjoint();
}

CMatrix random_hermitian_of_rank(Rng& rng, int d, int rank) {
  const CMatrix u = random_unitary(rng, d);
  RVector vals = RVector::Zero(d);
  for (int i = 0; i < rank; ++i) {
    const double mag = rng.uniform(0.5, 2.0);
    vals(i) = rng.pick(2) == 0 ? mag : -mag;
  }
  return u * vals.asDiagonal() * u.adjoint();
}

namespace {

// U diag([0.5, 2]) V*: generic, invertible, condition number bounded by 4.
CMatrix random_well_conditioned(Rng& rng, int d) {
  const CMatrix u = random_unitary(rng, d);
  const CMatrix v = random_unitary(rng, d);
  RVector vals(d);
  for (int i = 0; i < d; ++i) vals(i) = rng.uniform(0.5, 2.0);
  return u * vals.asDiagonal() * v.adjoint();
}

}  // namespace

ScaleRef random_scale(Rng& rng, int N, std::string* kind_out) {
  const int kind = rng.pick(3);
  if (kind == 0) {
    if (kind_out) *kind_out = "uniform";
    return make_uniform_scale(rng.uniform(0.6, 1.6), N, rng.uniform(-1.0, 1.0));
  }
  if (kind == 1) {
    if (kind_out) *kind_out = "qscale";
    return make_q_scale(rng.uniform(1.08, 1.35), rng.uniform(0.7, 1.4), N);
  }
  if (kind_out) *kind_out = "random";
  std::vector<double> pts(static_cast<size_t>(N) + 2);
  pts[0] = -rng.uniform(0.5, 2.0);
  pts[1] = 0.0;
  for (int k = 1; k <= N; ++k) {
    pts[static_cast<size_t>(k + 1)] = pts[static_cast<size_t>(k)] + rng.uniform(0.5, 2.0);
  }
  return make_explicit_scale(std::move(pts));
}

BoundaryPair random_self_adjoint_bc(Rng& rng, int d) {
  // S = G invertible, R = K (G*)^{-1} with K Hermitian: SR* = K = RS*.
  const CMatrix G = random_well_conditioned(rng, 2 * d);
  const CMatrix K = random_hermitian(rng, 2 * d, -2.0, 2.0);
  BoundaryPair out;
  out.S = G;
  out.R = K * solve_linear(G.adjoint(), CMatrix::Identity(2 * d, 2 * d));
  return out;
}

BoundaryPair random_self_adjoint_bc_with_r(Rng& rng, int d, int target_r,
                                           const CMatrix& P_rho_a, double mu_rho_a) {
  if (target_r < 0 || target_r > 2 * d) {
    throw InvalidParameter("target r must lie in {0, ..., 2d}");
  }
  // Split the rank between the two endpoints: r = r_a + r_b with each
  // contribution in [0, d].
  const int ra_min = std::max(0, target_r - d);
  const int ra_max = std::min(d, target_r);
  const int r_a = ra_min + rng.pick(ra_max - ra_min + 1);
  const int r_b = target_r - r_a;

  const CMatrix Id = CMatrix::Identity(d, d);

  // a-side: S_a invertible, R_a = K_a S_a^{-*} - S_a P^rho(a)/mu_rho(a); the
  // r-defining block R_a + S_a P^rho(a)/mu_rho(a) = K_a S_a^{-*} has rank r_a
  // and S_a R_a* = K_a - S_a P^rho(a) S_a*/mu_rho(a) stays Hermitian.
  const CMatrix S_a = random_well_conditioned(rng, d);
  const CMatrix K_a = random_hermitian_of_rank(rng, d, r_a);
  const CMatrix R_a =
      K_a * solve_linear(S_a.adjoint(), Id) - S_a * P_rho_a / mu_rho_a;

  // b-side: R_b invertible, S_b = K_b R_b^{-*} of rank r_b; S_b R_b* = K_b.
  const CMatrix R_b = random_well_conditioned(rng, d);
  const CMatrix K_b = random_hermitian_of_rank(rng, d, r_b);
  const CMatrix S_b = K_b * solve_linear(R_b.adjoint(), Id);

  BoundaryPair out;
  out.R = CMatrix::Zero(2 * d, 2 * d);
  out.S = CMatrix::Zero(2 * d, 2 * d);
  out.R.topLeftCorner(d, d) = R_a;
  out.R.bottomRightCorner(d, d) = R_b;
  out.S.topLeftCorner(d, d) = S_a;
  out.S.bottomRightCorner(d, d) = S_b;
  return out;
}

SpectralProblem random_self_adjoint_problem(Rng& rng, int d, int N,
                                            std::optional<int> target_r,
                                            std::string* scale_kind) {
  SpectralProblem p;
  p.d = d;
  p.scale = random_scale(rng, N, scale_kind);

  p.P.reserve(static_cast<size_t>(N) + 1);
  for (int i = -1; i <= N - 1; ++i) {
    if (i == -1 || i == N - 1) {
      p.P.push_back(random_invertible_hermitian(rng, d));
    } else if (rng.pick(4) == 0) {
      // exercise the singular-interior-coefficient case
      p.P.push_back(random_hermitian_of_rank(rng, d, std::max(0, d - 1)));
    } else {
      p.P.push_back(random_hermitian(rng, d, -1.5, 1.5));
    }
  }
  for (int k = 0; k < N; ++k) {
    p.Q.push_back(random_hermitian(rng, d, -1.5, 1.5));
    p.omega.push_back(random_hermitian(rng, d, 0.5, 2.0));
  }

  const int r = target_r ? *target_r : rng.pick(2 * d + 1);
  const BoundaryPair bc =
      random_self_adjoint_bc_with_r(rng, d, r, p.P_at(-1), p.scale->mu_rho(0));
  p.R = bc.R;
  p.S = bc.S;
  return p;
}

HamiltonianSystem random_hamiltonian_system(Rng& rng, int n, ScaleRef scale) {
  HamiltonianSystem h;
  h.scale = std::move(scale);
  h.n = n;
  h.lo = 0;
  h.hi = h.scale->N();
  double mu_max = 0.0;
  for (int i = h.lo; i <= h.hi; ++i) mu_max = std::max(mu_max, h.scale->mu_rho(i));
  for (int i = h.lo; i <= h.hi; ++i) {
    CMatrix A = random_complex_matrix(rng, n, n);
    A *= 0.4 / (mu_max * (A.norm() + 1e-12));  // keeps I - mu_rho A* invertible
    h.A.push_back(std::move(A));
    h.B.push_back(random_hermitian(rng, n, -1.5, 1.5));
    h.C.push_back(random_hermitian(rng, n, -1.5, 1.5));
  }
  return h;
}

GridFunction random_grid_function(Rng& rng, ScaleRef scale, int lo, int hi, int rows,
                                  int cols) {
  GridFunction out(std::move(scale), lo, hi, rows, cols);
  for (int i = lo; i <= hi; ++i) out.at(i) = random_complex_matrix(rng, rows, cols);
  return out;
}

}  // namespace tsspec
