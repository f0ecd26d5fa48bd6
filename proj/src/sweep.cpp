#include "tsspec/sweep.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tsspec {

namespace {

void check(std::vector<std::string>& failures, bool ok, const std::string& name) {
  if (!ok) failures.push_back(name);
}

double lagrange_ratio(const LagrangeTerms& t) {
  return std::abs(t.residual) / std::max(t.scale, 1e-12);
}

}  // namespace

ProblemVerification verify_problem_instance(const SpectralProblem& p, Rng& rng,
                                            const SweepOptions& opts) {
  ProblemVerification out;
  out.d = p.d;
  out.N = p.N();
  const auto& tol = opts.tol;

  try {
    const ValidationReport rep = validate(p);
    check(out.failures, rep.pass(), "hypotheses");
    check(out.failures, rep.bc_self_adjoint, "bc_self_adjoint");

    // Lagrange identity for arbitrary pairs, no boundary conditions.
    for (int t = 0; t < opts.lagrange_pairs; ++t) {
      const GridFunction x = random_grid_function(rng, p.scale, -1, out.N, out.d);
      const GridFunction y = random_grid_function(rng, p.scale, -1, out.N, out.d);
      out.lagrange_max = std::max(out.lagrange_max, lagrange_ratio(lagrange_residual(p, x, y)));
    }
    check(out.failures, out.lagrange_max <= tol.lagrange, "lagrange");

    const AdmissibleSpace space = build_admissible_space(p);
    out.r = space.dec.r;
    out.m = space.m;
    out.dimension_ok = (space.m == out.d * (out.N - 2) + space.dec.r);
    check(out.failures, out.dimension_ok, "dimension_law");

    const OperatorMatrix op = build_operator_matrix(p, space);
    out.operator_hermiticity = op.hermiticity_defect;
    out.closure_residual = op.closure_residual;
    check(out.failures, out.operator_hermiticity <= tol.operator_hermiticity,
          "operator_hermiticity");

    const double a_norm = op.A.norm();
    for (int t = 0; t < 3; ++t) {
      CVector cx(space.m), cy(space.m);
      for (int j = 0; j < space.m; ++j) {
        cx(j) = rng.entry();
        cy(j) = rng.entry();
      }
      const GridFunction x = unstack_window(p.scale, -1, out.N, out.d, space.basis_mat * cx);
      const GridFunction y = unstack_window(p.scale, -1, out.N, out.d, space.basis_mat * cy);
      const Complex asym = inner_product(p, apply_ell(p, x), y) -
                           inner_product(p, x, apply_ell(p, y));
      const double scale = std::max(1.0, weighted_norm(p, x) * weighted_norm(p, y) *
                                             std::max(1.0, a_norm));
      out.selfadjoint_pairs_max = std::max(out.selfadjoint_pairs_max, std::abs(asym) / scale);
    }
    check(out.failures, out.selfadjoint_pairs_max <= tol.selfadjoint_pairs,
          "selfadjoint_pairs");

    const SpectralResult result = solve_spectrum(p, space, op);
    out.gram_defect = result.gram_defect;
    check(out.failures, out.gram_defect <= tol.gram, "orthonormality");
    check(out.failures, static_cast<int>(result.eigenvalues.size()) == out.m, "eigen_count");
    for (double rres : result.equation_residuals) {
      out.eigen_residual_max = std::max(out.eigen_residual_max, rres);
    }
    check(out.failures, out.eigen_residual_max <= tol.eigen_residual, "eigen_residual");

    const BruteForceOracle oracle = brute_force_oracle(p);
    check(out.failures, oracle.pencil_dim == out.m, "oracle_dimension");
    check(out.failures, oracle.gram_min_eig > 0.0, "oracle_gram_pd");
    for (int j = 0; j < out.m; ++j) {
      const double gap = std::abs(result.eigenvalues(j) - oracle.eigenvalues(j)) /
                         (1.0 + std::abs(result.eigenvalues(j)));
      out.oracle_max = std::max(out.oracle_max, gap);
    }
    check(out.failures, out.oracle_max <= tol.oracle, "oracle_agreement");

    for (int t = 0; t < opts.admissible_samples; ++t) {
      CVector c(space.m);
      for (int j = 0; j < space.m; ++j) c(j) = rng.entry();
      const GridFunction x = unstack_window(p.scale, -1, out.N, out.d, space.basis_mat * c);
      const CVector coeffs = expand(p, result, x);
      CVector recon = CVector::Zero(space.basis_mat.rows());
      for (int j = 0; j < out.m; ++j) {
        recon += coeffs(j) * stack_window(result.eigenfunctions[static_cast<size_t>(j)], -1, out.N);
      }
      const CVector stacked = stack_window(x, -1, out.N);
      const double comp = (stacked - recon).cwiseAbs().maxCoeff() /
                          std::max(1e-12, stacked.cwiseAbs().maxCoeff());
      out.completeness_max = std::max(out.completeness_max, comp);

      const ParsevalCheck pc = parseval_check(p, result, x);
      out.parseval_max = std::max(out.parseval_max, pc.defect / std::max(pc.lhs, 1e-12));
    }
    check(out.failures, out.completeness_max <= tol.completeness, "completeness");
    check(out.failures, out.parseval_max <= tol.parseval, "parseval");

    const SpectralResolution res = spectral_resolution(p, result);
    out.resolution_defect = res.reconstruction_defect / std::max(1.0, a_norm);
    out.projector_defect = std::max(res.projector_defect, res.completeness_defect);
    check(out.failures, out.resolution_defect <= tol.resolution, "spectral_resolution");
    check(out.failures, out.projector_defect <= tol.projector, "projector_algebra");

    // E_lambda: jump of the group projector at every eigenvalue, right
    // continuity, E(0) = 0, and completeness across the whole spectrum.
    if (out.m > 0) {
      double defect = 0.0;
      const size_t n_groups = res.group_lambda.size();
      for (size_t g = 0; g < n_groups; ++g) {
        const double lam = res.group_lambda[g];
        double gap_lo = g == 0 ? 1.0 : lam - res.group_lambda[g - 1];
        double gap_hi = g + 1 == n_groups ? 1.0 : res.group_lambda[g + 1] - lam;
        const double eps = 0.25 * std::min(gap_lo, gap_hi);
        defect = std::max(defect, (res.E(lam + eps) - res.E(lam - eps) - res.group_pi[g]).norm());
        defect = std::max(defect, (res.E(lam) - res.E(lam + eps)).norm());
      }
      defect = std::max(defect, res.E(0.0).norm());
      const double lam_lo = result.eigenvalues(0) - 1.0;
      const double lam_hi = result.eigenvalues(out.m - 1) + 1.0;
      defect = std::max(defect,
                        (res.E(lam_hi) - res.E(lam_lo) - CMatrix::Identity(out.m, out.m)).norm());
      out.elambda_defect = defect;
      check(out.failures, out.elambda_defect <= tol.elambda, "e_lambda_steps");
    }

    out.dual_applicable = (space.dec.r == 2 * out.d);
    if (out.dual_applicable) {
      const DualOrthogonality dual = dual_orthogonality_check(p, result);
      out.dual_gram = dual.gram_defect;
      out.dual_outer = dual.outer_defect;
      check(out.failures, dual.max_defect <= tol.dual, "dual_orthogonality");
    }

    {
      const double c = rng.uniform(-5.0, 5.0);
      SpectralProblem shifted = p;
      for (int k = 0; k < out.N; ++k) {
        shifted.Q[static_cast<size_t>(k)] += c * p.omega_at(k);
      }
      // The admissible space is invariant under Q -> Q + c omega (the extra
      // constraint rows change by a multiple of the V1-trace relation, which
      // vanishes on it), so the shifted solve reuses the basis.
      const OperatorMatrix shifted_op = build_operator_matrix(shifted, space);
      const SpectralResult shifted_result = solve_spectrum(shifted, space, shifted_op);
      for (int j = 0; j < out.m; ++j) {
        out.qshift_max = std::max(out.qshift_max,
                                  std::abs(shifted_result.eigenvalues(j) -
                                           result.eigenvalues(j) - c));
      }
      check(out.failures, out.qshift_max <= tol.qshift, "q_shift");
    }
  } catch (const std::exception& e) {
    out.failures.push_back(std::string("exception: ") + e.what());
  }

  out.pass = out.failures.empty();
  return out;
}

ProblemVerification verify_one_problem(const SweepOptions& opts, int index) {
  const std::uint64_t seed = mix_seed(opts.seed, static_cast<std::uint64_t>(index));
  Rng rng(seed);
  const int d = opts.d > 0 ? opts.d : 1 + rng.pick(3);
  const int N = opts.N > 0 ? opts.N : 2 + rng.pick(7);

  ProblemVerification out;
  std::string scale_kind;
  try {
    // Mix generic (proper) boundary conditions with rank-targeted ones so
    // every r in {0, ..., 2d} shows up across the sweep.
    std::optional<int> target_r;
    if (rng.pick(3) != 0) target_r = rng.pick(2 * d + 1);
    const SpectralProblem p = random_self_adjoint_problem(rng, d, N, target_r, &scale_kind);
    out = verify_problem_instance(p, rng, opts);
  } catch (const std::exception& e) {
    out.failures.push_back(std::string("exception: ") + e.what());
    out.pass = false;
    out.d = d;
    out.N = N;
  }
  out.index = index;
  out.seed = seed;
  out.scale_kind = scale_kind;
  return out;
}

std::vector<ProblemVerification> run_problem_sweep_serial(const SweepOptions& opts) {
  std::vector<ProblemVerification> results(static_cast<size_t>(opts.count));
  for (int i = 0; i < opts.count; ++i) results[static_cast<size_t>(i)] = verify_one_problem(opts, i);
  return results;
}

std::vector<ProblemVerification> run_problem_sweep(const SweepOptions& opts) {
  if (opts.threads == 1) return run_problem_sweep_serial(opts);
  std::vector<ProblemVerification> results(static_cast<size_t>(opts.count));
#ifdef _OPENMP
  if (opts.threads > 1) omp_set_num_threads(opts.threads);
#endif
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < opts.count; ++i) {
    results[static_cast<size_t>(i)] = verify_one_problem(opts, i);
  }
  return results;
}

HamiltonianVerification verify_one_hamiltonian(const SweepOptions& opts, int index) {
  HamiltonianVerification out;
  out.index = index;
  out.seed = mix_seed(opts.seed ^ 0x5a5a5a5a5a5a5a5aULL, static_cast<std::uint64_t>(index));
  Rng rng(out.seed);
  out.n = 1 + rng.pick(3);
  out.N = 6 + rng.pick(3);  // room for 2n derivative applications at n = 3
  const auto& tol = opts.tol;

  try {
    // Graininess in [0.8, 1.6]: six nested difference quotients magnify
    // roundoff by (2/mu_min)^{2n}, and the pseudo-derivative contract is an
    // absolute 1e-11.
    std::vector<double> pts(static_cast<size_t>(out.N) + 2);
    pts[0] = -rng.uniform(0.8, 1.6);
    pts[1] = 0.0;
    for (int k = 1; k <= out.N; ++k) {
      pts[static_cast<size_t>(k + 1)] = pts[static_cast<size_t>(k)] + rng.uniform(0.8, 1.6);
    }
    ScaleRef scale = make_explicit_scale(std::move(pts));

    // Symplectic conversion of a random Hamiltonian system.
    const HamiltonianSystem h = random_hamiltonian_system(rng, out.n, scale);
    std::vector<CMatrix> blocks;
    for (int i = h.lo; i <= h.hi; ++i) blocks.push_back(h.H_at(i));
    const HamiltonianCheck hc = hamiltonian_check(blocks, *scale, h.lo);
    check(out.failures, hc.ok(), "hamiltonian_structure");
    const SymplecticSystem sym = hamiltonian_to_symplectic(h);
    out.symplectic_max = sym.max_symplectic_defect;
    out.formula_gap = sym.max_formula_gap;
    check(out.failures, out.symplectic_max <= tol.symplectic, "symplectic_identity");
    check(out.failures, out.formula_gap <= tol.symplectic, "formula_agreement");

    // Z-system residual for a generated second-order solution, plus the
    // propagation consistency of the converted symplectic flow.
    {
      const int d = out.n;
      GridFunction P(scale, -1, out.N - 1, d, d);
      GridFunction Q(scale, 0, out.N - 1, d, d);
      for (int i = -1; i <= out.N - 1; ++i) P.at(i) = random_invertible_hermitian(rng, d);
      for (int i = 0; i <= out.N - 1; ++i) Q.at(i) = random_hermitian(rng, d, -1.0, 1.0);
      const CMatrix X0 = random_complex_matrix(rng, d, d);
      const CMatrix X1 = random_complex_matrix(rng, d, d);
      const GridFunction X = generate_second_order_solution(P, Q, X0, X1);
      const ZSystemResult zs = second_order_to_z_system(P, Q, X);
      const double xscale = std::max(1.0, X.sup_norm());
      out.zsystem_max = zs.max_residual / xscale;
      check(out.failures, out.zsystem_max <= tol.zsystem, "z_system_residual");

      // z_{k-1} = (I - mu_rho(k) S_k) z_k inverts to a forward propagation.
      CMatrix z(2 * d, d);
      z.topRows(d) = X.at(-1);
      z.bottomRows(d) = P.at(-1) * (X.at(0) - X.at(-1)) / scale->mu_sigma(-1);
      double cons = 0.0;
      for (int k = zs.res_lo; k <= zs.res_hi; ++k) {
        const CMatrix I2 = CMatrix::Identity(2 * d, 2 * d);
        z = solve_linear(I2 - scale->mu_rho(k) * zs.S[static_cast<size_t>(k - zs.res_lo)], z);
        cons = std::max(cons, (z.topRows(d) - X.at(k)).norm() / xscale);
      }
      out.conversion_consistency = cons;
      check(out.failures, cons <= tol.conversion_consistency, "conversion_consistency");
    }

    // Pseudo-derivative relations for every order up to 3.
    for (int order = 1; order <= 3; ++order) {
      std::vector<GridFunction> pk;
      for (int k = 0; k <= order; ++k) {
        GridFunction pc(scale, -1, out.N, 1, 1);
        for (int i = -1; i <= out.N; ++i) {
          const double mag = rng.uniform(0.5, 2.0);
          pc.at(i)(0, 0) = (k == order) ? (rng.pick(2) == 0 ? mag : -mag)
                                        : rng.uniform(-2.0, 2.0);
        }
        pk.push_back(std::move(pc));
      }
      const GridFunction y = random_grid_function(rng, scale, -1, out.N, 1, 1);
      const SlToHamiltonianResult sl = sturm_liouville_to_hamiltonian(pk, y);
      out.pseudo_max = std::max(out.pseudo_max, sl.max_residual);
    }
    check(out.failures, out.pseudo_max <= tol.pseudo, "pseudo_derivatives");

    // Hamiltonian Lagrange identity, generic Hermitian H and W = (omega 0; 0 0).
    {
      const int d = out.n;
      std::vector<CMatrix> H, W;
      for (int i = 0; i < out.N; ++i) {
        H.push_back(random_hermitian(rng, 2 * d, -1.5, 1.5));
        CMatrix w = CMatrix::Zero(2 * d, 2 * d);
        w.topLeftCorner(d, d) = random_hermitian(rng, d, 0.5, 2.0);
        W.push_back(std::move(w));
      }
      const double lambda = rng.uniform(-2.0, 2.0);
      for (int t = 0; t < 2; ++t) {
        const GridFunction x = random_grid_function(rng, scale, -1, out.N - 1, d);
        const GridFunction u = random_grid_function(rng, scale, -1, out.N - 1, d);
        const GridFunction y = random_grid_function(rng, scale, -1, out.N - 1, d);
        const GridFunction v = random_grid_function(rng, scale, -1, out.N - 1, d);
        const HamiltonianLagrange hl =
            hamiltonian_lagrange_residual(H, W, lambda, x, u, y, v);
        out.hlagrange_max = std::max(out.hlagrange_max,
                                     std::abs(hl.residual) / std::max(hl.scale, 1e-12));
      }
      check(out.failures, out.hlagrange_max <= tol.hamiltonian_lagrange,
            "hamiltonian_lagrange");
    }
  } catch (const std::exception& e) {
    out.failures.push_back(std::string("exception: ") + e.what());
  }

  out.pass = out.failures.empty();
  return out;
}

std::vector<HamiltonianVerification> run_hamiltonian_sweep_serial(const SweepOptions& opts) {
  std::vector<HamiltonianVerification> results(static_cast<size_t>(opts.count));
  for (int i = 0; i < opts.count; ++i) {
    results[static_cast<size_t>(i)] = verify_one_hamiltonian(opts, i);
  }
  return results;
}

std::vector<HamiltonianVerification> run_hamiltonian_sweep(const SweepOptions& opts) {
  if (opts.threads == 1) return run_hamiltonian_sweep_serial(opts);
  std::vector<HamiltonianVerification> results(static_cast<size_t>(opts.count));
#ifdef _OPENMP
  if (opts.threads > 1) omp_set_num_threads(opts.threads);
#endif
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < opts.count; ++i) {
    results[static_cast<size_t>(i)] = verify_one_hamiltonian(opts, i);
  }
  return results;
}

}  // namespace tsspec
