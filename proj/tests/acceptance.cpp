// Acceptance suite: one line per criterion, every threshold pinned in code.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "tsspec/sweep.hpp"

using namespace tsspec;

namespace {

int g_failures = 0;

void report(int idx, bool pass, const std::string& text) {
  std::printf("[%2d] %s  %s\n", idx, pass ? "PASS" : "FAIL", text.c_str());
  if (!pass) ++g_failures;
}

std::string defect_str(double defect, double tol) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(max defect %.3g, tol %.3g)", defect, tol);
  return buf;
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const VerifyTolerances tol;

  // Shared sweep: 220 random self-adjoint problems, d in {1,2,3}, N in
  // {2..8}, mixed uniform/quantum/random scales, every r targeted across the
  // sweep; 100 admissible samples per problem for the completeness checks.
  SweepOptions opts;
  opts.seed = 20240915;
  opts.count = 220;
  opts.lagrange_pairs = 5;
  opts.admissible_samples = 100;
  const auto problems = run_problem_sweep(opts);

  struct Agg {
    int dim_ok = 0;
    int dual_count = 0;
    bool counts_ok = true;
    double lagrange = 0, herm = 0, pairs = 0, gram = 0, eig = 0, oracle = 0;
    double comp = 0, pars = 0, reso = 0, proj = 0, elam = 0, dual = 0, qshift = 0;
    bool exceptions = false;
  } a;
  for (const auto& v : problems) {
    a.dim_ok += v.dimension_ok ? 1 : 0;
    a.counts_ok = a.counts_ok && (v.m == v.d * (v.N - 2) + v.r);
    a.lagrange = std::max(a.lagrange, v.lagrange_max);
    a.herm = std::max(a.herm, v.operator_hermiticity);
    a.pairs = std::max(a.pairs, v.selfadjoint_pairs_max);
    a.gram = std::max(a.gram, v.gram_defect);
    a.eig = std::max(a.eig, v.eigen_residual_max);
    a.oracle = std::max(a.oracle, v.oracle_max);
    a.comp = std::max(a.comp, v.completeness_max);
    a.pars = std::max(a.pars, v.parseval_max);
    a.reso = std::max(a.reso, v.resolution_defect);
    a.proj = std::max(a.proj, v.projector_defect);
    a.elam = std::max(a.elam, v.elambda_defect);
    if (v.dual_applicable) {
      ++a.dual_count;
      a.dual = std::max({a.dual, v.dual_gram, v.dual_outer});
    }
    a.qshift = std::max(a.qshift, v.qshift_max);
    for (const auto& f : v.failures) {
      if (f.rfind("exception", 0) == 0) a.exceptions = true;
    }
  }
  const int n_problems = static_cast<int>(problems.size());

  // 1. dimension law, integer equality on every problem
  report(1, a.dim_ok == n_problems && !a.exceptions,
         "dimension law: m == d(N-2)+r exactly on " + std::to_string(a.dim_ok) + "/" +
             std::to_string(n_problems) + " problems (d in {1,2,3}, N in {2..8}, mixed scales)");

  // 2. Lagrange identity for arbitrary grid-function pairs
  report(2, a.lagrange <= tol.lagrange,
         "Lagrange identity: " + std::to_string(n_problems * opts.lagrange_pairs) +
             " arbitrary pairs " + defect_str(a.lagrange, tol.lagrange));

  // 3. operator self-adjointness
  report(3, a.herm <= tol.operator_hermiticity && a.pairs <= tol.selfadjoint_pairs,
         "operator self-adjointness: hermiticity " +
             defect_str(a.herm, tol.operator_hermiticity) + ", admissible pairs " +
             defect_str(a.pairs, tol.selfadjoint_pairs));

  // 4. spectrum: m real eigenvalues, orthonormal, pointwise equation residual
  report(4, a.counts_ok && a.gram <= tol.gram && a.eig <= tol.eigen_residual,
         "spectrum: m real eigenvalues, orthonormality " + defect_str(a.gram, tol.gram) +
             ", equation residual " + defect_str(a.eig, tol.eigen_residual));

  // 5. structured solve vs brute-force constrained pencil
  report(5, a.oracle <= tol.oracle,
         "oracle equivalence " + defect_str(a.oracle, tol.oracle));

  // 6. completeness and Parseval, 100 admissible samples per problem
  report(6, a.comp <= tol.completeness && a.pars <= tol.parseval,
         "completeness " + defect_str(a.comp, tol.completeness) + ", Parseval " +
             defect_str(a.pars, tol.parseval));

  // 7. spectral resolution, projector algebra, E_lambda step structure
  report(7,
         a.reso <= tol.resolution && a.proj <= tol.projector && a.elam <= tol.elambda,
         "spectral resolution " + defect_str(a.reso, tol.resolution) +
             ", projectors " + defect_str(a.proj, tol.projector) + ", E_lambda " +
             defect_str(a.elam, tol.elambda));

  // 8. dual orthogonality in the proper case, plus the unit-uniform scale
  //    where the weighted identity is literally the unweighted one
  bool dual_uniform_ok = true;
  double dual_uniform_defect = 0.0;
  {
    Rng rng(424242);
    for (int t = 0; t < 20; ++t) {
      const int d = 1 + rng.pick(3);
      const int N = 2 + rng.pick(7);
      SpectralProblem p = random_self_adjoint_problem(rng, d, N, 2 * d);
      p.scale = make_uniform_scale(1.0, N);
      // the boundary pair was drawn against the original scale's mu_rho(a);
      // redraw on the unit scale so r = 2d is certain
      const BoundaryPair bc = random_self_adjoint_bc_with_r(rng, d, 2 * d, p.P_at(-1), 1.0);
      p.R = bc.R;
      p.S = bc.S;
      const SpectralResult result = solve_spectrum(p);
      const DualOrthogonality dual = dual_orthogonality_check(p, result);
      dual_uniform_ok = dual_uniform_ok && dual.unit_uniform &&
                        dual.unweighted_form_defect == dual.outer_defect &&
                        dual.max_defect <= tol.dual;
      dual_uniform_defect = std::max(dual_uniform_defect, dual.max_defect);
    }
  }
  report(8,
         a.dual_count > 0 && a.dual <= tol.dual && dual_uniform_ok,
         "dual orthogonality: " + std::to_string(a.dual_count) + " proper problems " +
             defect_str(a.dual, tol.dual) + "; unit-uniform form matches the unweighted one " +
             defect_str(dual_uniform_defect, tol.dual));

  // 9. conversion layer: symplectic identity, pseudo-derivatives for
  //    n in {1,2,3}, Hamiltonian Lagrange identity, Z-system residuals
  {
    SweepOptions hopts;
    hopts.seed = 77007;
    hopts.count = 200;
    const auto hres = run_hamiltonian_sweep(hopts);
    double symp = 0, pseudo = 0, hlag = 0, zsys = 0;
    bool ok = true;
    for (const auto& v : hres) {
      symp = std::max(symp, std::max(v.symplectic_max, v.formula_gap));
      pseudo = std::max(pseudo, v.pseudo_max);
      hlag = std::max(hlag, v.hlagrange_max);
      zsys = std::max(zsys, v.zsystem_max);
      ok = ok && v.pass;
    }
    report(9, ok,
           "conversions on " + std::to_string(hres.size()) +
               " samples: symplectic " + defect_str(symp, tol.symplectic) +
               ", pseudo-derivatives " + defect_str(pseudo, tol.pseudo) + ", Lagrange " +
               defect_str(hlag, tol.hamiltonian_lagrange) + ", Z-system " +
               defect_str(zsys, tol.zsystem));
  }

  // 10. spectral shift covariance under Q -> Q + c omega
  report(10, a.qshift <= tol.qshift,
         "Q-shift covariance " + defect_str(a.qshift, tol.qshift));

  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%s: %d criterion(s) failed, %.1f s total\n",
              g_failures == 0 ? "OK" : "FAILED", g_failures, secs);
  return g_failures == 0 ? 0 : 1;
}
