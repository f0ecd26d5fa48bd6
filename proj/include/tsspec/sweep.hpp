#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsspec/random_problems.hpp"
#include "tsspec/spectral.hpp"

namespace tsspec {

/// Per-check thresholds, pinned to the contractual values. Residuals are
/// stored relative to their natural scales, so each entry compares directly
/// against the matching field of ProblemVerification.
struct VerifyTolerances {
  double lagrange = 1e-11;
  double operator_hermiticity = 1e-10;
  double selfadjoint_pairs = 1e-10;
  double gram = 1e-10;
  double eigen_residual = 1e-9;
  double oracle = 1e-9;
  double completeness = 1e-10;
  double parseval = 1e-10;
  double resolution = 1e-10;
  double projector = 1e-10;
  double elambda = 1e-10;
  double dual = 1e-9;
  double qshift = 1e-10;
  double symplectic = 1e-11;
  double zsystem = 1e-11;
  double conversion_consistency = 1e-10;
  double pseudo = 1e-11;
  double hamiltonian_lagrange = 1e-11;
};

struct SweepOptions {
  std::uint64_t seed = 42;
  int count = 50;
  int d = 0;  // 0 = mixed over {1, 2, 3}
  int N = 0;  // 0 = mixed over {2, ..., 8}
  int lagrange_pairs = 5;        // arbitrary-pair Lagrange checks per problem
  int admissible_samples = 10;   // expansion/Parseval probes per problem
  int threads = 0;               // 0 = OpenMP default, 1 = strictly serial
  VerifyTolerances tol;
};

/// Every identity the library asserts about one random problem, as measured
/// defects (each already divided by its natural scale).
struct ProblemVerification {
  int index = 0;
  std::uint64_t seed = 0;
  int d = 0, N = 0, r = 0, m = 0;
  std::string scale_kind;
  bool dimension_ok = false;
  double lagrange_max = 0.0;
  double operator_hermiticity = 0.0;
  double closure_residual = 0.0;
  double selfadjoint_pairs_max = 0.0;
  double gram_defect = 0.0;
  double eigen_residual_max = 0.0;
  double oracle_max = 0.0;
  double completeness_max = 0.0;
  double parseval_max = 0.0;
  double resolution_defect = 0.0;
  double projector_defect = 0.0;
  double elambda_defect = 0.0;
  bool dual_applicable = false;
  double dual_gram = 0.0;
  double dual_outer = 0.0;
  double qshift_max = 0.0;
  bool pass = false;
  std::vector<std::string> failures;
};

/// Runs the whole check battery on one given problem; rng drives the random
/// probe functions, so results are deterministic in the rng seed.
ProblemVerification verify_problem_instance(const SpectralProblem& p, Rng& rng,
                                            const SweepOptions& opts);

/// One fully verified random problem; deterministic in (options.seed, index).
ProblemVerification verify_one_problem(const SweepOptions& opts, int index);

/// Plain-loop reference driver.
std::vector<ProblemVerification> run_problem_sweep_serial(const SweepOptions& opts);

/// OpenMP driver; bit-identical results to the serial reference, ordered by
/// problem index.
std::vector<ProblemVerification> run_problem_sweep(const SweepOptions& opts);

/// The conversion-layer checks on one random sample: symplectic
/// identity, Z-system residual, symplectic propagation vs the direct
/// recursion, pseudo-derivative relations for n in {1, 2, 3}, and the
/// Hamiltonian Lagrange identity.
struct HamiltonianVerification {
  int index = 0;
  std::uint64_t seed = 0;
  int n = 0, N = 0;
  double symplectic_max = 0.0;
  double formula_gap = 0.0;
  double zsystem_max = 0.0;
  double conversion_consistency = 0.0;
  double pseudo_max = 0.0;
  double hlagrange_max = 0.0;
  bool pass = false;
  std::vector<std::string> failures;
};

HamiltonianVerification verify_one_hamiltonian(const SweepOptions& opts, int index);
std::vector<HamiltonianVerification> run_hamiltonian_sweep_serial(const SweepOptions& opts);
std::vector<HamiltonianVerification> run_hamiltonian_sweep(const SweepOptions& opts);

}  // namespace tsspec
