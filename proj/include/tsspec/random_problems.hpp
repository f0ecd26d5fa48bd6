#pragma once

#include <cstdint>
#include <optional>
#include <random>

#include "tsspec/hamiltonian.hpp"
#include "tsspec/problem.hpp"

namespace tsspec {

/// Deterministic RNG with portable uniform doubles (53-bit mantissa draws,
/// no distribution objects), so identical seeds give identical problems on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }
  std::uint64_t bits() { return gen_(); }
  int pick(int count) { return static_cast<int>(gen_() % static_cast<std::uint64_t>(count)); }
  Complex entry() { return Complex(uniform(-1.0, 1.0), uniform(-1.0, 1.0)); }

 private:
  std::mt19937_64 gen_;
};

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

CMatrix random_complex_matrix(Rng& rng, int rows, int cols);
CMatrix random_unitary(Rng& rng, int d);

/// U diag(spectrum) U* with the spectrum drawn uniformly from [lo, hi].
CMatrix random_hermitian(Rng& rng, int d, double lo, double hi);

/// Hermitian with eigenvalue magnitudes in [0.5, 2] and random signs
/// (invertible but generally indefinite).
CMatrix random_invertible_hermitian(Rng& rng, int d);

/// Hermitian of exact rank `rank` with nonzero eigenvalue magnitudes in
/// [0.5, 2].
CMatrix random_hermitian_of_rank(Rng& rng, int d, int rank);

/// Mixed-kind scale: uniform, quantum, or random-graininess.
ScaleRef random_scale(Rng& rng, int N, std::string* kind_out = nullptr);

struct BoundaryPair {
  CMatrix R, S;
};

/// Self-adjoint (R, S) with rank(R, S) = 2d: S invertible and R = K S^{-*}
/// for Hermitian K, which gives SR* = K = RS*.
BoundaryPair random_self_adjoint_bc(Rng& rng, int d);

/// Self-adjoint (R, S) realizing a prescribed r = rank(Gamma): separable
/// conditions whose a-side and b-side contribute ranks r_a + r_b = r.
/// Needs the problem's P^rho(a) and mu_rho(a).
BoundaryPair random_self_adjoint_bc_with_r(Rng& rng, int d, int target_r,
                                           const CMatrix& P_rho_a, double mu_rho_a);

/// Full random problem satisfying every standing hypothesis, with
/// self-adjoint boundary conditions; target_r picks the Gamma rank
/// (defaults to a random value in {0, ..., 2d}).
SpectralProblem random_self_adjoint_problem(Rng& rng, int d, int N,
                                            std::optional<int> target_r = std::nullopt,
                                            std::string* scale_kind = nullptr);

/// Hamiltonian nabla system with Hermitian B, C and A scaled to keep
/// I - mu_rho A* comfortably invertible on the window [0, N].
HamiltonianSystem random_hamiltonian_system(Rng& rng, int n, ScaleRef scale);

GridFunction random_grid_function(Rng& rng, ScaleRef scale, int lo, int hi, int rows,
                                  int cols = 1);

}  // namespace tsspec
