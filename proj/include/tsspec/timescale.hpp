#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "tsspec/matrixkit.hpp"

namespace tsspec {

/// A finite isolated time scale: strictly increasing points
/// t_{-1} < t_0 < ... < t_N with a = t_0 and b = t_{N-1}, so t_{-1} = rho(a)
/// and t_N = sigma(b). N is the number of interior points and must be >= 2.
class IsolatedTimeScale {
 public:
  explicit IsolatedTimeScale(std::vector<double> points);

  int N() const { return static_cast<int>(points_.size()) - 2; }

  /// Point at global index i in [-1, N].
  double t(int i) const;

  /// Forward graininess sigma(t_i) - t_i, defined for i in [-1, N-1].
  double mu_sigma(int i) const;

  /// Backward graininess t_i - rho(t_i), defined for i in [0, N].
  double mu_rho(int i) const;

  double a() const { return points_[1]; }
  double b() const { return points_[points_.size() - 2]; }
  double rho_a() const { return points_.front(); }
  double sigma_b() const { return points_.back(); }

  const std::vector<double>& points() const { return points_; }

  bool operator==(const IsolatedTimeScale& other) const = default;

 private:
  std::vector<double> points_;  // size N + 2, index i stored at i + 1
};

using ScaleRef = std::shared_ptr<const IsolatedTimeScale>;

/// Uniform scale with step h; a = start, so points run from start - h.
ScaleRef make_uniform_scale(double h, int N, double start = 0.0);

/// Quantum scale t_k = t0 * q^k for k in [-1, N]; requires the resulting
/// points to be strictly increasing.
ScaleRef make_q_scale(double q, double t0, int N);

/// Explicit point list; the declared N must match size - 2.
ScaleRef make_explicit_scale(std::vector<double> points, int N);
ScaleRef make_explicit_scale(std::vector<double> points);

/// Seeded random scale with graininess in [0.5, 2] and a = 0.
ScaleRef make_random_scale(std::uint64_t seed, int N);

/// A C^{rows x cols}-valued function on a window [lo, hi] of grid indices.
/// cols == 1 for vector-valued functions; matrix-valued solutions use
/// cols == rows.
class GridFunction {
 public:
  GridFunction() = default;
  GridFunction(ScaleRef scale, int lo, int hi, int rows, int cols = 1);
  static GridFunction from_values(ScaleRef scale, int lo, std::vector<CMatrix> values);

  const IsolatedTimeScale& scale() const { return *scale_; }
  const ScaleRef& scale_ptr() const { return scale_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  int length() const { return hi_ - lo_ + 1; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool covers(int lo, int hi) const { return lo_ <= lo && hi <= hi_; }

  CMatrix& at(int i);
  const CMatrix& at(int i) const;

  GridFunction restricted(int lo, int hi) const;

  /// Composition with the backward jump: (x^rho)(t_i) = x(t_{i-1}), window
  /// shifts right by one (clipped at the last scale index).
  GridFunction shifted_rho() const;

  /// Sup over the window of the per-point Frobenius norm.
  double sup_norm() const;

 private:
  ScaleRef scale_;
  int lo_ = 0, hi_ = -1;
  int rows_ = 0, cols_ = 0;
  std::vector<CMatrix> values_;
};

/// Forward difference quotient; result lives on [lo, hi-1].
GridFunction delta(const GridFunction& x);

/// Backward difference quotient; result lives on [lo+1, hi].
GridFunction nabla(const GridFunction& x);

/// Nabla integral over (lo, hi]: sum of f(t_k) mu_rho(t_k).
CMatrix nabla_integral(const GridFunction& f, int lo, int hi);

enum class Deriv { Delta, Nabla };

/// Left-fold application of delta/nabla in the order given.
GridFunction iterated_derivative(const GridFunction& x, std::span<const Deriv> word);

// Window-intersecting pointwise arithmetic.
GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(Complex s, const GridFunction& x);

/// Per-point matrix product A(t) * x(t) on the intersected window.
GridFunction mmul(const GridFunction& A, const GridFunction& x);

/// Stacks values over [lo, hi] into one column vector (cols must be 1).
CVector stack_window(const GridFunction& x, int lo, int hi);

/// Inverse of stack_window over [lo, hi].
GridFunction unstack_window(ScaleRef scale, int lo, int hi, int rows, const CVector& v);

/// Sup norm of a - b over the intersection of their windows.
double sup_difference(const GridFunction& a, const GridFunction& b);

}  // namespace tsspec
