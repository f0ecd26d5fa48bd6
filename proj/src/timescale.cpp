#include "tsspec/timescale.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace tsspec {

IsolatedTimeScale::IsolatedTimeScale(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 4) {
    throw InvalidParameter("time scale needs at least 4 points (N >= 2), got " +
                           std::to_string(points_.size()));
  }
  for (size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i])) {
      throw InvalidParameter("time scale point " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && points_[i] <= points_[i - 1]) {
      throw InvalidParameter("time scale points must be strictly increasing at position " +
                             std::to_string(i));
    }
  }
}

double IsolatedTimeScale::t(int i) const {
  if (i < -1 || i > N()) {
    throw InvalidParameter("time scale index " + std::to_string(i) + " out of [-1, N]");
  }
  return points_[static_cast<size_t>(i + 1)];
}

double IsolatedTimeScale::mu_sigma(int i) const {
  if (i < -1 || i > N() - 1) {
    throw InvalidParameter("mu_sigma index " + std::to_string(i) + " out of [-1, N-1]");
  }
  return points_[static_cast<size_t>(i + 2)] - points_[static_cast<size_t>(i + 1)];
}

double IsolatedTimeScale::mu_rho(int i) const {
  if (i < 0 || i > N()) {
    throw InvalidParameter("mu_rho index " + std::to_string(i) + " out of [0, N]");
  }
  return points_[static_cast<size_t>(i + 1)] - points_[static_cast<size_t>(i)];
}

ScaleRef make_uniform_scale(double h, int N, double start) {
  if (!(h > 0.0) || N < 2) {
    throw InvalidParameter("uniform scale requires h > 0 and N >= 2");
  }
  std::vector<double> pts(static_cast<size_t>(N) + 2);
  for (int k = -1; k <= N; ++k) pts[static_cast<size_t>(k + 1)] = start + h * k;
  return std::make_shared<IsolatedTimeScale>(std::move(pts));
}

ScaleRef make_q_scale(double q, double t0, int N) {
  if (!(q > 0.0) || q == 1.0 || t0 == 0.0 || N < 2) {
    throw InvalidParameter("q-scale requires q > 0, q != 1, t0 != 0, N >= 2");
  }
  std::vector<double> pts(static_cast<size_t>(N) + 2);
  for (int k = -1; k <= N; ++k) pts[static_cast<size_t>(k + 1)] = t0 * std::pow(q, k);
  return std::make_shared<IsolatedTimeScale>(std::move(pts));  // rejects non-increasing lists
}

ScaleRef make_explicit_scale(std::vector<double> points, int N) {
  if (static_cast<int>(points.size()) != N + 2) {
    throw InvalidParameter("explicit scale with N = " + std::to_string(N) + " needs " +
                           std::to_string(N + 2) + " points, got " +
                           std::to_string(points.size()));
  }
  return std::make_shared<IsolatedTimeScale>(std::move(points));
}

ScaleRef make_explicit_scale(std::vector<double> points) {
  return std::make_shared<IsolatedTimeScale>(std::move(points));
}

ScaleRef make_random_scale(std::uint64_t seed, int N) {
  if (N < 2) throw InvalidParameter("random scale requires N >= 2");
  std::mt19937_64 gen(seed);
  auto draw = [&gen] {
    // uniform in [0.5, 2.0), built from the top 53 bits for portability
    const double u = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    return 0.5 + 1.5 * u;
  };
  std::vector<double> pts(static_cast<size_t>(N) + 2);
  pts[1] = 0.0;
  pts[0] = -draw();
  for (int k = 1; k <= N; ++k) pts[static_cast<size_t>(k + 1)] = pts[static_cast<size_t>(k)] + draw();
  return std::make_shared<IsolatedTimeScale>(std::move(pts));
}

GridFunction::GridFunction(ScaleRef scale, int lo, int hi, int rows, int cols)
    : scale_(std::move(scale)), lo_(lo), hi_(hi), rows_(rows), cols_(cols) {
  if (!scale_) throw InvalidParameter("grid function needs a scale");
  if (lo_ < -1 || hi_ > scale_->N() || lo_ > hi_) {
    throw WindowMismatch("grid function window [" + std::to_string(lo_) + ", " +
                         std::to_string(hi_) + "] invalid for N = " + std::to_string(scale_->N()));
  }
  if (rows_ <= 0 || cols_ <= 0) throw InvalidParameter("grid function dimension must be positive");
  values_.assign(static_cast<size_t>(length()), CMatrix::Zero(rows_, cols_));
}

GridFunction GridFunction::from_values(ScaleRef scale, int lo, std::vector<CMatrix> values) {
  if (values.empty()) throw InvalidParameter("from_values: empty value list");
  GridFunction out(std::move(scale), lo, lo + static_cast<int>(values.size()) - 1,
                   static_cast<int>(values.front().rows()),
                   static_cast<int>(values.front().cols()));
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i].rows() != out.rows_ || values[i].cols() != out.cols_) {
      throw InvalidParameter("from_values: inconsistent value dimensions");
    }
    out.values_[i] = std::move(values[i]);
  }
  return out;
}

CMatrix& GridFunction::at(int i) {
  if (i < lo_ || i > hi_) {
    throw WindowMismatch("grid index " + std::to_string(i) + " outside window [" +
                         std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
  }
  return values_[static_cast<size_t>(i - lo_)];
}

const CMatrix& GridFunction::at(int i) const {
  if (i < lo_ || i > hi_) {
    throw WindowMismatch("grid index " + std::to_string(i) + " outside window [" +
                         std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
  }
  return values_[static_cast<size_t>(i - lo_)];
}

GridFunction GridFunction::restricted(int lo, int hi) const {
  if (!covers(lo, hi)) {
    throw WindowMismatch("restriction [" + std::to_string(lo) + ", " + std::to_string(hi) +
                         "] outside [" + std::to_string(lo_) + ", " + std::to_string(hi_) + "]");
  }
  GridFunction out(scale_, lo, hi, rows_, cols_);
  for (int i = lo; i <= hi; ++i) out.at(i) = at(i);
  return out;
}

GridFunction GridFunction::shifted_rho() const {
  const int new_hi = std::min(hi_ + 1, scale_->N());
  GridFunction out(scale_, lo_ + 1, new_hi, rows_, cols_);
  for (int i = lo_ + 1; i <= new_hi; ++i) out.at(i) = at(i - 1);
  return out;
}

double GridFunction::sup_norm() const {
  double m = 0.0;
  for (const CMatrix& v : values_) m = std::max(m, v.norm());
  return m;
}

GridFunction delta(const GridFunction& x) {
  if (x.length() < 2) throw WindowTooSmall("delta needs a window of length >= 2");
  GridFunction out(x.scale_ptr(), x.lo(), x.hi() - 1, x.rows(), x.cols());
  for (int i = x.lo(); i <= x.hi() - 1; ++i) {
    out.at(i) = (x.at(i + 1) - x.at(i)) / x.scale().mu_sigma(i);
  }
  return out;
}

GridFunction nabla(const GridFunction& x) {
  if (x.length() < 2) throw WindowTooSmall("nabla needs a window of length >= 2");
  GridFunction out(x.scale_ptr(), x.lo() + 1, x.hi(), x.rows(), x.cols());
  for (int i = x.lo() + 1; i <= x.hi(); ++i) {
    out.at(i) = (x.at(i) - x.at(i - 1)) / x.scale().mu_rho(i);
  }
  return out;
}

CMatrix nabla_integral(const GridFunction& f, int lo, int hi) {
  if (lo > hi) throw WindowMismatch("nabla_integral: lo > hi");
  if (!f.covers(lo + 1, hi)) {
    throw WindowMismatch("nabla_integral: integrand does not cover (" + std::to_string(lo) +
                         ", " + std::to_string(hi) + "]");
  }
  CMatrix acc = CMatrix::Zero(f.rows(), f.cols());
  for (int k = lo + 1; k <= hi; ++k) acc += f.at(k) * f.scale().mu_rho(k);
  return acc;
}

GridFunction iterated_derivative(const GridFunction& x, std::span<const Deriv> word) {
  GridFunction cur = x;
  for (Deriv d : word) {
    cur = (d == Deriv::Delta) ? delta(cur) : nabla(cur);
  }
  return cur;
}

namespace {
std::pair<int, int> intersect(const GridFunction& a, const GridFunction& b, const char* what) {
  const int lo = std::max(a.lo(), b.lo());
  const int hi = std::min(a.hi(), b.hi());
  if (lo > hi) throw WindowMismatch(std::string(what) + ": windows do not overlap");
  return {lo, hi};
}
}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  auto [lo, hi] = intersect(a, b, "operator+");
  GridFunction out(a.scale_ptr(), lo, hi, a.rows(), a.cols());
  for (int i = lo; i <= hi; ++i) out.at(i) = a.at(i) + b.at(i);
  return out;
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  auto [lo, hi] = intersect(a, b, "operator-");
  GridFunction out(a.scale_ptr(), lo, hi, a.rows(), a.cols());
  for (int i = lo; i <= hi; ++i) out.at(i) = a.at(i) - b.at(i);
  return out;
}

GridFunction operator*(Complex s, const GridFunction& x) {
  GridFunction out(x.scale_ptr(), x.lo(), x.hi(), x.rows(), x.cols());
  for (int i = x.lo(); i <= x.hi(); ++i) out.at(i) = s * x.at(i);
  return out;
}

GridFunction mmul(const GridFunction& A, const GridFunction& x) {
  auto [lo, hi] = intersect(A, x, "mmul");
  if (A.cols() != x.rows()) throw InvalidParameter("mmul: inner dimension mismatch");
  GridFunction out(x.scale_ptr(), lo, hi, A.rows(), x.cols());
  for (int i = lo; i <= hi; ++i) out.at(i) = A.at(i) * x.at(i);
  return out;
}

CVector stack_window(const GridFunction& x, int lo, int hi) {
  if (x.cols() != 1) throw InvalidParameter("stack_window: vector-valued function required");
  if (!x.covers(lo, hi)) throw WindowMismatch("stack_window: window not covered");
  CVector v(static_cast<Eigen::Index>(hi - lo + 1) * x.rows());
  for (int i = lo; i <= hi; ++i) {
    v.segment(static_cast<Eigen::Index>(i - lo) * x.rows(), x.rows()) = x.at(i);
  }
  return v;
}

GridFunction unstack_window(ScaleRef scale, int lo, int hi, int rows, const CVector& v) {
  GridFunction out(std::move(scale), lo, hi, rows, 1);
  if (v.size() != static_cast<Eigen::Index>(hi - lo + 1) * rows) {
    throw WindowMismatch("unstack_window: size mismatch");
  }
  for (int i = lo; i <= hi; ++i) {
    out.at(i) = v.segment(static_cast<Eigen::Index>(i - lo) * rows, rows);
  }
  return out;
}

double sup_difference(const GridFunction& a, const GridFunction& b) {
  auto [lo, hi] = intersect(a, b, "sup_difference");
  double m = 0.0;
  for (int i = lo; i <= hi; ++i) m = std::max(m, (a.at(i) - b.at(i)).norm());
  return m;
}

}  // namespace tsspec
