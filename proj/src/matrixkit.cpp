#include "tsspec/matrixkit.hpp"

#include <string>

namespace tsspec {

namespace {
constexpr double kCondRelTol = 1e-12;  // s_min below this fraction of s_max is singular
}

bool all_finite(const CMatrix& A) {
  return A.allFinite();
}

HermitianEigen hermitian_eigendecompose(const CMatrix& A, double tol) {
  if (A.rows() != A.cols()) {
    throw NotSquare("hermitian_eigendecompose: matrix is " + std::to_string(A.rows()) +
                    "x" + std::to_string(A.cols()));
  }
  const double asym = (A - A.adjoint()).norm();
  const double scale = std::max(A.norm(), 1.0);
  if (asym > tol * scale) {
    throw NotHermitian("hermitian_eigendecompose: asymmetry " + std::to_string(asym) +
                       " exceeds tol*scale");
  }
  const CMatrix H = 0.5 * (A + A.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(H);
  if (es.info() != Eigen::Success) {
    throw ConvergenceFailure("hermitian_eigendecompose: solver did not converge");
  }
  HermitianEigen out;
  out.eigenvalues = es.eigenvalues();
  out.eigenvectors = es.eigenvectors();
  out.asymmetry = asym;
  return out;
}

SvdResult svd(const CMatrix& A) {
  if (A.size() == 0) {
    throw InvalidParameter("svd: empty matrix");
  }
  Eigen::JacobiSVD<CMatrix> solver(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult out;
  out.U = solver.matrixU();
  out.singular_values = solver.singularValues();
  out.V = solver.matrixV();
  return out;
}

Eigen::Index rank_with_tolerance(const CMatrix& A, double rel_tol, double abs_floor) {
  const SvdResult s = svd(A);
  if (s.singular_values.size() == 0) return 0;
  const double cutoff = std::max(rel_tol * s.singular_values(0), abs_floor);
  Eigen::Index r = 0;
  for (Eigen::Index i = 0; i < s.singular_values.size(); ++i) {
    if (s.singular_values(i) > cutoff) ++r;
  }
  return r;
}

CMatrix null_space_basis(const CMatrix& A, double rel_tol) {
  const SvdResult s = svd(A);
  Eigen::Index r = 0;
  if (s.singular_values.size() > 0) {
    const double cutoff = rel_tol * s.singular_values(0);
    for (Eigen::Index i = 0; i < s.singular_values.size(); ++i) {
      if (s.singular_values(i) > cutoff) ++r;
    }
  }
  return s.V.rightCols(A.cols() - r);
}

CMatrix solve_linear(const CMatrix& A, const CMatrix& B) {
  if (A.rows() != A.cols()) {
    throw NotSquare("solve_linear: matrix is " + std::to_string(A.rows()) + "x" +
                    std::to_string(A.cols()));
  }
  if (A.rows() != B.rows()) {
    throw InvalidParameter("solve_linear: rhs row count mismatch");
  }
  Eigen::JacobiSVD<CMatrix> solver(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& sv = solver.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0 || sv(sv.size() - 1) <= kCondRelTol * sv(0)) {
    throw Singular("solve_linear: condition estimate exceeds threshold");
  }
  return solver.solve(B);
}

}  // namespace tsspec
