#pragma once

#include <map>

#include "fcoord/grid.hpp"
#include "fcoord/kernels.hpp"
#include "fcoord/scalar_function.hpp"

namespace fcoord {

/// Differential operator sum_q a_q(x) D^q with q <= 4.
class LocalOperator {
 public:
  static constexpr int kMaxOrder = 4;

  LocalOperator() = default;
  /// Throws DomainError for q < 0 and UnsupportedOrderError for q > 4.
  explicit LocalOperator(std::map<int, ScalarFunction> terms);

  /// D^q with unit coefficient.
  static LocalOperator derivative(int q);
  static LocalOperator multiplication(ScalarFunction a0);

  const std::map<int, ScalarFunction>& terms() const noexcept { return terms_; }
  int order() const noexcept { return terms_.empty() ? 0 : terms_.rbegin()->first; }

 private:
  std::map<int, ScalarFunction> terms_;
};

/// sum_q diag(a_q(x_i)) * diff_matrix(grid, q); q = 0 contributes diag(a_0).
OperatorMatrix to_matrix(const LocalOperator& op, const Grid& grid);

struct Conjugation {
  OperatorMatrix matrix;
  ConditionReport report;
};

/// invert(W) * A * W with the report of the inversion.
Conjugation conjugate(const OperatorMatrix& A, const OperatorMatrix& W,
                      double threshold = kDefaultThreshold);

/// ||A W - W B||_max
double intertwining_residual(const OperatorMatrix& A, const OperatorMatrix& W,
                             const OperatorMatrix& B);

/// Hermitian positive definite matrix defining an inner product.
class Metric {
 public:
  /// Throws MetricDegeneracyError unless the matrix is Hermitian to 1e-12
  /// (relative to its largest entry) with a positive smallest eigenvalue.
  explicit Metric(OperatorMatrix matrix);

  static Metric identity(const Grid& grid);

  const OperatorMatrix& matrix() const noexcept { return matrix_; }
  double min_eigenvalue() const noexcept { return min_eigenvalue_; }
  double max_eigenvalue() const noexcept { return max_eigenvalue_; }

 private:
  OperatorMatrix matrix_;
  double min_eigenvalue_ = 0.0;
  double max_eigenvalue_ = 0.0;
};

/// adjoint(W) * G * W. Throws MetricDegeneracyError when the result is
/// indefinite or singular (smallest eigenvalue <= 1e-12 * largest).
Metric transform_metric(const Metric& G, const OperatorMatrix& W);

/// conj(phi)^T G psi
Complex metric_inner_product(const Metric& G, const ComplexVector& phi, const ComplexVector& psi);

/// Fraction of squared Frobenius mass with |i - j| <= bandwidth (periodic
/// distance on periodic grids). The zero matrix scores 1.
double locality_score(const OperatorMatrix& A, int bandwidth);

/// Eigenvalues sorted by (real, imaginary).
ComplexVector sorted_eigenvalues(const OperatorMatrix& A);

/// Largest distance in a greedy nearest-neighbour matching of two spectra
/// taken as multisets. Throws DomainError on size mismatch.
double spectrum_distance(const ComplexVector& a, const ComplexVector& b);

}  // namespace fcoord
