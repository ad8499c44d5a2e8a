#include "fcoord/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>

#include "fcoord/errors.hpp"

namespace fcoord {

LocalOperator::LocalOperator(std::map<int, ScalarFunction> terms) : terms_(std::move(terms)) {
  for (const auto& [q, a] : terms_) {
    if (q < 0) {
      throw DomainError("negative operator order");
    }
    if (q > kMaxOrder) {
      throw UnsupportedOrderError("local operators are limited to order " +
                                  std::to_string(kMaxOrder) + ", got " + std::to_string(q));
    }
  }
}

LocalOperator LocalOperator::derivative(int q) {
  return LocalOperator({{q, ScalarFunction::constant(1.0)}});
}

LocalOperator LocalOperator::multiplication(ScalarFunction a0) {
  return LocalOperator({{0, std::move(a0)}});
}

OperatorMatrix to_matrix(const LocalOperator& op, const Grid& grid) {
  const int n = grid.size();
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (const auto& [q, a] : op.terms()) {
    ComplexVector coeff(n);
    for (int i = 0; i < n; ++i) {
      coeff[i] = a(grid.node(i));
    }
    if (q == 0) {
      out.diagonal() += coeff;
    } else {
      out += coeff.asDiagonal() * diff_matrix(grid, q).entries();
    }
  }
  return OperatorMatrix(std::move(out), grid);
}

Conjugation conjugate(const OperatorMatrix& A, const OperatorMatrix& W, double threshold) {
  if (!(A.grid() == W.grid())) {
    throw DomainError("conjugation needs operator and transform on the same grid");
  }
  Inverse inv = invert(W, threshold);
  return {inv.matrix * A * W, inv.report};
}

double intertwining_residual(const OperatorMatrix& A, const OperatorMatrix& W,
                             const OperatorMatrix& B) {
  return max_norm(ComplexMatrix(A.entries() * W.entries() - W.entries() * B.entries()));
}

Metric::Metric(OperatorMatrix matrix) : matrix_(std::move(matrix)) {
  const ComplexMatrix& g = matrix_.entries();
  const double scale = max_norm(g);
  if (scale == 0.0) {
    throw MetricDegeneracyError("zero metric");
  }
  const double asym = max_norm(ComplexMatrix(g - g.adjoint()));
  if (asym > 1e-12 * scale) {
    throw MetricDegeneracyError("metric is not Hermitian (deviation " + std::to_string(asym) +
                                ")");
  }
  const ComplexMatrix herm = 0.5 * (g + g.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  min_eigenvalue_ = solver.eigenvalues().minCoeff();
  max_eigenvalue_ = solver.eigenvalues().maxCoeff();
  if (!(min_eigenvalue_ > 0.0)) {
    throw MetricDegeneracyError("metric is not positive definite (smallest eigenvalue " +
                                std::to_string(min_eigenvalue_) + ")");
  }
}

Metric Metric::identity(const Grid& grid) { return Metric(OperatorMatrix::identity(grid)); }

Metric transform_metric(const Metric& G, const OperatorMatrix& W) {
  if (G.matrix().size() != W.size()) {
    throw DomainError("metric and transform dimensions differ");
  }
  const ComplexMatrix raw = W.entries().adjoint() * G.matrix().entries() * W.entries();
  const ComplexMatrix herm = 0.5 * (raw + raw.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  const double lo = solver.eigenvalues().minCoeff();
  const double hi = solver.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || lo <= 1e-12 * hi) {
    throw MetricDegeneracyError("transformed metric is degenerate (eigenvalues in [" +
                                std::to_string(lo) + ", " + std::to_string(hi) + "])");
  }
  return Metric(OperatorMatrix(herm, G.matrix().grid()));
}

Complex metric_inner_product(const Metric& G, const ComplexVector& phi, const ComplexVector& psi) {
  if (phi.size() != G.matrix().size() || psi.size() != G.matrix().size()) {
    throw DomainError("vector length does not match metric");
  }
  return phi.dot(G.matrix().entries() * psi);
}

double locality_score(const OperatorMatrix& A, int bandwidth) {
  if (bandwidth < 0) {
    throw DomainError("bandwidth must be nonnegative");
  }
  const int n = A.size();
  const bool periodic = A.grid().periodic();
  double inside = 0.0;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double mass = std::norm(A(i, j));
      int d = std::abs(i - j);
      if (periodic) {
        d = std::min(d, n - d);
      }
      total += mass;
      if (d <= bandwidth) {
        inside += mass;
      }
    }
  }
  return total == 0.0 ? 1.0 : inside / total;
}

ComplexVector sorted_eigenvalues(const OperatorMatrix& A) {
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(A.entries(), false);
  if (solver.info() != Eigen::Success) {
    throw EvaluationError("eigenvalue iteration did not converge");
  }
  std::vector<Complex> values(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(values.begin(), values.end(), [](Complex l, Complex r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
  return Eigen::Map<ComplexVector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

double spectrum_distance(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) {
    throw DomainError("spectra have different sizes");
  }
  std::vector<bool> used(b.size(), false);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    Eigen::Index best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < b.size(); ++j) {
      if (!used[j] && std::abs(a[i] - b[j]) < best_d) {
        best_d = std::abs(a[i] - b[j]);
        best = j;
      }
    }
    used[best] = true;
    worst = std::max(worst, best_d);
  }
  return worst;
}

}  // namespace fcoord
