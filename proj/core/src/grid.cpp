#include "fcoord/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fcoord/errors.hpp"

namespace fcoord {

Grid::Grid(double lo, double hi, bool periodic, double spacing, RealVector nodes,
           RealVector weights)
    : lo_(lo),
      hi_(hi),
      periodic_(periodic),
      spacing_(spacing),
      nodes_(std::move(nodes)),
      weights_(std::move(weights)) {}

int Grid::nearest_index(double x) const noexcept {
  const double t = std::round((x - lo_) / spacing_);
  const double clamped = std::clamp(t, 0.0, static_cast<double>(size() - 1));
  return static_cast<int>(clamped);
}

bool operator==(const Grid& a, const Grid& b) noexcept {
  return a.lo_ == b.lo_ && a.hi_ == b.hi_ && a.periodic_ == b.periodic_ &&
         a.size() == b.size();
}

Grid make_uniform_grid(double lo, double hi, int n, bool periodic) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    throw DomainError("grid requires finite endpoints with hi > lo");
  }
  if (n < Grid::kMinNodes) {
    throw DomainError("grid requires at least " + std::to_string(Grid::kMinNodes) +
                      " nodes, got " + std::to_string(n));
  }
  const double h = periodic ? (hi - lo) / n : (hi - lo) / (n - 1);
  RealVector nodes(n);
  RealVector weights = RealVector::Constant(n, h);
  for (int i = 0; i < n; ++i) {
    nodes[i] = lo + h * i;
  }
  if (!periodic) {
    nodes[n - 1] = hi;
    weights[0] = 0.5 * h;
    weights[n - 1] = 0.5 * h;
  }
  return Grid(lo, hi, periodic, h, std::move(nodes), std::move(weights));
}

OperatorMatrix::OperatorMatrix(ComplexMatrix entries, Grid grid)
    : entries_(std::move(entries)), grid_(std::move(grid)) {
  if (entries_.rows() != entries_.cols()) {
    throw DomainError("operator matrix must be square");
  }
  if (entries_.rows() != grid_.size()) {
    throw DomainError("operator matrix dimension " + std::to_string(entries_.rows()) +
                      " does not match grid size " + std::to_string(grid_.size()));
  }
}

OperatorMatrix OperatorMatrix::from_real(const RealMatrix& entries, Grid grid) {
  return OperatorMatrix(entries.cast<Complex>(), std::move(grid));
}

OperatorMatrix OperatorMatrix::identity(const Grid& grid) {
  return OperatorMatrix(ComplexMatrix::Identity(grid.size(), grid.size()), grid);
}

OperatorMatrix OperatorMatrix::diagonal(const ComplexVector& diag, const Grid& grid) {
  return OperatorMatrix(diag.asDiagonal().toDenseMatrix(), grid);
}

bool OperatorMatrix::is_real() const {
  return (entries_.imag().array() == 0.0).all();
}

ComplexVector OperatorMatrix::apply(const ComplexVector& v) const {
  if (v.size() != entries_.cols()) {
    throw DomainError("vector length does not match operator dimension");
  }
  // Row-wise left-to-right accumulation keeps results independent of BLAS blocking.
  ComplexVector out(entries_.rows());
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    Complex acc = 0.0;
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
      acc += entries_(i, j) * v[j];
    }
    out[i] = acc;
  }
  return out;
}

ComplexVector OperatorMatrix::apply(const RealVector& v) const {
  return apply(ComplexVector(v.cast<Complex>()));
}

OperatorMatrix OperatorMatrix::adjoint() const {
  return OperatorMatrix(entries_.adjoint(), grid_);
}

namespace {

void require_same_grid(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!(a.grid() == b.grid())) {
    throw DomainError("operator matrices live on different grids");
  }
}

}  // namespace

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_grid(a, b);
  return OperatorMatrix(a.entries_ * b.entries_, a.grid_);
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_grid(a, b);
  return OperatorMatrix(a.entries_ + b.entries_, a.grid_);
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  require_same_grid(a, b);
  return OperatorMatrix(a.entries_ - b.entries_, a.grid_);
}

OperatorMatrix operator*(Complex s, const OperatorMatrix& a) {
  return OperatorMatrix(s * a.entries_, a.grid_);
}

double max_norm(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_norm(const ComplexVector& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

double inner_product(const RealVector& f, const RealVector& g, const Grid& grid) {
  if (f.size() != grid.size() || g.size() != grid.size()) {
    throw DomainError("inner_product: sample length does not match grid");
  }
  double acc = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    acc += grid.weight(k) * f[k] * g[k];
  }
  return acc;
}

Complex inner_product(const ComplexVector& f, const ComplexVector& g, const Grid& grid) {
  if (f.size() != grid.size() || g.size() != grid.size()) {
    throw DomainError("inner_product: sample length does not match grid");
  }
  Complex acc = 0.0;
  for (int k = 0; k < grid.size(); ++k) {
    acc += grid.weight(k) * std::conj(f[k]) * g[k];
  }
  return acc;
}

std::vector<int> fft_wavenumbers(int n) {
  std::vector<int> k(n);
  for (int j = 0; j < n; ++j) {
    k[j] = (j < (n + 1) / 2) ? j : j - n;
  }
  return k;
}

RealVector fd_weights(double z, std::span<const double> x, int m) {
  // Fornberg, "Generation of finite difference formulas on arbitrarily spaced grids".
  const int n = static_cast<int>(x.size());
  RealMatrix c = RealMatrix::Zero(n, m + 1);
  double c1 = 1.0;
  double c4 = x[0] - z;
  c(0, 0) = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
        }
        c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
      }
      c(j, 0) = c4 * c(j, 0) / c3;
    }
    c1 = c2;
  }
  return c.col(m);
}

namespace {

constexpr int kMaxFiniteDifferenceOrder = 4;

// First column of the circulant spectral differentiation matrix:
// D(i, j) = c[(i - j) mod n].
ComplexVector spectral_column(const Grid& grid, int q) {
  const int n = grid.size();
  const double kappa = 2.0 * kPi / grid.length();
  const bool has_nyquist = n % 2 == 0;
  ComplexVector c = ComplexVector::Zero(n);
  for (int m = 0; m < n; ++m) {
    Complex acc = 0.0;
    // Modes k and -k are summed together; both terms are real.
    for (int k = 1; k < (n + 1) / 2; ++k) {
      const long reduced = (static_cast<long>(k) * m) % n;
      const double theta = 2.0 * kPi * static_cast<double>(reduced) / n;
      const double amp = std::pow(kappa * k, q);
      if (q % 2 == 0) {
        const double sign = ((q / 2) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * 2.0 * amp * std::cos(theta);
      } else {
        const double sign = (((q + 1) / 2) % 2 == 0) ? 1.0 : -1.0;
        acc += sign * 2.0 * amp * std::sin(theta);
      }
    }
    if (has_nyquist) {
      // k = -n/2: (i kappa k)^q e^{i k x_m} with e^{-i pi m} = (-1)^m.
      acc += std::pow(Complex(0.0, -kappa * (n / 2)), q) * ((m % 2 == 0) ? 1.0 : -1.0);
    }
    c[m] = acc / static_cast<double>(n);
  }
  return c;
}

OperatorMatrix spectral_diff_matrix(const Grid& grid, int q) {
  const int n = grid.size();
  const ComplexVector c = spectral_column(grid, q);
  ComplexMatrix d(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      d(i, j) = c[((i - j) % n + n) % n];
    }
  }
  return OperatorMatrix(std::move(d), grid);
}

struct Stencil {
  int start = 0;
  RealVector weights;
};

Stencil stencil_row(const Grid& grid, int i, int q) {
  const int n = grid.size();
  const int half = (q + 3) / 2;
  const int centered = 2 * half + 1;
  const int one_sided = q + 4;
  Stencil s;
  int width = 0;
  if (i - half >= 0 && i + half <= n - 1) {
    s.start = i - half;
    width = centered;
  } else {
    width = one_sided;
    s.start = std::clamp(i - width / 2, 0, n - width);
  }
  std::vector<double> offsets(width);
  for (int k = 0; k < width; ++k) {
    offsets[k] = static_cast<double>(s.start + k - i);
  }
  s.weights = fd_weights(0.0, offsets, q) * std::pow(grid.spacing(), -q);
  return s;
}

OperatorMatrix finite_difference_matrix(const Grid& grid, int q) {
  const int n = grid.size();
  RealMatrix d = RealMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Stencil s = stencil_row(grid, i, q);
    for (int k = 0; k < s.weights.size(); ++k) {
      d(i, s.start + k) = s.weights[k];
    }
  }
  return OperatorMatrix::from_real(d, grid);
}

void check_order(const Grid& grid, int q) {
  if (q < 1) {
    throw DomainError("differentiation requires q >= 1");
  }
  if (!grid.periodic() && q > kMaxFiniteDifferenceOrder) {
    throw UnsupportedOrderError("non-periodic differentiation supports q <= 4, got " +
                                std::to_string(q));
  }
}

}  // namespace

OperatorMatrix diff_matrix(const Grid& grid, int q) {
  check_order(grid, q);
  return grid.periodic() ? spectral_diff_matrix(grid, q) : finite_difference_matrix(grid, q);
}

RealVector differentiate_samples(const Grid& grid, const RealVector& samples, int q) {
  check_order(grid, q);
  const int n = grid.size();
  if (samples.size() != n) {
    throw DomainError("differentiate_samples: sample length does not match grid");
  }
  RealVector out(n);
  if (grid.periodic()) {
    const ComplexVector c = spectral_column(grid, q);
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        acc += c[((i - j) % n + n) % n].real() * samples[j];
      }
      out[i] = acc;
    }
    return out;
  }
  for (int i = 0; i < n; ++i) {
    const Stencil s = stencil_row(grid, i, q);
    double acc = 0.0;
    for (int k = 0; k < s.weights.size(); ++k) {
      acc += s.weights[k] * samples[s.start + k];
    }
    out[i] = acc;
  }
  return out;
}

}  // namespace fcoord
