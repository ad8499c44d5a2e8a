#pragma once

#include <span>
#include <vector>

#include "fcoord/types.hpp"

namespace fcoord {

/// Uniform one-dimensional grid with quadrature weights.
///
/// Periodic grids exclude the right endpoint and carry equal (rectangle-rule)
/// weights; non-periodic grids include both endpoints and carry trapezoid
/// weights. Grids are immutable once built.
class Grid {
 public:
  static constexpr int kMinNodes = 8;

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  int size() const noexcept { return static_cast<int>(nodes_.size()); }
  bool periodic() const noexcept { return periodic_; }
  double spacing() const noexcept { return spacing_; }
  double length() const noexcept { return hi_ - lo_; }

  const RealVector& nodes() const noexcept { return nodes_; }
  const RealVector& weights() const noexcept { return weights_; }
  double node(int i) const { return nodes_[i]; }
  double weight(int i) const { return weights_[i]; }

  /// True when x lies strictly between lo and hi.
  bool contains_strictly(double x) const noexcept { return x > lo_ && x < hi_; }

  /// Index of the node nearest to x (clamped to the grid).
  int nearest_index(double x) const noexcept;

  friend bool operator==(const Grid& a, const Grid& b) noexcept;

 private:
  friend Grid make_uniform_grid(double lo, double hi, int n, bool periodic);
  Grid(double lo, double hi, bool periodic, double spacing, RealVector nodes,
       RealVector weights);

  double lo_;
  double hi_;
  bool periodic_;
  double spacing_;
  RealVector nodes_;
  RealVector weights_;
};

/// Builds a uniform grid. Throws DomainError for n < 8 or hi <= lo.
Grid make_uniform_grid(double lo, double hi, int n, bool periodic);

/// Dense square matrix of a discretized operator, tied to the grid it acts on.
class OperatorMatrix {
 public:
  OperatorMatrix(ComplexMatrix entries, Grid grid);

  static OperatorMatrix from_real(const RealMatrix& entries, Grid grid);
  static OperatorMatrix identity(const Grid& grid);
  static OperatorMatrix diagonal(const ComplexVector& diag, const Grid& grid);

  const ComplexMatrix& entries() const noexcept { return entries_; }
  const Grid& grid() const noexcept { return grid_; }
  int size() const noexcept { return static_cast<int>(entries_.rows()); }
  Complex operator()(int i, int j) const { return entries_(i, j); }

  /// True when every imaginary part is exactly zero.
  bool is_real() const;

  ComplexVector apply(const ComplexVector& v) const;
  ComplexVector apply(const RealVector& v) const;

  OperatorMatrix adjoint() const;

  friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
  friend OperatorMatrix operator*(Complex s, const OperatorMatrix& a);

 private:
  ComplexMatrix entries_;
  Grid grid_;
};

/// Largest entry modulus.
double max_norm(const ComplexMatrix& m);
double max_norm(const ComplexVector& v);

/// Quadrature inner product sum_k w_k conj(f_k) g_k.
double inner_product(const RealVector& f, const RealVector& g, const Grid& grid);
Complex inner_product(const ComplexVector& f, const ComplexVector& g, const Grid& grid);

/// Differentiation matrix of order q.
///
/// Periodic grids use exact spectral differentiation built from the discrete
/// Fourier transform. Wavenumbers follow the usual FFT ordering, so for even n
/// the Nyquist mode carries wavenumber -n/2 and odd orders are complex on that
/// mode; every discrete Fourier mode is an exact eigenvector.
///
/// Non-periodic grids use 4th-order finite differences: centered stencils in
/// the interior and one-sided stencils of the same order near the ends. Only
/// q <= 4 is supported there.
OperatorMatrix diff_matrix(const Grid& grid, int q);

/// q-th derivative of real samples, using the same discretization as
/// diff_matrix without forming the dense matrix. On periodic grids the real
/// part is returned (the Nyquist component of odd orders is dropped).
RealVector differentiate_samples(const Grid& grid, const RealVector& samples, int q);

/// Finite-difference weights for the m-th derivative at z from arbitrary
/// nodes (Fornberg's recursion).
RealVector fd_weights(double z, std::span<const double> nodes, int m);

/// Signed integer wavenumbers of a periodic grid in FFT order
/// (0, 1, ..., n/2-1, -n/2, ..., -1).
std::vector<int> fft_wavenumbers(int n);

}  // namespace fcoord
