#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "fcoord/distributions.hpp"
#include "fcoord/grid.hpp"
#include "fcoord/scalar_function.hpp"

namespace fcoord {

/// Rectangle [x_lo, x_hi] x [y_lo, y_hi].
struct Rectangle {
  double x_lo = -6.0;
  double x_hi = 6.0;
  double y_lo = -6.0;
  double y_hi = 6.0;
};

/// Real profile f(t) of a translation kernel f(x - y).
struct TranslationProfile {
  std::function<double(double)> value;
  /// f^(order)(t), order >= 1.
  std::function<double(double, int)> derivative;
  /// |f| and its derivatives are negligible (< 1e-15) for |t| > support.
  double support = 0.0;
};

/// Building blocks of a kernel. Partial evaluators take (x, y, order >= 1)
/// and are trusted up to the matching *_order; past that the kernel falls
/// back to central differences of eval (orders <= 4) unless disabled.
struct KernelParts {
  std::string id;
  std::function<Complex(double, double)> eval;
  std::function<Complex(double, double, int)> dx;
  int dx_order = 0;
  std::function<Complex(double, double, int)> dy;
  int dy_order = 0;
  bool complex = false;
  bool finite_difference_fallback = true;
  Rectangle domain;
  /// Set for diagonal-only kernels a0(x) delta(x - y).
  std::optional<ScalarFunction> diagonal;
  std::optional<TranslationProfile> translation;
  /// Discretize against Fourier wavenumbers instead of grid nodes.
  bool wavenumber_columns = false;
};

/// Integral kernel omega(x, y). Immutable and cheap to copy.
///
/// Construction checks every analytic partial of order 1 and 2 against
/// centered differences of eval at 100 seeded points of the domain
/// (tolerance 1e-6 relative to max(1, |value|)); a mismatch throws
/// EvaluationError.
class Kernel {
 public:
  explicit Kernel(KernelParts parts);

  const std::string& id() const noexcept { return parts_->id; }
  bool is_complex() const noexcept { return parts_->complex; }
  bool is_diagonal() const noexcept { return parts_->diagonal.has_value(); }
  bool is_translation() const noexcept { return parts_->translation.has_value(); }
  const Rectangle& domain() const noexcept { return parts_->domain; }
  const ScalarFunction& diagonal_coefficient() const;
  const TranslationProfile& translation() const;
  int analytic_dx_order() const noexcept { return parts_->dx ? parts_->dx_order : 0; }
  int analytic_dy_order() const noexcept { return parts_->dy ? parts_->dy_order : 0; }
  bool finite_difference_fallback() const noexcept {
    return parts_->finite_difference_fallback;
  }

  /// omega(x, y). Diagonal kernels throw DomainError.
  Complex operator()(double x, double y) const;
  /// d^order omega / dx^order (order 0 is the value).
  Complex dx(double x, double y, int order) const;
  Complex dy(double x, double y, int order) const;

  /// Column abscissae used by discretize: grid nodes, or (2 pi / L) k_j in
  /// FFT order for wavenumber kernels (periodic grids only).
  RealVector column_nodes(const Grid& grid) const;

  Kernel without_finite_differences() const;
  /// c * omega under a new id.
  Kernel scaled(double c) const;

 private:
  std::shared_ptr<const KernelParts> parts_;
};

Kernel fourier();
Kernel gaussian();
/// (x - y) e^{-(x - y)^2}
Kernel gaussian_ramp();
Kernel translation_family(TranslationProfile profile, std::string id = "translation");
/// F(y) e^{-c(x) b(y)}
Kernel exp_family(ScalarFunction F, ScalarFunction c, ScalarFunction b);
/// e^{x e^{sign y}}, sign = +1 or -1.
Kernel exp_exp(int sign);
Kernel multiplication(ScalarFunction a0);
Kernel dilation(double c);
Kernel identity_kernel();

/// Tabulated kernel e^{f(x, y)} with f_x = g solving the Riccati equation
/// g_x + g^2 = b(y) / a(x), g(lo, y) = g0(y), f(lo, y) = 0. Integrated per
/// grid column y_j by classical RK4. Throws RiccatiSingularityError when
/// |g| exceeds 1e6 and DomainError when a vanishes on the grid.
Kernel riccati_kernel(const ScalarFunction& a, const ScalarFunction& b,
                      const ScalarFunction& g0, const Grid& grid);

/// Builds a kernel by CLI id: gaussian, gaussian_ramp, fourier, exp_exp_plus,
/// exp_exp_minus, identity, dilation=<c>, multiplication=<coef>. Riccati
/// kernels need data and are built separately. Throws DomainError.
Kernel kernel_from_id(const std::string& id);

/// Nystrom matrix omega(x_i, y_j) w_j. Diagonal kernels give diag(a0(x_i)).
/// Translation kernels on periodic grids are periodized over images.
/// Throws EvaluationError naming (x, y) for non-finite values.
OperatorMatrix discretize(const Kernel& k, const Grid& grid);

/// Nystrom matrix of d^order omega / dx^order. For diagonal kernels this is
/// diff_matrix(order) * diag(a0).
OperatorMatrix discretize_derivative(const Kernel& k, const Grid& grid, int order);

/// Samples of x -> integral omega(x, y) f(y) dy on f's grid.
ComplexVector apply(const Kernel& k, const GeneralizedFunction& f);

struct ConditionReport {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  int truncated = 0;
  int rank = 0;

  double condition() const {
    return sigma_min > 0.0 ? sigma_max / sigma_min : std::numeric_limits<double>::infinity();
  }
};

nlohmann::json to_json(const ConditionReport& r);

struct Inverse {
  OperatorMatrix matrix;
  ConditionReport report;
};

inline constexpr double kDefaultThreshold = 1e-10;

/// Truncated-SVD pseudo-inverse keeping singular values >= threshold *
/// sigma_max. Throws DomainError unless 0 < threshold < 1 and
/// SingularTransformError at rank 0.
Inverse invert(const OperatorMatrix& m, double threshold = kDefaultThreshold);

struct ResidualField {
  RealVector xs;
  RealVector ys;
  /// values(i, j) = R(xs[i], ys[j])
  ComplexMatrix values;
  double max_norm = 0.0;
};

/// R(x, y) = a(x) d^n omega/dx^n - (-1)^n d^m (omega b(y)) / dy^m.
ResidualField kernel_pde_residual(const Kernel& k, int n, int m, const ScalarFunction& a,
                                  const ScalarFunction& b, std::span<const double> xs,
                                  std::span<const double> ys);

/// Same on the interior nodes of the grid (all nodes when periodic) against
/// the kernel's column nodes.
ResidualField kernel_pde_residual(const Kernel& k, int n, int m, const ScalarFunction& a,
                                  const ScalarFunction& b, const Grid& grid);

}  // namespace fcoord
