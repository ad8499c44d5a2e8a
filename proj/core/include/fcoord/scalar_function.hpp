#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "fcoord/types.hpp"

namespace fcoord {

/// Complex-valued function of one real variable with optional analytic
/// derivatives. Derivatives beyond the analytic order fall back to 4th-order
/// central differences (orders <= 4).
class ScalarFunction {
 public:
  using ValueFn = std::function<Complex(double)>;
  /// Returns the derivative of the given order (>= 1).
  using DerivativeFn = std::function<Complex(double, int)>;

  static constexpr int kUnlimitedOrder = 1 << 20;
  static constexpr int kMaxFiniteDifferenceOrder = 4;

  /// Zero function.
  ScalarFunction();
  ScalarFunction(std::string name, ValueFn value, DerivativeFn derivative = {},
                 int analytic_order = 0);

  static ScalarFunction constant(Complex c);
  /// f(x) = x
  static ScalarFunction linear();

  Complex operator()(double x) const { return value_(x); }
  Complex derivative(double x, int order) const;

  const std::string& name() const noexcept { return name_; }
  int analytic_order() const noexcept { return analytic_order_; }
  bool is_constant() const noexcept { return constant_; }

  ScalarFunction scaled(Complex factor) const;

 private:
  std::string name_;
  ValueFn value_;
  DerivativeFn derivative_;
  int analytic_order_ = 0;
  bool constant_ = false;
};

/// Order-th derivative of f at x by 4th-order central differences (order <= 4).
Complex central_difference(const std::function<Complex(double)>& f, double x, int order);

/// Coefficient registry used by the CLI and the suites.
///
/// Grammar: `[-][i*]atom` where atom is a decimal constant or one of
/// x, y, x^2, y^2, exp(y), exp(-y) (aliases x2, y2, exp_y, exp_neg_y).
/// Throws DomainError for unknown names.
ScalarFunction coefficient_from_name(std::string_view name);

/// Canonical atom names accepted by coefficient_from_name.
std::vector<std::string> coefficient_atoms();

}  // namespace fcoord
