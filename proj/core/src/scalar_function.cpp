#include "fcoord/scalar_function.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "fcoord/errors.hpp"
#include "fcoord/grid.hpp"

namespace fcoord {

ScalarFunction::ScalarFunction() : ScalarFunction(constant(0.0)) {}

ScalarFunction::ScalarFunction(std::string name, ValueFn value, DerivativeFn derivative,
                               int analytic_order)
    : name_(std::move(name)),
      value_(std::move(value)),
      derivative_(std::move(derivative)),
      analytic_order_(derivative_ ? analytic_order : 0) {}

ScalarFunction ScalarFunction::constant(Complex c) {
  std::ostringstream name;
  if (c.imag() == 0.0) {
    name << c.real();
  } else {
    name << c;
  }
  ScalarFunction f(name.str(), [c](double) { return c; },
                   [](double, int) { return Complex(0.0); }, kUnlimitedOrder);
  f.constant_ = true;
  return f;
}

ScalarFunction ScalarFunction::linear() {
  return ScalarFunction(
      "x", [](double x) { return Complex(x); },
      [](double, int order) { return Complex(order == 1 ? 1.0 : 0.0); }, kUnlimitedOrder);
}

Complex ScalarFunction::derivative(double x, int order) const {
  if (order == 0) {
    return value_(x);
  }
  if (order < 0) {
    throw DomainError("negative derivative order");
  }
  if (order <= analytic_order_) {
    return derivative_(x, order);
  }
  return central_difference(value_, x, order);
}

ScalarFunction ScalarFunction::scaled(Complex factor) const {
  auto value = value_;
  auto deriv = derivative_;
  std::ostringstream name;
  if (factor == Complex(-1.0)) {
    name << "-" << name_;
  } else if (factor == Complex(0.0, 1.0)) {
    name << "i*" << name_;
  } else if (factor == Complex(0.0, -1.0)) {
    name << "-i*" << name_;
  } else {
    name << factor << "*" << name_;
  }
  ScalarFunction out(
      name.str(), [value, factor](double x) { return factor * value(x); },
      deriv ? DerivativeFn([deriv, factor](double x, int k) { return factor * deriv(x, k); })
            : DerivativeFn{},
      analytic_order_);
  out.constant_ = constant_;
  return out;
}

Complex central_difference(const std::function<Complex(double)>& f, double x, int order) {
  if (order < 1 || order > ScalarFunction::kMaxFiniteDifferenceOrder) {
    throw UnsupportedOrderError("finite-difference fallback supports derivative orders 1..4, got " +
                                std::to_string(order));
  }
  // Steps balance truncation (h^4) against cancellation (eps / h^order).
  static constexpr double kSteps[] = {0.0, 1e-3, 5e-3, 1e-2, 2e-2};
  const double h = kSteps[order] * std::max(1.0, std::abs(x));
  const int half = order <= 2 ? 2 : 3;
  std::vector<double> offsets;
  for (int k = -half; k <= half; ++k) {
    offsets.push_back(static_cast<double>(k));
  }
  const RealVector w = fd_weights(0.0, offsets, order);
  Complex acc = 0.0;
  for (int k = 0; k < static_cast<int>(offsets.size()); ++k) {
    acc += w[k] * f(x + offsets[k] * h);
  }
  return acc / std::pow(h, order);
}

namespace {

ScalarFunction atom_from_name(std::string_view atom) {
  if (atom == "x" || atom == "y") {
    return ScalarFunction(std::string(atom), [](double x) { return Complex(x); },
                          [](double, int k) { return Complex(k == 1 ? 1.0 : 0.0); },
                          ScalarFunction::kUnlimitedOrder);
  }
  if (atom == "x^2" || atom == "x2" || atom == "y^2" || atom == "y2") {
    const std::string var(1, atom.front());
    return ScalarFunction(
        var + "^2", [](double x) { return Complex(x * x); },
        [](double x, int k) {
          if (k == 1) return Complex(2.0 * x);
          if (k == 2) return Complex(2.0);
          return Complex(0.0);
        },
        ScalarFunction::kUnlimitedOrder);
  }
  if (atom == "exp(y)" || atom == "exp_y" || atom == "e^y" || atom == "exp(x)" ||
      atom == "exp_x") {
    return ScalarFunction(
        "exp(y)", [](double x) { return Complex(std::exp(x)); },
        [](double x, int) { return Complex(std::exp(x)); }, ScalarFunction::kUnlimitedOrder);
  }
  if (atom == "exp(-y)" || atom == "exp_neg_y" || atom == "e^-y" || atom == "exp(-x)" ||
      atom == "exp_neg_x") {
    return ScalarFunction(
        "exp(-y)", [](double x) { return Complex(std::exp(-x)); },
        [](double x, int k) { return Complex((k % 2 == 0 ? 1.0 : -1.0) * std::exp(-x)); },
        ScalarFunction::kUnlimitedOrder);
  }
  double value = 0.0;
  const char* first = atom.data();
  const char* last = atom.data() + atom.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc() && ptr == last && std::isfinite(value)) {
    return ScalarFunction::constant(value);
  }
  throw DomainError("unregistered coefficient '" + std::string(atom) + "'");
}

}  // namespace

ScalarFunction coefficient_from_name(std::string_view name) {
  if (name.empty()) {
    throw DomainError("empty coefficient name");
  }
  Complex factor = 1.0;
  if (name.front() == '-') {
    factor = -1.0;
    name.remove_prefix(1);
  }
  if (name.starts_with("i*")) {
    factor *= Complex(0.0, 1.0);
    name.remove_prefix(2);
  }
  ScalarFunction atom = atom_from_name(name);
  if (factor == Complex(1.0)) {
    return atom;
  }
  if (atom.is_constant()) {
    return ScalarFunction::constant(factor * atom(0.0));
  }
  return atom.scaled(factor);
}

std::vector<std::string> coefficient_atoms() {
  return {"<number>", "x", "y", "x^2", "y^2", "exp(y)", "exp(-y)"};
}

}  // namespace fcoord
