#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "fcoord/grid.hpp"

namespace fcoord {

/// One summand a * D^q delta(x - x0).
struct SingularTerm {
  double x0 = 0.0;
  int q = 0;
  double a = 0.0;

  friend bool operator==(const SingularTerm&, const SingularTerm&) = default;
};

/// Declared discontinuity of the smooth part: the order-th derivative jumps by
/// `height` at x0 (order 0 is a jump in value, order 1 a kink, ...).
struct Discontinuity {
  double x0 = 0.0;
  double height = 0.0;
  int order = 0;

  friend bool operator==(const Discontinuity&, const Discontinuity&) = default;
};

/// Samples of height * (x - x0)_+^order / order! on the grid. For order 0 the
/// node sitting exactly on x0 takes the midpoint value height / 2.
RealVector jump_profile(const Grid& grid, const Discontinuity& jump);

/// Generalized function on a grid: optional smooth samples with declared
/// discontinuities, plus a finite sum of delta-derivative terms.
///
/// Always held in canonical form: singular terms (and discontinuities) are
/// sorted, entries sharing a location and order are merged, and zero weights
/// are dropped. Every location lies strictly inside the grid.
class GeneralizedFunction {
 public:
  static constexpr int kMaxOrder = 8;

  explicit GeneralizedFunction(Grid grid);
  GeneralizedFunction(Grid grid, std::optional<RealVector> smooth,
                      std::vector<Discontinuity> jumps, std::vector<SingularTerm> singular);

  static GeneralizedFunction delta(const Grid& grid, double x0, int q = 0, double a = 1.0);
  static GeneralizedFunction from_samples(const Grid& grid, RealVector samples,
                                          std::vector<Discontinuity> jumps = {});
  /// height * H(x - x0) with its jump declared.
  static GeneralizedFunction heaviside(const Grid& grid, double x0, double height = 1.0);

  const Grid& grid() const noexcept { return grid_; }
  const std::optional<RealVector>& smooth() const noexcept { return smooth_; }
  const std::vector<Discontinuity>& jumps() const noexcept { return jumps_; }
  const std::vector<SingularTerm>& singular() const noexcept { return singular_; }

  /// Highest delta-derivative order present (-1 when there is none).
  int max_order() const noexcept;
  bool is_zero() const;

  /// Smooth samples minus the declared jump profiles; what remains has no
  /// declared discontinuities.
  RealVector continuous_remainder() const;

  friend GeneralizedFunction operator+(const GeneralizedFunction& f,
                                       const GeneralizedFunction& g);
  friend GeneralizedFunction operator*(double s, const GeneralizedFunction& f);

  friend bool operator==(const GeneralizedFunction& f, const GeneralizedFunction& g);

 private:
  void canonicalize();

  Grid grid_;
  std::optional<RealVector> smooth_;
  std::vector<Discontinuity> jumps_;
  std::vector<SingularTerm> singular_;
};

/// Test function given by samples of its derivatives: derivatives[r] holds
/// phi^(r) on the grid.
struct TestFunction {
  std::vector<RealVector> derivatives;

  int max_order() const noexcept { return static_cast<int>(derivatives.size()) - 1; }

  /// Samples fn(x, r) for r = 0..max_order.
  static TestFunction sample(const Grid& grid, const std::function<double(double, int)>& fn,
                             int max_order);
};

/// Action of f on a test function:
///   int smooth * phi + sum a (-1)^q phi^(q)(x0).
/// Declared discontinuities are integrated in closed form against the
/// derivative samples; phi^(q)(x0) uses cubic interpolation (Hermite when
/// phi^(q+1) is supplied). Throws DomainError when derivative orders are missing.
double pair(const GeneralizedFunction& f, const TestFunction& test);

/// Distributional derivative. Throws UnsupportedOrderError past kMaxOrder.
GeneralizedFunction differentiate(const GeneralizedFunction& f);

/// Linear differential operator with constant coefficients: order -> coefficient.
struct ConstantCoefficientOperator {
  std::map<int, double> terms;

  int order() const noexcept { return terms.empty() ? 0 : terms.rbegin()->first; }

  static ConstantCoefficientOperator identity() { return {{{0, 1.0}}}; }
  static ConstantCoefficientOperator derivative(int q) { return {{{q, 1.0}}}; }
};

GeneralizedFunction apply_constant_coeff_operator(const ConstantCoefficientOperator& op,
                                                  const GeneralizedFunction& f);

nlohmann::json grid_to_json(const Grid& grid);
Grid grid_from_json(const nlohmann::json& j);

/// {"smooth": [..] | null, "jumps": [[x0,h] | [x0,h,order],..],
///  "singular": [[x0,q,a],..], "grid": {"lo","hi","n","periodic"}}
nlohmann::json to_json(const GeneralizedFunction& f);
GeneralizedFunction generalized_function_from_json(const nlohmann::json& j);

}  // namespace fcoord
