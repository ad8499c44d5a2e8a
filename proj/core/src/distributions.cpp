#include "fcoord/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "fcoord/errors.hpp"

namespace fcoord {

namespace {

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) {
    r *= i;
  }
  return r;
}

double binomial(int n, int k) { return factorial(n) / (factorial(k) * factorial(n - k)); }

void require_inside(const Grid& grid, double x0, const char* what) {
  if (!std::isfinite(x0) || !grid.contains_strictly(x0)) {
    throw DomainError(std::string(what) + " location " + std::to_string(x0) +
                      " must lie strictly inside (" + std::to_string(grid.lo()) + ", " +
                      std::to_string(grid.hi()) + ")");
  }
}

}  // namespace

RealVector jump_profile(const Grid& grid, const Discontinuity& jump) {
  const int n = grid.size();
  RealVector out = RealVector::Zero(n);
  const double scale = jump.height / factorial(jump.order);
  for (int i = 0; i < n; ++i) {
    const double t = grid.node(i) - jump.x0;
    if (t > 0.0) {
      out[i] = scale * std::pow(t, jump.order);
    } else if (t == 0.0 && jump.order == 0) {
      out[i] = 0.5 * jump.height;
    }
  }
  return out;
}

GeneralizedFunction::GeneralizedFunction(Grid grid) : grid_(std::move(grid)) {}

GeneralizedFunction::GeneralizedFunction(Grid grid, std::optional<RealVector> smooth,
                                         std::vector<Discontinuity> jumps,
                                         std::vector<SingularTerm> singular)
    : grid_(std::move(grid)),
      smooth_(std::move(smooth)),
      jumps_(std::move(jumps)),
      singular_(std::move(singular)) {
  canonicalize();
}

GeneralizedFunction GeneralizedFunction::delta(const Grid& grid, double x0, int q, double a) {
  return GeneralizedFunction(grid, std::nullopt, {}, {{x0, q, a}});
}

GeneralizedFunction GeneralizedFunction::from_samples(const Grid& grid, RealVector samples,
                                                      std::vector<Discontinuity> jumps) {
  return GeneralizedFunction(grid, std::move(samples), std::move(jumps), {});
}

GeneralizedFunction GeneralizedFunction::heaviside(const Grid& grid, double x0, double height) {
  const Discontinuity jump{x0, height, 0};
  return GeneralizedFunction(grid, jump_profile(grid, jump), {jump}, {});
}

void GeneralizedFunction::canonicalize() {
  if (smooth_ && smooth_->size() != grid_.size()) {
    throw DomainError("smooth part has " + std::to_string(smooth_->size()) +
                      " samples, grid has " + std::to_string(grid_.size()));
  }
  if (smooth_ && !smooth_->allFinite()) {
    throw DomainError("smooth part contains non-finite samples");
  }
  if (!jumps_.empty() && !smooth_) {
    throw DomainError("declared discontinuities require a smooth part");
  }
  if (!jumps_.empty() && grid_.periodic()) {
    throw DomainError("declared discontinuities are only supported on non-periodic grids");
  }
  for (const auto& t : singular_) {
    require_inside(grid_, t.x0, "singular term");
    if (t.q < 0) {
      throw DomainError("negative delta-derivative order");
    }
    if (t.q > kMaxOrder) {
      throw UnsupportedOrderError("delta-derivative order " + std::to_string(t.q) +
                                  " exceeds cap " + std::to_string(kMaxOrder));
    }
    if (!std::isfinite(t.a)) {
      throw DomainError("non-finite singular weight");
    }
  }
  for (const auto& j : jumps_) {
    require_inside(grid_, j.x0, "discontinuity");
    if (j.order < 0 || j.order > kMaxOrder) {
      throw UnsupportedOrderError("discontinuity order out of range");
    }
  }

  std::sort(singular_.begin(), singular_.end(), [](const auto& l, const auto& r) {
    return std::tie(l.x0, l.q) < std::tie(r.x0, r.q);
  });
  std::vector<SingularTerm> merged;
  for (const auto& t : singular_) {
    if (!merged.empty() && merged.back().x0 == t.x0 && merged.back().q == t.q) {
      merged.back().a += t.a;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const SingularTerm& t) { return t.a == 0.0; });
  singular_ = std::move(merged);

  std::sort(jumps_.begin(), jumps_.end(), [](const auto& l, const auto& r) {
    return std::tie(l.x0, l.order) < std::tie(r.x0, r.order);
  });
  std::vector<Discontinuity> jumps;
  for (const auto& j : jumps_) {
    if (!jumps.empty() && jumps.back().x0 == j.x0 && jumps.back().order == j.order) {
      jumps.back().height += j.height;
    } else {
      jumps.push_back(j);
    }
  }
  std::erase_if(jumps, [](const Discontinuity& j) { return j.height == 0.0; });
  jumps_ = std::move(jumps);
}

int GeneralizedFunction::max_order() const noexcept {
  int q = -1;
  for (const auto& t : singular_) {
    q = std::max(q, t.q);
  }
  return q;
}

bool GeneralizedFunction::is_zero() const {
  return singular_.empty() && jumps_.empty() && (!smooth_ || smooth_->isZero(0.0));
}

RealVector GeneralizedFunction::continuous_remainder() const {
  RealVector rest = smooth_ ? *smooth_ : RealVector::Zero(grid_.size());
  for (const auto& j : jumps_) {
    rest -= jump_profile(grid_, j);
  }
  return rest;
}

GeneralizedFunction operator+(const GeneralizedFunction& f, const GeneralizedFunction& g) {
  if (!(f.grid_ == g.grid_)) {
    throw DomainError("cannot add generalized functions on different grids");
  }
  std::optional<RealVector> smooth;
  if (f.smooth_ && g.smooth_) {
    smooth = *f.smooth_ + *g.smooth_;
  } else if (f.smooth_) {
    smooth = f.smooth_;
  } else if (g.smooth_) {
    smooth = g.smooth_;
  }
  auto jumps = f.jumps_;
  jumps.insert(jumps.end(), g.jumps_.begin(), g.jumps_.end());
  auto singular = f.singular_;
  singular.insert(singular.end(), g.singular_.begin(), g.singular_.end());
  return GeneralizedFunction(f.grid_, std::move(smooth), std::move(jumps), std::move(singular));
}

GeneralizedFunction operator*(double s, const GeneralizedFunction& f) {
  std::optional<RealVector> smooth;
  if (f.smooth_) {
    smooth = s * *f.smooth_;
  }
  auto jumps = f.jumps_;
  for (auto& j : jumps) {
    j.height *= s;
  }
  auto singular = f.singular_;
  for (auto& t : singular) {
    t.a *= s;
  }
  return GeneralizedFunction(f.grid_, std::move(smooth), std::move(jumps), std::move(singular));
}

bool operator==(const GeneralizedFunction& f, const GeneralizedFunction& g) {
  if (!(f.grid_ == g.grid_) || f.jumps_ != g.jumps_ || f.singular_ != g.singular_) {
    return false;
  }
  if (f.smooth_.has_value() != g.smooth_.has_value()) {
    return false;
  }
  return !f.smooth_ || *f.smooth_ == *g.smooth_;
}

TestFunction TestFunction::sample(const Grid& grid, const std::function<double(double, int)>& fn,
                                  int max_order) {
  TestFunction t;
  for (int r = 0; r <= max_order; ++r) {
    RealVector d(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      d[i] = fn(grid.node(i), r);
    }
    t.derivatives.push_back(std::move(d));
  }
  return t;
}

namespace {

// phi^(q)(x0) from the derivative samples by cubic interpolation.
double interpolate_derivative(const Grid& grid, const TestFunction& test, int q, double x0) {
  const RealVector& d = test.derivatives[q];
  const int n = grid.size();
  const double h = grid.spacing();
  const double t = (x0 - grid.lo()) / h;
  auto wrap = [&](int j) {
    return grid.periodic() ? ((j % n) + n) % n : std::clamp(j, 0, n - 1);
  };
  int i = static_cast<int>(std::floor(t));
  if (!grid.periodic()) {
    i = std::clamp(i, 0, n - 2);
  }
  const double s = t - i;
  constexpr double kSnap = 1e-12;
  if (std::abs(s) < kSnap) {
    return d[wrap(i)];
  }
  if (std::abs(s - 1.0) < kSnap) {
    return d[wrap(i + 1)];
  }
  if (q + 1 <= test.max_order()) {
    const RealVector& m = test.derivatives[q + 1];
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * d[wrap(i)] + h10 * h * m[wrap(i)] + h01 * d[wrap(i + 1)] +
           h11 * h * m[wrap(i + 1)];
  }
  int j0 = i - 1;
  if (!grid.periodic()) {
    j0 = std::clamp(j0, 0, n - 4);
  }
  double acc = 0.0;
  for (int a = 0; a < 4; ++a) {
    double basis = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (a != b) {
        basis *= (t - (j0 + b)) / static_cast<double>(a - b);
      }
    }
    acc += basis * d[wrap(j0 + a)];
  }
  return acc;
}

// Derivatives of g(y) = (y - c)^k / k! * phi(y) at node i, orders 0..R.
std::vector<double> weighted_test_derivatives(const Grid& grid, const TestFunction& test,
                                              double c, int k, int i) {
  const int max_r = test.max_order();
  const double t = grid.node(i) - c;
  std::vector<double> g(max_r + 1, 0.0);
  for (int j = 0; j <= max_r; ++j) {
    double acc = 0.0;
    for (int r = 0; r <= std::min(j, k); ++r) {
      acc += binomial(j, r) * std::pow(t, k - r) / factorial(k - r) *
             test.derivatives[j - r][i];
    }
    g[j] = acc;
  }
  return g;
}

// int_c^hi (y - c)^k / k! phi(y) dy: corrected trapezoid from the first node
// at or beyond c, plus a Taylor expansion over the partial cell [c, x_p].
double tail_integral(const Grid& grid, const TestFunction& test, double c, int k) {
  const int n = grid.size();
  const double h = grid.spacing();
  const int max_r = test.max_order();
  int p = static_cast<int>(std::ceil((c - grid.lo()) / h));
  p = std::clamp(p, 0, n - 1);
  if (grid.node(p) < c) {
    ++p;
  }
  const double delta = grid.node(p) - c;
  const auto gp = weighted_test_derivatives(grid, test, c, k, p);
  double partial = 0.0;
  for (int r = 0; r <= max_r; ++r) {
    partial += gp[r] * ((r % 2 == 0) ? 1.0 : -1.0) * std::pow(delta, r + 1) / factorial(r + 1);
  }
  if (p == n - 1) {
    return partial;
  }
  double trap = 0.0;
  for (int i = p; i < n; ++i) {
    const double wt = (i == p || i == n - 1) ? 0.5 * h : h;
    trap += wt * weighted_test_derivatives(grid, test, c, k, i)[0];
  }
  // Euler-Maclaurin end corrections with B2, B4, B6, B8.
  static constexpr double kBernoulli[] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};
  const auto gn = weighted_test_derivatives(grid, test, c, k, n - 1);
  for (int j = 1; j <= 4 && 2 * j - 1 <= max_r; ++j) {
    const double coeff = kBernoulli[j - 1] / factorial(2 * j) * std::pow(h, 2 * j);
    trap -= coeff * (gn[2 * j - 1] - gp[2 * j - 1]);
  }
  return partial + trap;
}

}  // namespace

double pair(const GeneralizedFunction& f, const TestFunction& test) {
  const Grid& grid = f.grid();
  if (test.derivatives.empty()) {
    throw DomainError("test function supplies no samples");
  }
  for (const auto& d : test.derivatives) {
    if (d.size() != grid.size()) {
      throw DomainError("test function samples do not match grid");
    }
  }
  if (f.max_order() > test.max_order()) {
    throw DomainError("test function supplies derivatives up to order " +
                      std::to_string(test.max_order()) + ", pairing needs " +
                      std::to_string(f.max_order()));
  }
  double total = 0.0;
  if (f.smooth()) {
    const RealVector rest = f.continuous_remainder();
    for (int i = 0; i < grid.size(); ++i) {
      total += grid.weight(i) * rest[i] * test.derivatives[0][i];
    }
    for (const auto& j : f.jumps()) {
      total += j.height * tail_integral(grid, test, j.x0, j.order);
    }
  }
  for (const auto& t : f.singular()) {
    const double sign = (t.q % 2 == 0) ? 1.0 : -1.0;
    total += t.a * sign * interpolate_derivative(grid, test, t.q, t.x0);
  }
  return total;
}

GeneralizedFunction differentiate(const GeneralizedFunction& f) {
  const Grid& grid = f.grid();
  std::optional<RealVector> smooth;
  std::vector<Discontinuity> jumps;
  std::vector<SingularTerm> singular;
  if (f.smooth()) {
    RealVector d = differentiate_samples(grid, f.continuous_remainder(), 1);
    for (const auto& j : f.jumps()) {
      if (j.order == 0) {
        singular.push_back({j.x0, 0, j.height});
      } else {
        const Discontinuity lowered{j.x0, j.height, j.order - 1};
        d += jump_profile(grid, lowered);
        jumps.push_back(lowered);
      }
    }
    smooth = std::move(d);
  }
  for (const auto& t : f.singular()) {
    if (t.q + 1 > GeneralizedFunction::kMaxOrder) {
      throw UnsupportedOrderError("differentiating D^" + std::to_string(t.q) +
                                  " delta exceeds the order cap");
    }
    singular.push_back({t.x0, t.q + 1, t.a});
  }
  return GeneralizedFunction(grid, std::move(smooth), std::move(jumps), std::move(singular));
}

GeneralizedFunction apply_constant_coeff_operator(const ConstantCoefficientOperator& op,
                                                  const GeneralizedFunction& f) {
  GeneralizedFunction result(f.grid());
  GeneralizedFunction derivative = f;
  int current = 0;
  for (const auto& [order, coeff] : op.terms) {
    if (order < 0) {
      throw DomainError("negative operator order");
    }
    while (current < order) {
      derivative = differentiate(derivative);
      ++current;
    }
    result = result + coeff * derivative;
  }
  return result;
}

nlohmann::json grid_to_json(const Grid& grid) {
  return {{"lo", grid.lo()}, {"hi", grid.hi()}, {"n", grid.size()}, {"periodic", grid.periodic()}};
}

Grid grid_from_json(const nlohmann::json& j) {
  try {
    return make_uniform_grid(j.at("lo").get<double>(), j.at("hi").get<double>(),
                             j.at("n").get<int>(), j.value("periodic", false));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed grid: ") + e.what());
  }
}

nlohmann::json to_json(const GeneralizedFunction& f) {
  nlohmann::json j;
  if (f.smooth()) {
    j["smooth"] = std::vector<double>(f.smooth()->begin(), f.smooth()->end());
  } else {
    j["smooth"] = nullptr;
  }
  j["jumps"] = nlohmann::json::array();
  for (const auto& d : f.jumps()) {
    if (d.order == 0) {
      j["jumps"].push_back({d.x0, d.height});
    } else {
      j["jumps"].push_back({d.x0, d.height, d.order});
    }
  }
  j["singular"] = nlohmann::json::array();
  for (const auto& t : f.singular()) {
    j["singular"].push_back({t.x0, t.q, t.a});
  }
  j["grid"] = grid_to_json(f.grid());
  return j;
}

GeneralizedFunction generalized_function_from_json(const nlohmann::json& j) {
  try {
    Grid grid = grid_from_json(j.at("grid"));
    std::optional<RealVector> smooth;
    if (j.contains("smooth") && !j.at("smooth").is_null()) {
      const auto values = j.at("smooth").get<std::vector<double>>();
      smooth = Eigen::Map<const RealVector>(values.data(), static_cast<Eigen::Index>(values.size()));
    }
    std::vector<Discontinuity> jumps;
    for (const auto& e : j.value("jumps", nlohmann::json::array())) {
      if (e.size() < 2 || e.size() > 3) {
        throw DomainError("jump entries are [x0, height] or [x0, height, order]");
      }
      jumps.push_back({e.at(0).get<double>(), e.at(1).get<double>(),
                       e.size() == 3 ? e.at(2).get<int>() : 0});
    }
    std::vector<SingularTerm> singular;
    for (const auto& e : j.value("singular", nlohmann::json::array())) {
      if (e.size() != 3) {
        throw DomainError("singular entries are [x0, q, a]");
      }
      singular.push_back({e.at(0).get<double>(), e.at(1).get<int>(), e.at(2).get<double>()});
    }
    return GeneralizedFunction(std::move(grid), std::move(smooth), std::move(jumps),
                               std::move(singular));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed generalized function: ") + e.what());
  }
}

}  // namespace fcoord
