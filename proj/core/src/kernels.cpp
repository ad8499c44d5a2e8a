#include "fcoord/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <type_traits>

#include <Eigen/SVD>

#include "fcoord/errors.hpp"

namespace fcoord {

namespace {

constexpr Complex kI(0.0, 1.0);

// Physicists' Hermite polynomial H_q(t).
double hermite(int q, double t) {
  double prev = 1.0;
  if (q == 0) {
    return prev;
  }
  double cur = 2.0 * t;
  for (int k = 1; k < q; ++k) {
    const double next = 2.0 * t * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

double sign_pow(int q) { return q % 2 == 0 ? 1.0 : -1.0; }

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) {
    r *= i;
  }
  return r;
}

std::string format_point(double x, double y) {
  return "(" + std::to_string(x) + ", " + std::to_string(y) + ")";
}

void self_check(const KernelParts& p) {
  constexpr int kPoints = 100;
  constexpr double kStep = 1e-3;
  constexpr double kTol = 1e-6;
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> ux(p.domain.x_lo, p.domain.x_hi);
  std::uniform_real_distribution<double> uy(p.domain.y_lo, p.domain.y_hi);
  auto fd = [&](const std::function<Complex(double)>& f, double t, int order) {
    const double h = kStep;
    if (order == 1) {
      return (-f(t + 2 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2 * h)) / (12.0 * h);
    }
    return (-f(t + 2 * h) + 16.0 * f(t + h) - 30.0 * f(t) + 16.0 * f(t - h) - f(t - 2 * h)) /
           (12.0 * h * h);
  };
  for (int s = 0; s < kPoints; ++s) {
    const double x = ux(rng);
    const double y = uy(rng);
    for (int order = 1; order <= 2; ++order) {
      if (p.dx && order <= p.dx_order) {
        const Complex exact = p.dx(x, y, order);
        const Complex approx = fd([&](double t) { return p.eval(t, y); }, x, order);
        if (std::isfinite(std::abs(exact)) &&
            std::abs(exact - approx) > kTol * std::max(1.0, std::abs(exact))) {
          throw EvaluationError("kernel '" + p.id + "': analytic x-derivative of order " +
                                std::to_string(order) + " disagrees with differences at " +
                                format_point(x, y));
        }
      }
      if (p.dy && order <= p.dy_order) {
        const Complex exact = p.dy(x, y, order);
        const Complex approx = fd([&](double t) { return p.eval(x, t); }, y, order);
        if (std::isfinite(std::abs(exact)) &&
            std::abs(exact - approx) > kTol * std::max(1.0, std::abs(exact))) {
          throw EvaluationError("kernel '" + p.id + "': analytic y-derivative of order " +
                                std::to_string(order) + " disagrees with differences at " +
                                format_point(x, y));
        }
      }
    }
  }
}

// f^(order)(t) summed over the images t + mL that reach the support.
double periodized(const TranslationProfile& f, double t, double length, int order) {
  const int images = static_cast<int>(std::ceil(f.support / length)) + 1;
  double acc = 0.0;
  for (int m = -images; m <= images; ++m) {
    const double s = t + m * length;
    acc += order == 0 ? f.value(s) : f.derivative(s, order);
  }
  return acc;
}

// d^order/dx^order (in_x) or d^order/dy^order of the kernel as seen by
// a grid: translation kernels are periodized on periodic grids.
Complex grid_partial(const Kernel& k, const Grid& grid, double x, double y, int order,
                     bool in_x) {
  if (k.is_translation() && grid.periodic()) {
    const double v = periodized(k.translation(), x - y, grid.length(), order);
    return in_x ? v : sign_pow(order) * v;
  }
  return in_x ? k.dx(x, y, order) : k.dy(x, y, order);
}

Complex checked(Complex v, const Kernel& k, double x, double y) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    throw EvaluationError("kernel '" + k.id() + "' is not finite at " + format_point(x, y));
  }
  return v;
}

OperatorMatrix nystrom(const Kernel& k, const Grid& grid, int order) {
  const int n = grid.size();
  const RealVector ys = k.column_nodes(grid);
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    const double x = grid.node(i);
    for (int j = 0; j < n; ++j) {
      const Complex v = checked(grid_partial(k, grid, x, ys[j], order, true), k, x, ys[j]);
      m(i, j) = v * grid.weight(j);
    }
  }
  return OperatorMatrix(std::move(m), grid);
}

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975363, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};
constexpr double kMaxPanel = 0.25;

// integral_c^hi omega(x, y) (y - c)^order / order! dy
Complex jump_integral(const Kernel& k, const Grid& grid, double x, double c, int order) {
  const int panels = std::max(1, static_cast<int>(std::ceil((grid.hi() - c) / kMaxPanel)));
  const double width = (grid.hi() - c) / panels;
  const double scale = 1.0 / factorial(order);
  Complex acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = c + (p + 0.5) * width;
    for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
      const double y = mid + 0.5 * width * kGaussNodes[g];
      const Complex v = checked(k(x, y), k, x, y);
      acc += 0.5 * width * kGaussWeights[g] * v * std::pow(y - c, order) * scale;
    }
  }
  return acc;
}

TranslationProfile gaussian_profile() {
  return {[](double t) { return std::exp(-t * t); },
          [](double t, int q) { return sign_pow(q) * hermite(q, t) * std::exp(-t * t); }, 7.0};
}

TranslationProfile gaussian_ramp_profile() {
  // t e^{-t^2} = -(1/2) d/dt e^{-t^2}
  return {[](double t) { return t * std::exp(-t * t); },
          [](double t, int q) {
            return -0.5 * sign_pow(q + 1) * hermite(q + 1, t) * std::exp(-t * t);
          },
          7.0};
}

}  // namespace

Kernel::Kernel(KernelParts parts) {
  if (!parts.diagonal && !parts.eval) {
    throw DomainError("kernel '" + parts.id + "' has no evaluator");
  }
  if (!parts.diagonal) {
    self_check(parts);
  }
  parts_ = std::make_shared<const KernelParts>(std::move(parts));
}

const ScalarFunction& Kernel::diagonal_coefficient() const {
  if (!parts_->diagonal) {
    throw DomainError("kernel '" + id() + "' is not diagonal");
  }
  return *parts_->diagonal;
}

const TranslationProfile& Kernel::translation() const {
  if (!parts_->translation) {
    throw PreconditionError("kernel '" + id() + "' is not a translation kernel");
  }
  return *parts_->translation;
}

Complex Kernel::operator()(double x, double y) const {
  if (is_diagonal()) {
    throw DomainError("diagonal kernel '" + id() + "' is not evaluated pointwise");
  }
  return parts_->eval(x, y);
}

Complex Kernel::dx(double x, double y, int order) const {
  if (order == 0) {
    return (*this)(x, y);
  }
  if (order < 0) {
    throw DomainError("negative derivative order");
  }
  if (order <= analytic_dx_order()) {
    return parts_->dx(x, y, order);
  }
  if (!parts_->finite_difference_fallback || is_diagonal()) {
    throw UnsupportedOrderError("kernel '" + id() + "' has no x-derivative of order " +
                                std::to_string(order));
  }
  return central_difference([this, y](double t) { return parts_->eval(t, y); }, x, order);
}

Complex Kernel::dy(double x, double y, int order) const {
  if (order == 0) {
    return (*this)(x, y);
  }
  if (order < 0) {
    throw DomainError("negative derivative order");
  }
  if (order <= analytic_dy_order()) {
    return parts_->dy(x, y, order);
  }
  if (!parts_->finite_difference_fallback || is_diagonal()) {
    throw UnsupportedOrderError("kernel '" + id() + "' has no y-derivative of order " +
                                std::to_string(order));
  }
  return central_difference([this, x](double t) { return parts_->eval(x, t); }, y, order);
}

RealVector Kernel::column_nodes(const Grid& grid) const {
  if (!parts_->wavenumber_columns) {
    return grid.nodes();
  }
  if (!grid.periodic()) {
    throw DomainError("kernel '" + id() + "' needs a periodic grid");
  }
  const auto k = fft_wavenumbers(grid.size());
  RealVector ys(grid.size());
  for (int j = 0; j < grid.size(); ++j) {
    ys[j] = 2.0 * kPi / grid.length() * k[j];
  }
  return ys;
}

Kernel Kernel::without_finite_differences() const {
  KernelParts p = *parts_;
  p.finite_difference_fallback = false;
  return Kernel(std::move(p));
}

Kernel Kernel::scaled(double c) const {
  KernelParts p = *parts_;
  p.id = std::to_string(c) + "*" + p.id;
  if (p.diagonal) {
    p.diagonal = p.diagonal->scaled(c);
  } else {
    auto eval = p.eval;
    p.eval = [eval, c](double x, double y) { return c * eval(x, y); };
    if (p.dx) {
      auto dx = p.dx;
      p.dx = [dx, c](double x, double y, int q) { return c * dx(x, y, q); };
    }
    if (p.dy) {
      auto dy = p.dy;
      p.dy = [dy, c](double x, double y, int q) { return c * dy(x, y, q); };
    }
  }
  if (p.translation) {
    auto& t = *p.translation;
    auto value = t.value;
    auto deriv = t.derivative;
    t.value = [value, c](double s) { return c * value(s); };
    t.derivative = [deriv, c](double s, int q) { return c * deriv(s, q); };
  }
  return Kernel(std::move(p));
}

Kernel fourier() {
  KernelParts p;
  p.id = "fourier";
  p.eval = [](double x, double y) { return std::exp(kI * x * y); };
  p.dx = [](double x, double y, int q) { return std::pow(kI * y, q) * std::exp(kI * x * y); };
  p.dx_order = ScalarFunction::kUnlimitedOrder;
  p.dy = [](double x, double y, int q) { return std::pow(kI * x, q) * std::exp(kI * x * y); };
  p.dy_order = ScalarFunction::kUnlimitedOrder;
  p.complex = true;
  p.domain = {0.0, 2.0 * kPi, -8.0, 8.0};
  p.wavenumber_columns = true;
  return Kernel(std::move(p));
}

Kernel translation_family(TranslationProfile profile, std::string id) {
  if (!profile.value || !profile.derivative) {
    throw DomainError("translation profile needs a value and derivatives");
  }
  KernelParts p;
  p.id = std::move(id);
  auto f = profile.value;
  auto df = profile.derivative;
  p.eval = [f](double x, double y) { return Complex(f(x - y)); };
  p.dx = [df](double x, double y, int q) { return Complex(df(x - y, q)); };
  p.dx_order = ScalarFunction::kUnlimitedOrder;
  p.dy = [df](double x, double y, int q) { return Complex(sign_pow(q) * df(x - y, q)); };
  p.dy_order = ScalarFunction::kUnlimitedOrder;
  p.translation = std::move(profile);
  return Kernel(std::move(p));
}

Kernel gaussian() { return translation_family(gaussian_profile(), "gaussian"); }

Kernel gaussian_ramp() { return translation_family(gaussian_ramp_profile(), "gaussian_ramp"); }

Kernel exp_family(ScalarFunction F, ScalarFunction c, ScalarFunction b) {
  KernelParts p;
  p.id = "exp_family";
  p.eval = [F, c, b](double x, double y) { return F(y) * std::exp(-c(x) * b(y)); };
  if (c.analytic_order() >= 1) {
    p.dx = [F, c, b](double x, double y, int) {
      return -c.derivative(x, 1) * b(y) * F(y) * std::exp(-c(x) * b(y));
    };
    p.dx_order = 1;
  }
  p.domain = {-1.0, 1.0, -1.0, 1.0};
  return Kernel(std::move(p));
}

Kernel exp_exp(int sign) {
  if (sign != 1 && sign != -1) {
    throw DomainError("exp_exp sign must be +1 or -1");
  }
  const double s = sign;
  KernelParts p;
  p.id = sign > 0 ? "exp_exp_plus" : "exp_exp_minus";
  p.eval = [s](double x, double y) { return Complex(std::exp(x * std::exp(s * y))); };
  p.dx = [s](double x, double y, int q) {
    return Complex(std::exp(q * s * y) * std::exp(x * std::exp(s * y)));
  };
  p.dx_order = ScalarFunction::kUnlimitedOrder;
  p.dy = [s](double x, double y, int q) {
    const double e = std::exp(s * y);
    const double w = std::exp(x * e);
    const double g = x * s * e;
    return Complex(q == 1 ? g * w : (g * g + x * s * s * e) * w);
  };
  p.dy_order = 2;
  p.domain = {0.0, 1.0, -1.0, 1.0};
  return Kernel(std::move(p));
}

Kernel multiplication(ScalarFunction a0) {
  KernelParts p;
  p.id = "multiplication";
  p.diagonal = std::move(a0);
  return Kernel(std::move(p));
}

Kernel dilation(double c) {
  KernelParts p;
  p.id = "dilation";
  p.diagonal = ScalarFunction::constant(c);
  return Kernel(std::move(p));
}

Kernel identity_kernel() {
  KernelParts p;
  p.id = "identity";
  p.diagonal = ScalarFunction::constant(1.0);
  return Kernel(std::move(p));
}

Kernel kernel_from_id(const std::string& id) {
  if (id == "gaussian") return gaussian();
  if (id == "gaussian_ramp") return gaussian_ramp();
  if (id == "fourier") return fourier();
  if (id == "exp_exp_plus") return exp_exp(1);
  if (id == "exp_exp_minus") return exp_exp(-1);
  if (id == "identity") return identity_kernel();
  const auto eq = id.find('=');
  if (eq != std::string::npos) {
    const std::string head = id.substr(0, eq);
    const std::string arg = id.substr(eq + 1);
    if (head == "dilation") {
      const ScalarFunction c = coefficient_from_name(arg);
      if (!c.is_constant() || c(0.0).imag() != 0.0) {
        throw DomainError("dilation needs a real constant, got '" + arg + "'");
      }
      return dilation(c(0.0).real());
    }
    if (head == "multiplication") {
      return multiplication(coefficient_from_name(arg));
    }
  }
  throw DomainError("unknown kernel id '" + id + "'");
}

OperatorMatrix discretize(const Kernel& k, const Grid& grid) {
  if (k.is_diagonal()) {
    const auto& a0 = k.diagonal_coefficient();
    ComplexVector d(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
      d[i] = a0(grid.node(i));
    }
    return OperatorMatrix::diagonal(d, grid);
  }
  return nystrom(k, grid, 0);
}

OperatorMatrix discretize_derivative(const Kernel& k, const Grid& grid, int order) {
  if (order < 0) {
    throw DomainError("negative derivative order");
  }
  if (k.is_diagonal()) {
    const OperatorMatrix a0 = discretize(k, grid);
    return order == 0 ? a0 : diff_matrix(grid, order) * a0;
  }
  return nystrom(k, grid, order);
}

ComplexVector apply(const Kernel& k, const GeneralizedFunction& f) {
  const Grid& grid = f.grid();
  const int n = grid.size();
  if (k.is_diagonal()) {
    if (!f.singular().empty()) {
      throw DomainError("diagonal kernel '" + k.id() + "' acts on sampled functions only");
    }
    ComplexVector out = ComplexVector::Zero(n);
    if (f.smooth()) {
      const auto& a0 = k.diagonal_coefficient();
      for (int i = 0; i < n; ++i) {
        out[i] = a0(grid.node(i)) * (*f.smooth())[i];
      }
    }
    return out;
  }
  ComplexVector out = ComplexVector::Zero(n);
  if (f.smooth()) {
    out = discretize(k, grid).apply(f.continuous_remainder());
    for (const auto& jump : f.jumps()) {
      for (int i = 0; i < n; ++i) {
        out[i] += jump.height * jump_integral(k, grid, grid.node(i), jump.x0, jump.order);
      }
    }
  }
  for (const auto& t : f.singular()) {
    for (int i = 0; i < n; ++i) {
      const double x = grid.node(i);
      const Complex v = checked(grid_partial(k, grid, x, t.x0, t.q, false), k, x, t.x0);
      out[i] += t.a * sign_pow(t.q) * v;
    }
  }
  return out;
}

nlohmann::json to_json(const ConditionReport& r) {
  return {{"sigma_max", r.sigma_max},
          {"sigma_min", r.sigma_min},
          {"truncated", r.truncated},
          {"rank", r.rank}};
}

Inverse invert(const OperatorMatrix& m, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw DomainError("inversion threshold must lie in (0, 1)");
  }
  const ComplexMatrix& a = m.entries();
  const int n = m.size();
  ConditionReport report;

  const bool diagonal = (a - ComplexMatrix(a.diagonal().asDiagonal())).isZero(0.0);
  if (diagonal) {
    const RealVector sigma = a.diagonal().cwiseAbs();
    report.sigma_max = sigma.maxCoeff();
    report.sigma_min = sigma.minCoeff();
    ComplexVector inv = ComplexVector::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (sigma[i] > 0.0 && sigma[i] >= threshold * report.sigma_max) {
        inv[i] = 1.0 / a(i, i);
        ++report.rank;
      }
    }
    report.truncated = n - report.rank;
    if (report.rank == 0) {
      throw SingularTransformError("matrix has no singular value above the threshold");
    }
    return {OperatorMatrix::diagonal(inv, m.grid()), report};
  }

  auto build = [&](const auto& u, const RealVector& s, const auto& v) {
    report.sigma_max = s[0];
    report.sigma_min = s[n - 1];
    int rank = 0;
    while (rank < n && s[rank] > 0.0 && s[rank] >= threshold * report.sigma_max) {
      ++rank;
    }
    report.rank = rank;
    report.truncated = n - rank;
    if (rank == 0) {
      throw SingularTransformError("matrix has no singular value above the threshold");
    }
    const RealVector inv_s = s.head(rank).cwiseInverse();
    using Matrix = std::decay_t<decltype(u)>;
    Matrix pinv = v.leftCols(rank) * inv_s.asDiagonal() * u.leftCols(rank).adjoint();
    return pinv;
  };

  if (m.is_real()) {
    const RealMatrix re = a.real();
    Eigen::BDCSVD<RealMatrix> svd(re, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RealMatrix pinv = build(svd.matrixU(), svd.singularValues(), svd.matrixV());
    return {OperatorMatrix::from_real(pinv, m.grid()), report};
  }
  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  ComplexMatrix pinv = build(svd.matrixU(), svd.singularValues(), svd.matrixV());
  return {OperatorMatrix(std::move(pinv), m.grid()), report};
}

ResidualField kernel_pde_residual(const Kernel& k, int n, int m, const ScalarFunction& a,
                                  const ScalarFunction& b, std::span<const double> xs,
                                  std::span<const double> ys) {
  if (n < 0 || m < 0) {
    throw DomainError("negative derivative order in kernel equation");
  }
  if (k.is_diagonal()) {
    throw DomainError("diagonal kernel '" + k.id() + "' has no pointwise residual");
  }
  ResidualField r;
  r.xs = Eigen::Map<const RealVector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
  r.ys = Eigen::Map<const RealVector>(ys.data(), static_cast<Eigen::Index>(ys.size()));
  r.values.resize(r.xs.size(), r.ys.size());
  std::vector<double> binom(m + 1, 1.0);
  for (int j = 1; j <= m; ++j) {
    binom[j] = binom[j - 1] * (m - j + 1) / j;
  }
  for (Eigen::Index i = 0; i < r.xs.size(); ++i) {
    const double x = r.xs[i];
    const Complex ax = a(x);
    for (Eigen::Index j = 0; j < r.ys.size(); ++j) {
      const double y = r.ys[j];
      const Complex lhs = ax * k.dx(x, y, n);
      Complex rhs = 0.0;
      for (int q = 0; q <= m; ++q) {
        rhs += binom[q] * k.dy(x, y, q) * b.derivative(y, m - q);
      }
      r.values(i, j) = checked(lhs - sign_pow(n) * rhs, k, x, y);
    }
  }
  r.max_norm = r.values.size() == 0 ? 0.0 : r.values.cwiseAbs().maxCoeff();
  return r;
}

ResidualField kernel_pde_residual(const Kernel& k, int n, int m, const ScalarFunction& a,
                                  const ScalarFunction& b, const Grid& grid) {
  const RealVector cols = k.column_nodes(grid);
  const int drop = grid.periodic() ? 0 : 1;
  std::vector<double> xs(grid.nodes().begin() + drop, grid.nodes().end() - drop);
  std::vector<double> ys(cols.begin() + drop, cols.end() - drop);
  return kernel_pde_residual(k, n, m, a, b, xs, ys);
}

}  // namespace fcoord
