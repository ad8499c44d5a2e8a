#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "fcoord/errors.hpp"
#include "fcoord/kernels.hpp"

namespace fcoord {

namespace {

constexpr double kBlowUp = 1e6;
constexpr int kSubsteps = 4;

// f, f_x = g and f_xx = g_x tabulated at (x_i, y_j), column-major by y.
struct RiccatiTable {
  double lo = 0.0;
  double h = 0.0;
  int n = 0;
  RealMatrix f;
  RealMatrix g;
  RealMatrix gx;

  // Quintic Hermite interpolation of f in x along column j.
  double column(int j, double x) const {
    const double t = (x - lo) / h;
    const int i = std::clamp(static_cast<int>(std::floor(t)), 0, n - 2);
    const double s = t - i;
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double s4 = s3 * s;
    const double s5 = s4 * s;
    const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5);
    const double h3 = 0.5 * (s3 - 2 * s4 + s5);
    const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
    const double h5 = 10 * s3 - 15 * s4 + 6 * s5;
    return h0 * f(i, j) + h1 * h * g(i, j) + h2 * h * h * gx(i, j) + h5 * f(i + 1, j) +
           h4 * h * g(i + 1, j) + h3 * h * h * gx(i + 1, j);
  }

  // Cubic Lagrange interpolation across columns; exact on a column.
  double value(double x, double y) const {
    const double t = (y - lo) / h;
    const double nearest = std::round(t);
    if (std::abs(t - nearest) < 1e-9 && nearest >= 0 && nearest <= n - 1) {
      return column(static_cast<int>(nearest), x);
    }
    const int j0 = std::clamp(static_cast<int>(std::floor(t)) - 1, 0, n - 4);
    double acc = 0.0;
    for (int a = 0; a < 4; ++a) {
      double basis = 1.0;
      for (int b = 0; b < 4; ++b) {
        if (a != b) {
          basis *= (t - (j0 + b)) / static_cast<double>(a - b);
        }
      }
      acc += basis * column(j0 + a, x);
    }
    return acc;
  }
};

double real_value(const ScalarFunction& fn, double x, const char* what) {
  const Complex v = fn(x);
  if (v.imag() != 0.0 || !std::isfinite(v.real())) {
    throw DomainError(std::string("Riccati ") + what + " must be real and finite at " +
                      std::to_string(x));
  }
  return v.real();
}

}  // namespace

Kernel riccati_kernel(const ScalarFunction& a, const ScalarFunction& b, const ScalarFunction& g0,
                      const Grid& grid) {
  if (grid.periodic()) {
    throw DomainError("Riccati kernels are tabulated on non-periodic grids");
  }
  auto table = std::make_shared<RiccatiTable>();
  const int n = grid.size();
  table->lo = grid.lo();
  table->h = grid.spacing();
  table->n = n;
  table->f.resize(n, n);
  table->g.resize(n, n);
  table->gx.resize(n, n);

  const double dt = grid.spacing() / kSubsteps;
  auto inv_a = [&](double x) {
    const double v = real_value(a, x, "coefficient a");
    if (v == 0.0) {
      throw DomainError("Riccati coefficient a vanishes at x = " + std::to_string(x));
    }
    return 1.0 / v;
  };

  for (int j = 0; j < n; ++j) {
    const double y = grid.node(j);
    const double by = real_value(b, y, "coefficient b");
    auto rhs = [&](double x, double g) { return by * inv_a(x) - g * g; };
    double g = real_value(g0, y, "initial value g0");
    double f = 0.0;
    table->f(0, j) = f;
    table->g(0, j) = g;
    table->gx(0, j) = rhs(grid.lo(), g);
    for (int i = 0; i + 1 < n; ++i) {
      for (int s = 0; s < kSubsteps; ++s) {
        const double x = grid.node(i) + s * dt;
        // (g, f) with f' = g
        const double k1 = rhs(x, g);
        const double l1 = g;
        const double k2 = rhs(x + 0.5 * dt, g + 0.5 * dt * k1);
        const double l2 = g + 0.5 * dt * k1;
        const double k3 = rhs(x + 0.5 * dt, g + 0.5 * dt * k2);
        const double l3 = g + 0.5 * dt * k2;
        const double k4 = rhs(x + dt, g + dt * k3);
        const double l4 = g + dt * k3;
        g += dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
        f += dt / 6.0 * (l1 + 2 * l2 + 2 * l3 + l4);
        if (!std::isfinite(g) || std::abs(g) > kBlowUp) {
          throw RiccatiSingularityError("Riccati solution blows up near x = " +
                                            std::to_string(x + dt) + ", y = " + std::to_string(y),
                                        x + dt, y);
        }
      }
      table->f(i + 1, j) = f;
      table->g(i + 1, j) = g;
      table->gx(i + 1, j) = rhs(grid.node(i + 1), g);
    }
  }

  KernelParts p;
  p.id = "riccati";
  p.eval = [table](double x, double y) { return Complex(std::exp(table->value(x, y))); };
  p.domain = {grid.lo(), grid.hi(), grid.lo(), grid.hi()};
  return Kernel(std::move(p));
}

}  // namespace fcoord
