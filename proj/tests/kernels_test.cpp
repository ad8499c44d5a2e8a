#include <cmath>

#include "test_support.hpp"

namespace fcoord {
namespace {

using testing::max_abs;
using testing::sample_fn;

Grid line64() { return make_uniform_grid(-6.0, 6.0, 64, false); }

TEST(Kernel, ClosedFormValues) {
  const Kernel g = gaussian();
  EXPECT_NEAR(g(0.3, -0.2).real(), std::exp(-0.25), 1e-15);
  const Kernel f = fourier();
  EXPECT_TRUE(f.is_complex());
  EXPECT_NEAR(std::abs(f(1.5, 2.0) - std::exp(Complex(0.0, 3.0))), 0.0, 1e-15);
  const Kernel e = exp_exp(-1);
  EXPECT_NEAR(e(0.5, 0.2).real(), std::exp(0.5 * std::exp(-0.2)), 1e-14);
  EXPECT_NEAR(exp_exp(1)(0.5, 0.2).real(), std::exp(0.5 * std::exp(0.2)), 1e-14);
  EXPECT_THROW(exp_exp(2), DomainError);
}

TEST(Kernel, AnalyticPartialsMatchFiniteDifferences) {
  testing::SplitMix rng(17);
  for (const Kernel& k : {gaussian(), gaussian_ramp(), fourier(), exp_exp(1), exp_exp(-1)}) {
    const Rectangle& r = k.domain();
    for (int trial = 0; trial < 20; ++trial) {
      const double x = rng.uniform(r.x_lo + 0.1, r.x_hi - 0.1);
      const double y = rng.uniform(r.y_lo + 0.1, r.y_hi - 0.1);
      const double h = 1e-4;
      const Complex fdx = (k(x + h, y) - k(x - h, y)) / (2 * h);
      const Complex fdy = (k(x, y + h) - k(x, y - h)) / (2 * h);
      const double scale = std::max(1.0, std::abs(k(x, y)));
      EXPECT_NEAR(std::abs(k.dx(x, y, 1) - fdx), 0.0, 1e-6 * scale) << k.id();
      EXPECT_NEAR(std::abs(k.dy(x, y, 1) - fdy), 0.0, 1e-6 * scale) << k.id();
    }
  }
}

TEST(Kernel, InconsistentPartialFailsSelfCheck) {
  KernelParts parts;
  parts.id = "broken";
  parts.eval = [](double x, double y) { return Complex(std::sin(x * y)); };
  parts.dx = [](double x, double y, int) { return Complex(2.0 * y * std::cos(x * y)); };
  parts.dx_order = 1;
  parts.domain = {-1, 1, -1, 1};
  EXPECT_THROW(Kernel{parts}, EvaluationError);
}

TEST(Kernel, FiniteDifferenceFallbackCanBeDisabled) {
  const Kernel k = exp_exp(-1);
  EXPECT_NO_THROW(k.dy(0.5, 0.1, 3));
  const Kernel strict = k.without_finite_differences();
  EXPECT_THROW(strict.dy(0.5, 0.1, 3), UnsupportedOrderError);
}

TEST(Kernel, RegistryIds) {
  EXPECT_EQ(kernel_from_id("gaussian").id(), "gaussian");
  EXPECT_TRUE(kernel_from_id("identity").is_diagonal());
  EXPECT_TRUE(kernel_from_id("dilation=2.5").is_diagonal());
  EXPECT_TRUE(kernel_from_id("multiplication=x").is_diagonal());
  EXPECT_THROW(kernel_from_id("lorentzian"), DomainError);
  EXPECT_THROW(kernel_from_id("multiplication=sinh"), DomainError);
  EXPECT_THROW(gaussian().diagonal_coefficient(), DomainError);
  EXPECT_THROW(exp_exp(1).translation(), PreconditionError);
}

TEST(Discretize, GaussianRowSums) {
  const Grid g = line64();
  const OperatorMatrix W = discretize(gaussian(), g);
  const ComplexVector rows = W.entries().rowwise().sum();
  // Rows whose Gaussian has decayed at both ends; near the ends the
  // trapezoid rule cuts the bump off mid-slope.
  int checked = 0;
  for (int i = 0; i < g.size(); ++i) {
    const double x = g.node(i);
    if (std::abs(x) < 1.5) {
      EXPECT_NEAR(rows[i].real(), std::sqrt(kPi), 1e-6) << x;
      ++checked;
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(Discretize, GaussianSymmetricAfterUnweighting) {
  const Grid g = line64();
  const ComplexMatrix W = discretize(gaussian(), g).entries();
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.size(); ++j) {
      EXPECT_EQ(W(i, j) / g.weight(j), W(j, i) / g.weight(i));
    }
  }
}

TEST(Discretize, MultiplicationIsUnweightedDiagonal) {
  const Grid g = line64();
  const OperatorMatrix M = discretize(multiplication(coefficient_from_name("x^2")), g);
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.size(); ++j) {
      EXPECT_EQ(M(i, j), i == j ? Complex(g.node(i) * g.node(i)) : Complex(0.0));
    }
  }
}

TEST(Discretize, FourierIsScaledDft) {
  const int n = 16;
  const Grid g = make_uniform_grid(0.0, 2 * kPi, n, true);
  const ComplexMatrix W = discretize(fourier(), g).entries();
  const std::vector<int> k = fft_wavenumbers(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex dft = std::exp(Complex(0.0, 2 * kPi * i * k[j] / n)) * (2 * kPi / n);
      EXPECT_NEAR(std::abs(W(i, j) - dft), 0.0, 1e-13);
    }
  }
}

TEST(Discretize, PeriodizedTranslationKernelIsCirculant) {
  const Grid g = make_uniform_grid(0.0, 2 * kPi, 24, true);
  const ComplexMatrix W = discretize(gaussian(), g).entries();
  for (int i = 0; i < 24; ++i) {
    for (int j = 0; j < 24; ++j) {
      EXPECT_NEAR(std::abs(W(i, j) - W((i + 1) % 24, (j + 1) % 24)), 0.0, 1e-15);
    }
  }
}

TEST(Discretize, NonFiniteValueNamesLocation) {
  const Kernel blowup = exp_family(ScalarFunction::constant(1.0), coefficient_from_name("-1"),
                                   coefficient_from_name("exp(y)"));
  const Grid g = make_uniform_grid(0.0, 700.0, 8, false);
  try {
    discretize(blowup, g);
    FAIL() << "expected EvaluationError";
  } catch (const EvaluationError& e) {
    EXPECT_NE(std::string(e.what()).find("100.0"), std::string::npos) << e.what();
  }
}

TEST(Apply, GaussianOnDelta) {
  const Grid g = line64();
  const double x0 = 0.37;
  const ComplexVector v = apply(gaussian(), GeneralizedFunction::delta(g, x0));
  const RealVector exact = sample_fn(g, [x0](double x) { return std::exp(-(x - x0) * (x - x0)); });
  EXPECT_LT(max_abs(ComplexVector(v - exact.cast<Complex>())), 1e-12);
}

TEST(Apply, GaussianOnDeltaDerivative) {
  const Grid g = line64();
  const ComplexVector v = apply(gaussian(), GeneralizedFunction::delta(g, 0.0, 1));
  const RealVector exact = sample_fn(g, [](double x) { return -2 * x * std::exp(-x * x); });
  EXPECT_LT(max_abs(ComplexVector(v - exact.cast<Complex>())), 1e-10);
}

TEST(Apply, GaussianOnHeaviside) {
  const Grid g = line64();
  const ComplexVector v = apply(gaussian(), GeneralizedFunction::heaviside(g, 0.0));
  const double half_root_pi = 0.5 * std::sqrt(kPi);
  for (int i = 0; i < g.size(); ++i) {
    const double x = g.node(i);
    // The input lives on [-6, 6], so the image is truncated at y = 6.
    EXPECT_NEAR(v[i].real(), half_root_pi * (std::erf(x) - std::erf(x - 6.0)), 1e-7) << x;
    if (x < 0.5) {
      EXPECT_NEAR(v[i].real(), half_root_pi * (1 + std::erf(x)), 1e-7) << x;
    }
  }
}

TEST(Apply, HeavisideOffNode) {
  const Grid g = line64();
  const double x0 = 0.123;
  const ComplexVector v = apply(gaussian(), GeneralizedFunction::heaviside(g, x0));
  for (int i = 0; i < g.size(); ++i) {
    const double x = g.node(i);
    EXPECT_NEAR(v[i].real(), 0.5 * std::sqrt(kPi) * (std::erf(x - x0) - std::erf(x - 6.0)), 1e-7);
  }
}

TEST(Apply, Linearity) {
  testing::SplitMix rng(23);
  const Grid g = line64();
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = GeneralizedFunction::delta(g, rng.uniform(-3, 3), rng.integer(0, 2)) +
                   GeneralizedFunction::heaviside(g, rng.uniform(-3, 3));
    const auto h = GeneralizedFunction::from_samples(
        g, sample_fn(g, [&](double x) { return std::exp(-x * x) * std::cos(3 * x); }));
    const double a = rng.uniform(-2, 2);
    const double b = rng.uniform(-2, 2);
    const ComplexVector lhs = apply(gaussian(), a * f + b * h);
    const ComplexVector rhs = a * apply(gaussian(), f) + b * apply(gaussian(), h);
    EXPECT_LT(max_abs(ComplexVector(lhs - rhs)), 1e-12);
  }
}

TEST(Apply, DiagonalKernelMultiplies) {
  const Grid g = line64();
  const RealVector s = sample_fn(g, [](double x) { return std::sin(x); });
  const ComplexVector v = apply(identity_kernel(), GeneralizedFunction::from_samples(g, s));
  EXPECT_EQ(v.real(), s);
  EXPECT_THROW(apply(identity_kernel(), GeneralizedFunction::delta(g, 0.0)), DomainError);
}

TEST(Invert, IdentityAndDiagonal) {
  const Grid g = make_uniform_grid(0.0, 1.0, 8, false);
  const Inverse id = invert(OperatorMatrix::identity(g));
  EXPECT_EQ(id.matrix.entries(), ComplexMatrix::Identity(8, 8));
  EXPECT_EQ(id.report.truncated, 0);
  EXPECT_EQ(id.report.rank, 8);

  ComplexVector d = ComplexVector::Constant(8, 2.0);
  d[1] = 4.0;
  const Inverse inv = invert(OperatorMatrix::diagonal(d, g));
  EXPECT_EQ(inv.matrix(0, 0), Complex(0.5));
  EXPECT_EQ(inv.matrix(1, 1), Complex(0.25));
  EXPECT_EQ(inv.report.sigma_max, 4.0);
  EXPECT_EQ(inv.report.sigma_min, 2.0);
}

TEST(Invert, FourierResidual) {
  const Grid g = make_uniform_grid(0.0, 2 * kPi, 32, true);
  const OperatorMatrix W = discretize(fourier(), g);
  const Inverse inv = invert(W);
  EXPECT_LT(max_abs(ComplexVector((inv.matrix * W).entries().reshaped() -
                                  ComplexMatrix::Identity(32, 32).reshaped())),
            1e-8);
  EXPECT_EQ(inv.report.truncated, 0);
  EXPECT_NEAR(inv.report.condition(), 1.0, 1e-12);
}

TEST(Invert, TruncatesIllConditionedGaussian) {
  const Grid g = make_uniform_grid(0.0, 2 * kPi, 32, true);
  const Inverse inv = invert(discretize(gaussian(), g), 1e-10);
  EXPECT_GT(inv.report.truncated, 0);
  EXPECT_EQ(inv.report.rank + inv.report.truncated, 32);
  EXPECT_LT(inv.report.sigma_min, 1e-10 * inv.report.sigma_max);
  EXPECT_TRUE(inv.matrix.entries().allFinite());
}

TEST(Invert, DilationInverseIsExact) {
  const Grid g = line64();
  for (double c : {2.0, -0.3, 7.0}) {
    const Inverse inv = invert(discretize(dilation(c), g));
    EXPECT_EQ(inv.matrix.entries(), discretize(dilation(1.0 / c), g).entries());
  }
}

TEST(Invert, Errors) {
  const Grid g = make_uniform_grid(0.0, 1.0, 8, false);
  const OperatorMatrix zero(ComplexMatrix::Zero(8, 8), g);
  EXPECT_THROW(invert(zero), SingularTransformError);
  EXPECT_THROW(invert(OperatorMatrix::identity(g), 0.0), DomainError);
  EXPECT_THROW(invert(OperatorMatrix::identity(g), 1.0), DomainError);
}

TEST(Residual, TranslationKernelsSatisfyTransport) {
  const Grid g = line64();
  const ScalarFunction one = ScalarFunction::constant(1.0);
  for (const Kernel& k : {gaussian(), gaussian_ramp()}) {
    EXPECT_LT(kernel_pde_residual(k, 1, 1, one, one, g).max_norm, 1e-10) << k.id();
  }
}

TEST(Residual, FourierFirstOrder) {
  const Grid g = make_uniform_grid(0.0, 2 * kPi, 32, true);
  const ResidualField r = kernel_pde_residual(fourier(), 1, 0, ScalarFunction::constant(1.0),
                                              coefficient_from_name("-i*y"), g);
  EXPECT_LT(r.max_norm, 1e-10);
}

TEST(Residual, FourierSecondOrderNeedsNegativeSquare) {
  const Grid g = make_uniform_grid(0.0, 2 * kPi, 32, true);
  const ScalarFunction one = ScalarFunction::constant(1.0);
  EXPECT_LT(kernel_pde_residual(fourier(), 2, 0, one, coefficient_from_name("-y^2"), g).max_norm,
            1e-8);
  // With +y^2 the residual is -2 y^2 omega, so the largest column dominates.
  const ResidualField wrong = kernel_pde_residual(fourier(), 2, 0, one, coefficient_from_name("y^2"), g);
  const double ymax = 16.0;
  EXPECT_NEAR(wrong.max_norm, 2 * ymax * ymax, 1e-6 * ymax * ymax);
}

TEST(Residual, ExpExpSigns) {
  const Grid g = make_uniform_grid(0.0, 1.0, 21, false);
  const ScalarFunction x = coefficient_from_name("x");
  const ScalarFunction one = ScalarFunction::constant(1.0);
  EXPECT_LT(kernel_pde_residual(exp_exp(-1), 1, 1, x, one, g).max_norm, 1e-10);
  const ResidualField plus = kernel_pde_residual(exp_exp(1), 1, 1, x, one, g);
  // Oracle: residual 2 x e^y e^{x e^y} at every sample.
  double predicted = 0.0;
  for (int i = 0; i < plus.xs.size(); ++i) {
    for (int j = 0; j < plus.ys.size(); ++j) {
      const double xv = plus.xs[i];
      const double yv = plus.ys[j];
      const double expected = 2 * xv * std::exp(yv) * std::exp(xv * std::exp(yv));
      EXPECT_NEAR(std::abs(plus.values(i, j)), expected, 1e-9 * std::max(1.0, expected));
      predicted = std::max(predicted, expected);
    }
  }
  EXPECT_NEAR(plus.max_norm, predicted, 1e-9 * predicted);
  EXPECT_GT(plus.max_norm, 1.0);
}

TEST(Residual, PointwiseOverloadSkipsGrid) {
  const std::vector<double> xs{0.0, 0.5};
  const std::vector<double> ys{-0.5, 0.25};
  const ResidualField r = kernel_pde_residual(gaussian(), 1, 1, ScalarFunction::constant(1.0),
                                              ScalarFunction::constant(2.0), xs, ys);
  ASSERT_EQ(r.values.rows(), 2);
  // w_y = -w_x for a translation kernel, so w_x + 2 w_y = -w_x.
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double t = xs[i] - ys[j];
      EXPECT_NEAR(std::abs(r.values(i, j)), std::abs(2 * t * std::exp(-t * t)), 1e-12);
    }
  }
}

}  // namespace
}  // namespace fcoord
