// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Usage: acceptance <path-to-fcoord-cli>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "fcoord/fcoord.hpp"

namespace {

using namespace fcoord;

struct Check {
  bool ok = true;
  std::vector<std::string> details;

  void expect_below(const std::string& what, double value, double bound) {
    const bool pass = value < bound;
    ok = ok && pass;
    details.push_back(fmt::format("{} = {:.3e} (< {:.0e}){}", what, value, bound, pass ? "" : " !"));
  }
  void expect_above(const std::string& what, double value, double bound) {
    const bool pass = value > bound;
    ok = ok && pass;
    details.push_back(fmt::format("{} = {:.6g} (> {:.6g}){}", what, value, bound, pass ? "" : " !"));
  }
  void expect(const std::string& what, bool pass) {
    ok = ok && pass;
    details.push_back(what + (pass ? "" : " !"));
  }
};

Grid two_pi(int n) { return make_uniform_grid(0.0, 2 * kPi, n, true); }

double max_entry(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Band mass computed directly from the entries.
double band_fraction(const ComplexMatrix& m, int bandwidth) {
  double inside = 0.0;
  double total = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double w = std::norm(m(i, j));
      total += w;
      if (std::abs(i - j) <= bandwidth) inside += w;
    }
  }
  return total == 0.0 ? 1.0 : inside / total;
}

Check fourier_locality() {
  Check c;
  const int n = 32;
  const Grid g = two_pi(n);
  // Oracle: the matrix e^{i x_p k_q} h with signed wavenumbers.
  ComplexMatrix W(n, n);
  ComplexMatrix B = ComplexMatrix::Zero(n, n);
  for (int q = 0; q < n; ++q) {
    const int k = q < n / 2 ? q : q - n;
    B(q, q) = Complex(0.0, k);
    for (int p = 0; p < n; ++p) {
      W(p, q) = std::exp(Complex(0.0, g.node(p) * k)) * g.spacing();
    }
  }
  const ComplexMatrix A = diff_matrix(g, 1).entries();
  c.expect_below("||AW - W diag(iy)|| (oracle W)", max_entry(A * W - W * B), 1e-8);
  c.expect_below("discretize(fourier) vs oracle W", max_entry(discretize(fourier(), g).entries() - W),
                 1e-12);
  const Conjugation conj = conjugate(diff_matrix(g, 1), discretize(fourier(), g));
  c.expect_above("locality score at bandwidth 0", band_fraction(conj.matrix.entries(), 0), 1 - 1e-6);
  const VerificationReport r = check_fourier_diagonalizes(g);
  c.expect("library check passes", r.passed);
  return c;
}

Check derivative_preservation() {
  Check c;
  const Grid g = two_pi(48);
  for (const Kernel& k : {gaussian(), gaussian_ramp()}) {
    const VerificationReport r = check_derivative_preservation(k, g, 16);
    c.expect_below(k.id() + " commutator d/dx", r.residuals.at("commutator_order1"), 1e-6);
    c.expect_below(k.id() + " 2-D d/dx1", r.residuals.at("partial_x_2d"), 1e-5);
    c.expect_below(k.id() + " 2-D d/dx2", r.residuals.at("partial_y_2d"), 1e-5);

    // Direct route on a band-limited vector: W v' against (W v)'.
    RealVector v(g.size());
    RealVector dv(g.size());
    for (int i = 0; i < g.size(); ++i) {
      const double x = g.node(i);
      v[i] = std::sin(2 * x) + 0.3 * std::cos(7 * x);
      dv[i] = 2 * std::cos(2 * x) - 2.1 * std::sin(7 * x);
    }
    const OperatorMatrix W = discretize(k, g);
    const ComplexVector lhs = W.apply(dv);
    const ComplexVector rhs = diff_matrix(g, 1).apply(W.apply(v));
    c.expect_below(k.id() + " |W v' - (W v)'|", (lhs - rhs).cwiseAbs().maxCoeff(), 1e-6);
  }
  return c;
}

Check smoothing_instances() {
  Check c;
  const Grid g = smoothing_grid();
  const Window w = trusted_window(g);
  const auto H = GeneralizedFunction::heaviside(g, 0.0);
  const auto delta = GeneralizedFunction::delta(g, 0.0);

  const RealVector phi = apply(gaussian(), H).real();
  double closed = 0.0;
  for (int i = w.first; i <= w.last; ++i) {
    closed = std::max(closed, std::abs(phi[i] - 0.5 * std::sqrt(kPi) * (1 + std::erf(g.node(i)))));
  }
  c.expect_below("phi vs (sqrt(pi)/2)(1+erf x)", closed, 1e-7);

  const RealVector dphi = diff_matrix(g, 1).apply(phi).real();
  double first = 0.0;
  for (int i = w.first; i <= w.last; ++i) {
    first = std::max(first, std::abs(dphi[i] - std::exp(-g.node(i) * g.node(i))));
  }
  c.expect_below("||phi' - psi|| (psi = e^{-x^2})", first, 1e-6);
  c.expect("library first-order check passes",
           smooth_from_generalized(ConstantCoefficientOperator::derivative(1), H, delta).passed);

  RealVector ramp(g.size());
  for (int i = 0; i < g.size(); ++i) ramp[i] = 0.5 * std::abs(g.node(i));
  const auto u = GeneralizedFunction::from_samples(g, ramp, {{0.0, 1.0, 1}});
  const RealVector phi2 = apply(gaussian(), u).real();
  const RealVector d2 = diff_matrix(g, 2).apply(phi2).real();
  double second = 0.0;
  for (int i = w.first; i <= w.last; ++i) {
    second = std::max(second, std::abs(d2[i] - std::exp(-g.node(i) * g.node(i))));
  }
  c.expect_below("ramp ||phi'' - psi||", second, 1e-5);
  const VerificationReport r =
      smooth_from_generalized(ConstantCoefficientOperator::derivative(2), u, delta, 1e-5);
  c.expect_below("ramp library operator residual", r.residuals.at("operator_residual"), 1e-5);
  return c;
}

Check smoothing_property() {
  Check c;
  SuiteOptions o;
  o.seed = 7;
  const VerificationReport r = run_suite("smooth-property", o);
  c.expect_below("worst ||L(D)phi - psi|| over 50 instances", r.residuals.at("max_operator_residual"),
                 1e-5);
  c.expect("50 of 50 instances pass", r.measurements.at("instances") == 50 &&
                                          r.measurements.at("passing_instances") == 50);
  return c;
}

Check product_impossibility() {
  Check c;
  const Grid g = make_uniform_grid(-6.0, 6.0, 64, false);
  const auto constant = check_product_preservation(ScalarFunction::constant(1.0), gaussian(), g);
  c.expect_above("a = 1, gaussian: score bw0", constant.measurements.at("score_bw0"), 1 - 1e-8);
  const ScalarFunction quad("x^2+1", [](double x) { return Complex(x * x + 1.0); });
  const auto diag = check_product_preservation(ScalarFunction::linear(), multiplication(quad), g);
  c.expect_above("a = x, multiplication kernel: score bw0", diag.measurements.at("score_bw0"),
                 1 - 1e-8);
  // Direct route for the trivial multiplication case.
  ComplexMatrix M = ComplexMatrix::Zero(64, 64);
  for (int i = 0; i < 64; ++i) M(i, i) = g.node(i);
  const ComplexMatrix Wm = discretize(multiplication(quad), g).entries();
  const ComplexMatrix conj_m = Wm.inverse() * M * Wm;
  c.expect_above("direct multiplication conjugate score bw0", band_fraction(conj_m, 0), 1 - 1e-8);

  const auto x_gauss = check_product_preservation(ScalarFunction::linear(), gaussian(), g);
  c.expect_below("a = x, gaussian: score bw2", x_gauss.measurements.at("score_bw2"), 0.9);
  const Inverse inv = invert(discretize(gaussian(), g));
  const ComplexMatrix conj_g = inv.matrix.entries() * M * discretize(gaussian(), g).entries();
  c.expect_below("direct truncated conjugate score bw2", band_fraction(conj_g, 2), 0.9);

  const VerificationReport nonlinear = run_suite("nonlinear");
  c.expect_below("rank-1 singular-value gap", nonlinear.residuals.at("rank_one.singular_value_gap"),
                 1e-8);
  // Independent rank-1 instance.
  const int n = 16;
  RealVector a(n);
  RealVector f(n);
  for (int i = 0; i < n; ++i) {
    a[i] = std::cos(0.7 * i);
    f[i] = 1.0 / (1.0 + i);
  }
  RealMatrix W = RealMatrix::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) W(i, j) += 0.05 * std::sin(1.3 * i + 0.4 * j);
  }
  const RealMatrix Winv = W.inverse();
  const RealMatrix T = Winv * (a * f.transpose()) * Winv.transpose();
  const Eigen::JacobiSVD<RealMatrix> svd(T);
  c.expect_below("direct rank-1 sigma2/sigma1", svd.singularValues()[1] / svd.singularValues()[0],
                 1e-8);
  return c;
}

Check kernel_equations() {
  Check c;
  const ScalarFunction one = ScalarFunction::constant(1.0);
  c.expect_below("gaussian n=m=1",
                 kernel_pde_residual(gaussian(), 1, 1, one, one, make_uniform_grid(-6, 6, 64, false))
                     .max_norm,
                 1e-10);
  c.expect_below("fourier n=1 m=0 b=-iy",
                 kernel_pde_residual(fourier(), 1, 0, one, coefficient_from_name("-i*y"), two_pi(32))
                     .max_norm,
                 1e-10);
  const Grid unit = make_uniform_grid(0.0, 1.0, 21, false);
  const ScalarFunction x = coefficient_from_name("x");
  c.expect_below("exp_exp(-1) a=x", kernel_pde_residual(exp_exp(-1), 1, 1, x, one, unit).max_norm,
                 1e-10);
  const double plus = kernel_pde_residual(exp_exp(1), 1, 1, x, one, unit).max_norm;
  c.expect_above("exp_exp(+1) a=x", plus, 1.0);

  // Hand evaluation of both signs from closed-form partials.
  // Same sample points the library used.
  const ResidualField field = kernel_pde_residual(exp_exp(1), 1, 1, x, one, unit);
  double minus_direct = 0.0;
  double plus_direct = 0.0;
  for (Eigen::Index i = 0; i < field.xs.size(); ++i) {
    for (Eigen::Index j = 0; j < field.ys.size(); ++j) {
      const double xv = field.xs[i];
      const double yv = field.ys[j];
      for (int s : {-1, 1}) {
        const double e = std::exp(s * yv);
        const double w = std::exp(xv * e);
        const double wx = e * w;
        const double wy = xv * s * e * w;
        const double r = std::abs(xv * wx + wy);
        (s < 0 ? minus_direct : plus_direct) = std::max(s < 0 ? minus_direct : plus_direct, r);
      }
    }
  }
  c.expect_below("hand-evaluated exp_exp(-1)", minus_direct, 1e-10);
  c.expect_below("library vs hand-evaluated exp_exp(+1)", std::abs(plus - plus_direct) / plus_direct,
                 1e-9);
  return c;
}

Check riccati() {
  Check c;
  const Grid g = make_uniform_grid(0.0, 1.0, 33, false);
  const ScalarFunction one = ScalarFunction::constant(1.0);
  const ScalarFunction y2 = coefficient_from_name("y^2");
  const Kernel k = riccati_kernel(one, y2, coefficient_from_name("y"), g);
  c.expect_below("second-order residual", kernel_pde_residual(k, 2, 0, one, y2, g).max_norm, 1e-6);
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    for (int j = 0; j <= 40; ++j) {
      const double x = i / 40.0;
      const double y = j / 40.0;
      worst = std::max(worst, std::abs(k(x, y).real() - std::exp(x * y)));
    }
  }
  c.expect_below("max |omega - e^{xy}| off the grid", worst, 1e-6);
  return c;
}

Check nonlinear_tensor() {
  Check c;
  const Grid p32 = two_pi(32);
  RealVector s32(32);
  for (int i = 0; i < 32; ++i) s32[i] = std::sin(p32.node(i));
  c.expect_below("identity kernel",
                 check_nonlinear_tensor(dilation(1.0), s32, p32, 1e-9).residuals.at("tensor_residual"),
                 1e-9);
  // Identity case reduces to (sin')^2 = cos^2.
  const RealVector d = diff_matrix(p32, 1).apply(s32).real();
  double identity_direct = 0.0;
  for (int i = 0; i < 32; ++i) {
    identity_direct = std::max(identity_direct, std::abs(d[i] * d[i] - std::pow(std::cos(p32.node(i)), 2)));
  }
  c.expect_below("identity vs cos^2", identity_direct, 1e-9);

  const Grid g = make_uniform_grid(-6.0, 6.0, 64, true);
  RealVector s(64);
  for (int i = 0; i < 64; ++i) s[i] = std::sin(g.node(i));
  const VerificationReport r = check_nonlinear_tensor(gaussian(), s, g);
  c.expect_below("gaussian library residual", r.residuals.at("tensor_residual"), 1e-5);

  // Differentiate-then-square oracle against a hand-written double sum
  // with the periodized analytic x-derivative.
  const RealVector phi = apply(gaussian(), GeneralizedFunction::from_samples(g, s)).real();
  const RealVector dphi = diff_matrix(g, 1).apply(phi).real();
  const double L = g.length();
  auto wx = [L](double t) {
    double acc = 0.0;
    for (int m = -3; m <= 3; ++m) {
      const double u = t + m * L;
      acc += -2.0 * u * std::exp(-u * u);
    }
    return acc;
  };
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    double sum = 0.0;
    for (int j = 0; j < 64; ++j) {
      for (int l = 0; l < 64; ++l) {
        sum += wx(g.node(i) - g.node(j)) * wx(g.node(i) - g.node(l)) * g.weight(j) * g.weight(l) *
               s[j] * s[l];
      }
    }
    worst = std::max(worst, std::abs(dphi[i] * dphi[i] - sum));
  }
  c.expect_below("gaussian (phi')^2 vs double sum", worst, 1e-5);
  return c;
}

Check transformation_laws() {
  Check c;
  const VerificationReport metric = check_metric_invariance(7, 20, 16, 1e-8);
  c.expect_below("library inner-product invariance (20 instances)",
                 metric.residuals.at("inner_product"), 1e-8);
  // Independent instances built from a fixed deterministic recipe.
  const int n = 16;
  const Grid g = make_uniform_grid(0.0, 1.0, n, false);
  double worst = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    RealMatrix B(n, n);
    RealMatrix R(n, n);
    ComplexVector phi(n);
    ComplexVector psi(n);
    for (int i = 0; i < n; ++i) {
      phi[i] = {std::sin(inst + 0.3 * i), std::cos(2.0 * inst - i)};
      psi[i] = {std::cos(0.7 * inst * i), std::sin(inst + i * i)};
      for (int j = 0; j < n; ++j) {
        B(i, j) = std::sin(1.7 * i + 2.3 * j + inst);
        R(i, j) = std::cos(0.9 * i * j + inst);
      }
    }
    const RealMatrix G = B * B.transpose() / n + RealMatrix::Identity(n, n);
    const RealMatrix W = RealMatrix::Identity(n, n) + 0.3 * R / std::sqrt(double(n));
    const Metric pulled = transform_metric(Metric(OperatorMatrix::from_real(G, g)),
                                           OperatorMatrix::from_real(W, g));
    const ComplexVector wphi = W.cast<Complex>() * phi;
    const ComplexVector wpsi = W.cast<Complex>() * psi;
    const Complex direct = wphi.dot(G.cast<Complex>() * wpsi);
    worst = std::max(worst, std::abs(metric_inner_product(pulled, phi, psi) - direct) /
                                std::max(1.0, std::abs(direct)));
  }
  c.expect_below("direct inner-product invariance (20 instances)", worst, 1e-8);

  const VerificationReport spec = check_spectrum_preservation(8, 1e-6);
  for (const auto& [label, value] : spec.residuals) {
    c.expect_below("library spectrum " + label, value, 1e-6);
  }
  // Direct: D^2 on a periodic grid has eigenvalues -k^2.
  const Grid p = two_pi(16);
  const OperatorMatrix W = OperatorMatrix::from_real(random_well_conditioned(16, 3), p);
  const Conjugation conj = conjugate(diff_matrix(p, 2), W);
  ComplexVector expected(16);
  const auto k = fft_wavenumbers(16);
  for (int j = 0; j < 16; ++j) expected[j] = -double(k[j]) * k[j];
  c.expect_below("conjugated D^2 spectrum vs -k^2",
                 spectrum_distance(sorted_eigenvalues(conj.matrix), expected), 1e-6);
  return c;
}

Check determinism(const std::string& cli) {
  Check c;
  namespace fs = std::filesystem;
  const fs::path root = fs::temp_directory_path() / "fcoord_acceptance_determinism";
  fs::remove_all(root);
  std::vector<fs::path> dirs{root / "first", root / "second"};
  for (const auto& d : dirs) {
    const std::string cmd = "\"" + cli + "\" verify --suite all --seed 7 --out \"" + d.string() +
                            "\" > \"" + (root.string() + ".log") + "\" 2>&1";
    fs::create_directories(root);
    const int status = std::system(cmd.c_str());
    c.expect("cli exit status 0 for " + d.filename().string(), status == 0);
  }
  int compared = 0;
  bool identical = true;
  if (fs::exists(dirs[0])) {
    for (const auto& entry : fs::directory_iterator(dirs[0])) {
      if (entry.path().extension() != ".json") continue;
      const fs::path other = dirs[1] / entry.path().filename();
      identical = identical && fs::exists(other) &&
                  read_text_file(entry.path()) == read_text_file(other);
      ++compared;
    }
  }
  c.expect(fmt::format("{} JSON reports byte-identical", compared), identical && compared == 11);
  fs::remove_all(root);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <fcoord-cli>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::vector<std::pair<std::string, std::function<Check()>>> criteria{
      {"fourier locality", fourier_locality},
      {"derivative preservation", derivative_preservation},
      {"smoothing of generalized solutions", smoothing_instances},
      {"smoothing property suite", smoothing_property},
      {"product impossibility", product_impossibility},
      {"kernel equation residuals", kernel_equations},
      {"riccati kernel", riccati},
      {"nonlinear tensor", nonlinear_tensor},
      {"transformation laws", transformation_laws},
      {"determinism", [&] { return determinism(cli); }},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    try {
      c = criteria[i].second();
    } catch (const std::exception& e) {
      c.ok = false;
      c.details.push_back(std::string("exception: ") + e.what());
    }
    failures += c.ok ? 0 : 1;
    std::cout << fmt::format("criterion {:>2} {:<36} {}\n", i + 1, criteria[i].first,
                             c.ok ? "PASS" : "FAIL");
    for (const auto& d : c.details) {
      std::cout << "    " << d << "\n";
    }
    std::cout.flush();
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
