#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fcoord/distributions.hpp"
#include "fcoord/kernels.hpp"
#include "fcoord/operators.hpp"

namespace fcoord {

/// Outcome of one verification. `residuals` are gated against `tolerances`
/// under the same label; `measurements` are reported but never gated.
struct VerificationReport {
  std::string name;
  bool passed = true;
  std::map<std::string, double> residuals;
  std::map<std::string, double> tolerances;
  std::map<std::string, double> measurements;
  std::optional<ConditionReport> condition;
  std::vector<std::string> notes;

  void gate(const std::string& label, double residual, double tolerance);
  void measure(const std::string& label, double value) { measurements[label] = value; }
  /// passed = every residual <= its tolerance (NaN fails).
  void refresh();
  /// Copies another report's entries under "prefix.label".
  void absorb(const std::string& prefix, const VerificationReport& other);
};

nlohmann::json to_json(const VerificationReport& r);

/// A = D^order (spectral), W = fourier discretization, B = diag((i y_j)^order).
/// Gates ||AW - WB||_max and 1 - locality_score(W^+ A W, 0).
VerificationReport check_fourier_diagonalizes(const Grid& grid, int order = 1,
                                              double tolerance = 1e-8);

/// Commutators of a translation kernel with D and D^2 on a periodic grid,
/// relative to ||W||_max, plus band-limited vector residuals and the 2-D
/// tensor-product variant with both partial derivatives on an n2d^2 grid.
/// Throws PreconditionError for non-translation kernels or non-periodic grids.
VerificationReport check_derivative_preservation(const Kernel& k, const Grid& grid, int n2d = 16,
                                                 double tolerance = 1e-6,
                                                 double tolerance_2d = 1e-5);

/// Grid used by default for smooth_from_generalized: [-12, 12] with h = 0.02.
Grid smoothing_grid();

/// Residuals are taken over the window of nodes at distance >= L/4 from
/// both ends, where the truncated convolution agrees with the full one.
struct Window {
  int first = 0;
  int last = 0;
};
Window trusted_window(const Grid& grid);

/// Checks L u = v by pairing with 10 seeded Gaussian test functions
/// (relative 1e-6, NotASolutionError otherwise), then mollifies both sides
/// with the Gaussian kernel and gates ||L(D) phi - psi||_max over the window.
VerificationReport smooth_from_generalized(const ConstantCoefficientOperator& L,
                                           const GeneralizedFunction& u,
                                           const GeneralizedFunction& v, double tolerance = 1e-6);

/// Conjugates M = diag(a(x_i)) by discretize(k). The candidate diag(a) is
/// tried first in residual form; otherwise the truncated pseudo-inverse is
/// used. Trivial cases (constant a or diagonal kernel) gate
/// 1 - score_0 <= 1e-8; others gate score_2 <= nonlocality_threshold.
VerificationReport check_product_preservation(const ScalarFunction& a, const Kernel& k,
                                              const Grid& grid,
                                              double nonlocality_threshold = 0.9);

/// Residuals of a(x) w_x + (w b)_y = 0 with a = x, b = 1 for both exp_exp
/// signs on a samples x samples lattice of the rectangle. The minus sign is
/// gated at 1e-10; the plus sign is gated against the predicted 2 x e^y w.
VerificationReport check_xdx_intertwine(const Rectangle& rect = {0.0, 1.0, -1.0, 1.0},
                                        int samples = 21);

/// phi = apply(k, phi_tilde); compares (D phi)^2 with the double sum
/// sum_{j,l} w_x(x, u_j) w_x(x, v_l) w_j w_l phi_tilde_j phi_tilde_l.
VerificationReport check_nonlinear_tensor(const Kernel& k, const RealVector& phi_tilde,
                                          const Grid& grid, double tolerance = 1e-5);

/// Rank of a f^T survives W^-1 (a f^T) W^-T for a seeded well-conditioned W:
/// gates sigma_2 / sigma_1.
VerificationReport check_rank_one_preservation(const RealVector& a, const RealVector& f,
                                               std::uint64_t seed, double tolerance = 1e-8);

/// Random well-conditioned transform I + 0.3 R / sqrt(n) with R standard normal.
RealMatrix random_well_conditioned(int n, std::uint64_t seed);

/// (phi~, psi~)_{W* G W} against (W phi~, W psi~)_G over `instances` seeded
/// random SPD metrics and transforms.
VerificationReport check_metric_invariance(std::uint64_t seed, int instances = 20, int n = 16,
                                           double tolerance = 1e-8);

/// Spectra of A and W^+ A W for A = D^2 (periodic, n = 16) and a random A.
VerificationReport check_spectrum_preservation(std::uint64_t seed, double tolerance = 1e-6);

/// conjugate(conjugate(A, W1), W2) against conjugate(A, W1 W2).
VerificationReport check_functoriality(std::uint64_t seed, double tolerance = 1e-6);

/// transform_metric(transform_metric(G, W), W^+) against G.
VerificationReport check_metric_round_trip(std::uint64_t seed, double tolerance = 1e-8);

/// locality_score of a banded operator before and after conjugation by a
/// nonvanishing multiplication kernel.
VerificationReport check_locality_invariance(double tolerance = 1e-10);

}  // namespace fcoord
