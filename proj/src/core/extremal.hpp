#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "poly.hpp"
#include "strata.hpp"

namespace sendovlab {

struct SendovValue {
  double value = 0.0;
  int attaining_zero_index = -1;  // index into config.zeros()
  int attaining_crit_index = -1;  // first kind listed before second kind
};

// S(z) = max_i min_j |z_i - zeta_j| over ALL critical points (both kinds).
// A zero with multiplicity >= 2 is its own critical point, so its min is 0.
SendovValue sendov_S(const ZeroConfig& config);

// S_ell = min over the second-kind critical points only; requires mu_ell = 1.
SendovValue sendov_S_ell(const ZeroConfig& config, int ell);

// xi of a k = 1 stratum: the weighted centroid sum_i mu~_i z_i / n with
// mu~_i = (n - mu_i) / (m - 1).  Verified against the root-found critical
// point; throws contract_error when k != 1.
Complex centroid_xi(const ZeroConfig& config);

struct EnclosingDisk {
  Complex center;
  double radius = 0.0;
  std::vector<int> support;  // <= 3 input indices on the boundary
};

// Smallest enclosing disk, randomized incremental construction.
EnclosingDisk enclosing_disk(const std::vector<Complex>& points);

struct KKTState {
  double lambda = 0.0;        // lambda_1 = lambda cos(theta_lambda), ...
  double theta_lambda = 0.0;
  std::vector<double> eta;    // one per zero, >= 0
  int i0 = 0;                 // distinguished index, mu_{i0} = 1
  // polar data of xi - z_i, derived from the configuration
  std::vector<double> c_i;
  std::vector<double> theta_i;
  double c = 1.0;      // prod c_i
  double theta = 0.0;  // sum theta_i
};

// Fills the polar block from the configuration and checks complementary
// slackness eta_i (|z_i|^2 - 1) = 0 within 1e-10.
KKTState make_kkt_state(const ZeroConfig& config, int i0, double lambda,
                        double theta_lambda, std::vector<double> eta);

struct KKTResiduals {
  std::vector<double> grad_a;        // dF/da_i as written in the KKT system
  std::vector<double> grad_b;        // dF/db_i
  std::vector<Complex> consolidated; // complex per-zero form
  double max_mismatch = 0.0;  // worst gap between the two forms
};

// Evaluates the 2m stationarity left-hand sides at z = xi of the k = 1
// stratum, plus the consolidated complex residuals; the real/imaginary parts
// of the latter must reproduce the former (max_mismatch witnesses it).
// Requires m >= 3 and mu_{i0} = 1.
KKTResiduals kkt_residual(const ZeroConfig& config, const KKTState& state);

struct KKTFit {
  KKTState state;
  double residual_norm = 0.0;  // of the fitted stationarity system
  bool feasible = false;       // all fitted eta_i >= -1e-9
};

// Least-squares recovery of (lambda_1, lambda_2, eta): eta_i is a free
// unknown only for zeros on the unit circle (|z_i| >= 1 - 1e-8), zero
// otherwise per complementary slackness.
KKTFit fit_multipliers(const ZeroConfig& config, int i0);

struct HalfPlaneCert {
  Complex psi1;       // (xi - z_i)^2 after normalization
  Complex psi2;       // psi1 * conj(z_i)
  double gamma_i = 0.0;  // z_i = e^{i gamma_i}
  double theta_i = 0.0;  // xi - z_i = c_i e^{i theta_i}
  bool conv1 = false;       // Im psi1 Im psi2 < 0
  bool conv2 = false;       // Re psi1 < (Im psi1 / Im psi2) Re psi2
  bool conv1_trig = false;  // sin(2 theta_i) sin(2 theta_i - gamma_i) < 0
  bool conv2_trig = false;
  bool degenerate = false;  // Im psi2 = 0, conv2 undefined
  bool forms_agree = false;
};

// Certificate for a boundary zero z_i against the interior zero z_{i0} in a
// k = 1 stratum.  The configuration is rotated about 0 first so that
// Im(xi - z_{i0}) = 0 and xi - z_{i0} < 0.
HalfPlaneCert halfplane_cert(const ZeroConfig& config, int i, int i0);

struct Finding {
  std::vector<Zero> zeros;
  double S = 0.0;
};

struct LocalSearchResult {
  ZeroConfig best;
  std::vector<double> trace;  // accepted S_ell values, nondecreasing
  int accepted = 0;
  int collapses = 0;  // proposals rejected for stratum collapse
  double kkt_residual_norm = -1.0;  // -1 when the fit is unavailable
  bool kkt_feasible = false;
  std::vector<Finding> findings;
};

// Projected stochastic ascent on S_ell: random zero perturbations, radial
// projection onto the closed unit disk, accept on improvement.  Step size
// shrinks after collapses and long droughts.
LocalSearchResult local_search(const ZeroConfig& config, int ell, int steps,
                               std::uint64_t seed,
                               double eps_report = 1e-3);

struct MonteCarloResult {
  double max_S = 0.0;
  std::uint64_t argmax_index = 0;
  std::optional<ZeroConfig> argmax;
  int samples = 0;
  int skipped = 0;  // draws violating the separation tolerance
  std::vector<Finding> findings;
};

// i.i.d. area-uniform zero tuples in the closed unit disk; deterministic for
// a fixed seed, independent of thread count.
MonteCarloResult monte_carlo(int n, int samples, std::uint64_t seed,
                             double eps_report = 1e-3);

}  // namespace sendovlab
