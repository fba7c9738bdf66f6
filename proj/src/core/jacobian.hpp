#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "poly.hpp"
#include "strata.hpp"

namespace sendovlab {

// Jacobian of the system p^{(l)}(xi_j) = 0 (l = 1..nu_j) with respect to the
// unknowns (z_1..z_s, xi_1..xi_k).  Rows are the equations in block order
// over j, columns the unknowns; m-1 of each.
struct ImplicitJacobian {
  std::vector<std::vector<Complex>> matrix;  // row-major, (m-1) x (m-1)
  int s = 0;
  int k = 0;
  std::vector<int> nu;                    // row block sizes
  std::vector<double> singular_values;    // descending, filled by the SVD
};

struct RankCertificate {
  int rank = 0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double threshold = 0.0;  // relative
};

// Derivatives of Omega_i(z) = -mu_i p(z) / (z - z_i) at z, orders 0..ord.
std::vector<Complex> omega_derivatives(const ZeroConfig& config, int i,
                                       Complex z, int ord);

// Stacked values p^{(l)}(xi_j), l = 1..nu_j, in block order over j.
std::vector<Complex> system_values(const ZeroConfig& config,
                                   const CriticalSet& crit);

// Entries: d p^{(l)}(xi_j) / d z_i = Omega_i^{(l)}(xi_j) with
// Omega_i(z) = -mu_i p(z) / (z - z_i) for the dependent-zero columns, and
// d p^{(l)}(xi_j) / d xi_j = p^{(l+1)}(xi_j) for the critical-point columns
// (zero across other blocks).  For s = 0 this is diag(p''(xi_1..xi_k)).
ImplicitJacobian assemble(const ZeroConfig& config, const CriticalSet& crit);

// Cross-check every entry against central finite differences of the map
// (z_1..z_s, xi_1..xi_k) -> (p^{(l)}(xi_j)); returns the worst relative
// mismatch.  Debug verification; step 1e-6.
double finite_difference_check(const ZeroConfig& config,
                               const CriticalSet& crit,
                               const ImplicitJacobian& jac);

RankCertificate rank_certificate(ImplicitJacobian& jac,
                                 double threshold = 1e-10);

// One sampled configuration in a prescribed stratum.  Strata with all nu_j=1
// are sampled directly; strata with multiple critical points are constructed
// by solving the residue system g(z_i) = mu_i * prod_{j != i}(z_i - z_j) for
// a target g = n * prod (z - xi_j)^{nu_j} with randomly drawn xi's.
std::optional<ZeroConfig> sample_stratum(const Structure& target,
                                         std::uint64_t seed,
                                         std::uint64_t index,
                                         int max_retries = 50);

struct SweepRecord {
  std::uint64_t sample_index = 0;
  ZeroConfig config;
  double sigma_ratio = 0.0;  // sigma_min / sigma_max
  int rank = 0;
  bool deficient = false;
};

struct SweepReport {
  Structure stratum;
  int samples_requested = 0;
  int samples_built = 0;
  int sampler_failures = 0;
  double min_sigma_ratio = 1.0;
  int deficient_count = 0;
};

// Assemble + certify over `samples` sampled configurations; every sample is
// reported through `sink` (if set), deficient ones flagged.
SweepReport rank_sweep(const Structure& stratum, int samples,
                       std::uint64_t seed,
                       const std::function<void(const SweepRecord&)>& sink = {});

}  // namespace sendovlab
