#pragma once

#include <string>
#include <vector>

#include "jacobian.hpp"
#include "strata.hpp"

namespace sendovlab {

// A point of the implicit solution branch: the first s zeros and the k
// critical points expressed as functions of the last k+1 (free) zeros.
// Zero order matches stratum.mu: dependent zeros first, then the free ones.
struct ImplicitState {
  std::vector<Complex> dependent;  // z_1 .. z_s
  std::vector<Complex> free;       // z_{s+1} .. z_m
  std::vector<Complex> crit;       // xi_1 .. xi_k, multiplicities stratum.nu
  Structure stratum;
  double residual = 0.0;  // max |p^{(l)}(xi_j)| over the system

  ZeroConfig config(const Tolerances& tol = {}) const;
  CriticalSet critical_set() const;
};

// Builds the state from a configuration: the first m-1-k zeros become the
// dependent block, the rest are free.
ImplicitState make_state(const ZeroConfig& config, const Tolerances& tol = {});

struct PathSpec {
  std::vector<std::vector<Complex>> waypoints;  // free-variable tuples
  double max_step = 0.05;  // in path parameter units per segment
};

// Newton iteration on the system p^{(l)}(xi_j) = 0 in the unknowns
// (dependent, crit) with the free zeros held fixed.  Converges to residual
// <= 1e-12 * max(1, max coeff of p) or throws: numeric_error when the
// residual stops decreasing (outside the Newton basin), boundary_error when
// sigma_min/sigma_max < tol.rank or a separation drops below tol.sep.
ImplicitState correct(const ImplicitState& state, const Tolerances& tol = {});

struct TrackResult {
  std::vector<ImplicitState> trajectory;  // accepted states, start first
  bool completed = false;
  std::string stop_reason;  // empty when completed
};

// Predictor-corrector continuation along the piecewise-linear path of the
// free variables.  Tangent predictor J delta = -B dfree, full Newton
// corrector; step halves on corrector failure down to min_step = 1e-9, at
// which point the result carries the last good state and a stop reason.
TrackResult track(const ImplicitState& start, const PathSpec& path,
                  const Tolerances& tol = {});

struct ScanResult {
  int resolution = 0;
  double radius = 0.0;
  std::vector<Complex> values;       // row-major resolution x resolution
  std::vector<bool> ok;              // grid point reachable by tracking
  std::vector<double> cr_residual;   // interior points with ok neighbours
  double max_cr_residual = 0.0;
  int failed_points = 0;
};

// Tracks one designated output over a square grid (side 2r) of one free
// variable around its current value and estimates the Cauchy-Riemann
// residual |dw/dx + i dw/dy| by central differences.  output_index < s picks
// a dependent zero, s <= output_index < s+k picks a critical point.
ScanResult scan_analyticity(const ImplicitState& state, int variable_index,
                            int output_index, double radius, int resolution,
                            const Tolerances& tol = {});

}  // namespace sendovlab
