#pragma once

#include <vector>

#include "poly.hpp"

namespace sendovlab {

// Multiplicity pattern of a configuration: mu over the zeros, nu over the
// second-kind critical points, with the derived counts n, m, k and
// s = m - 1 - k.
struct Structure {
  std::vector<int> mu;
  std::vector<int> nu;
  int n = 0;
  int m = 0;
  int k = 0;
  int s = 0;

  Structure() = default;
  Structure(std::vector<int> mu_in, std::vector<int> nu_in);

  bool operator==(const Structure&) const = default;
};

Structure classify_stratum(const ZeroConfig& config,
                           const Tolerances& tol = {});

// Ordered distinct interpolation nodes.
class NodeSet {
 public:
  explicit NodeSet(std::vector<Complex> nodes, const Tolerances& tol = {});
  const std::vector<Complex>& nodes() const { return nodes_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  PolyCoeffs node_poly() const;             // omega(z) = prod (z - z_i)
  Complex omega_i(int i, Complex z) const;  // omega(z) / (z - z_i)

 private:
  std::vector<Complex> nodes_;
};

// (Hermite-)divided difference of q over the node multiset; exact repetitions
// in `nodes` are resolved through derivative values of q.
Complex divided_difference(const PolyCoeffs& q,
                           const std::vector<Complex>& nodes);

// |q[z_1,...,z_i,z_i,...,z_s] - 1| for monic q of degree s over s nodes with
// node `doubled_index` repeated.
double leading_dd_identity(const PolyCoeffs& q, const NodeSet& nodes,
                           int doubled_index);

// Residual of q(z) = sum_i q(z_i) omega_i(z)/omega_i(z_i) + omega(z) for
// monic q of degree s over s nodes.
double lagrange_residual(const PolyCoeffs& q, const NodeSet& nodes, Complex z);

}  // namespace sendovlab
