#pragma once

#include <complex>
#include <span>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace sendovlab {

using Complex = std::complex<double>;

// Tolerances shared across the library.  `sep` governs distinctness of zeros
// and the first/second-kind classification; `cluster` is the base scale for
// merging near-coincident roots; `rank` is the relative SVD rank threshold.
struct Tolerances {
  double sep = 1e-7;
  double cluster = 1e-8;
  double rank = 1e-10;
};

inline constexpr int kMaxDegree = 64;

bool is_finite(Complex z);

struct Zero {
  Complex location;
  int multiplicity = 1;
};

// A multiset of distinct zeros with multiplicities; the polynomial is the
// monic product of (z - z_i)^{mu_i}.  Ordering is significant and is never
// permuted by any operation.
class ZeroConfig {
 public:
  explicit ZeroConfig(std::vector<Zero> zeros, const Tolerances& tol = {});

  int degree() const { return n_; }                                // n
  int distinct_count() const { return static_cast<int>(zeros_.size()); }  // m
  const std::vector<Zero>& zeros() const { return zeros_; }
  const Zero& zero(int i) const { return zeros_.at(i); }

  // z -> scale * e^{i rotation} * z + shift applied to every zero.
  ZeroConfig transformed(double rotation, double scale, Complex shift,
                         const Tolerances& tol = {}) const;

  static ZeroConfig roots_of_unity(int n, const Tolerances& tol = {});

 private:
  std::vector<Zero> zeros_;
  int n_ = 0;
};

// Dense coefficients, ascending order, monic (back() == 1).
using PolyCoeffs = std::vector<Complex>;

inline int degree_of(const PolyCoeffs& p) {
  return static_cast<int>(p.size()) - 1;
}

// Sum_k |c_k| max(1,|z|)^k -- the natural residual scale of p at z.
double coeff_scale_at(const PolyCoeffs& p, Complex z);

PolyCoeffs expand(const ZeroConfig& config);
PolyCoeffs derivative(const PolyCoeffs& p);

// Horner evaluation of p, p', ..., p^{(max_order)} at z.
std::vector<Complex> eval_derivatives(const PolyCoeffs& p, Complex z,
                                      int max_order);

// Same values computed from the factored form via the Leibniz recurrence;
// avoids expansion error for high multiplicities.
std::vector<Complex> eval_derivatives(const ZeroConfig& config, Complex z,
                                      int max_order);

// Derivatives of leading * prod_i (z - point_i)^{exp_i} at z, orders
// 0..max_order.  The workhorse behind the factored evaluation and the
// Jacobian entries.
std::vector<Complex> product_derivatives(
    Complex leading, std::span<const std::pair<Complex, int>> factors,
    Complex z, int max_order);

struct RootCluster {
  Complex location;
  int multiplicity = 1;
};

// All roots of a monic polynomial via Ehrlich-Aberth simultaneous iteration,
// unclustered.  Throws numeric_error on non-convergence.
std::vector<Complex> aberth_roots(const PolyCoeffs& monic);

// Roots with multiplicity-aware clustering: near-coincident roots are merged,
// verified against the derivative magnitudes and polished by Newton on the
// appropriate derivative.
std::vector<RootCluster> roots(const PolyCoeffs& monic,
                               const Tolerances& tol = {});

struct CriticalSet {
  std::vector<RootCluster> first_kind;   // zeros with mu_i >= 2, mult mu_i - 1
  std::vector<RootCluster> second_kind;  // xi_j with nu_j, sorted by (re, im)
  int k() const { return static_cast<int>(second_kind.size()); }
};

// The monic degree m-1 polynomial whose roots are exactly the second-kind
// critical points with their multiplicities:
//   p'(z) = n * prod (z - z_i)^{mu_i - 1} * h(z),  returned value = h / n.
PolyCoeffs second_kind_poly(const ZeroConfig& config);

CriticalSet critical_points(const ZeroConfig& config,
                            const Tolerances& tol = {});

}  // namespace sendovlab
