#include "strata.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace sendovlab {

Structure::Structure(std::vector<int> mu_in, std::vector<int> nu_in)
    : mu(std::move(mu_in)), nu(std::move(nu_in)) {
  if (mu.empty() || nu.empty())
    throw contract_error("Structure: empty multiplicity pattern");
  for (int v : mu)
    if (v < 1) throw contract_error("Structure: mu entries must be positive");
  for (int v : nu)
    if (v < 1) throw contract_error("Structure: nu entries must be positive");
  n = std::accumulate(mu.begin(), mu.end(), 0);
  m = static_cast<int>(mu.size());
  k = static_cast<int>(nu.size());
  s = m - 1 - k;
  if (std::accumulate(nu.begin(), nu.end(), 0) != m - 1)
    throw contract_error("Structure: sum of nu must equal m - 1");
  if (s < 0) throw contract_error("Structure: k exceeds m - 1");
}

Structure classify_stratum(const ZeroConfig& config, const Tolerances& tol) {
  if (config.degree() < 2)
    throw contract_error("classify_stratum: degree must be >= 2");
  std::vector<int> mu;
  mu.reserve(config.zeros().size());
  for (const Zero& z : config.zeros()) mu.push_back(z.multiplicity);
  const CriticalSet cs = critical_points(config, tol);
  std::vector<int> nu;
  nu.reserve(cs.second_kind.size());
  for (const RootCluster& xi : cs.second_kind) nu.push_back(xi.multiplicity);
  return Structure(std::move(mu), std::move(nu));
}

NodeSet::NodeSet(std::vector<Complex> nodes, const Tolerances& tol)
    : nodes_(std::move(nodes)) {
  if (nodes_.empty()) throw contract_error("NodeSet: empty");
  for (const Complex& z : nodes_)
    if (!is_finite(z)) throw contract_error("NodeSet: non-finite node");
  for (size_t i = 0; i < nodes_.size(); ++i)
    for (size_t j = i + 1; j < nodes_.size(); ++j)
      if (std::abs(nodes_[i] - nodes_[j]) <= tol.sep)
        throw contract_error("NodeSet: nodes not distinct");
}

PolyCoeffs NodeSet::node_poly() const {
  PolyCoeffs w{Complex(1.0)};
  for (const Complex& z : nodes_) {
    w.push_back(w.back());
    for (size_t t = w.size() - 2; t >= 1; --t) w[t] = w[t - 1] - z * w[t];
    w[0] = -z * w[0];
  }
  return w;
}

Complex NodeSet::omega_i(int i, Complex z) const {
  Complex v(1.0);
  for (int j = 0; j < size(); ++j)
    if (j != i) v *= z - nodes_[j];
  return v;
}

Complex divided_difference(const PolyCoeffs& q,
                           const std::vector<Complex>& nodes) {
  if (nodes.empty()) throw contract_error("divided_difference: no nodes");
  // Group exact repetitions so confluent runs are contiguous; divided
  // differences are symmetric in their nodes.
  std::vector<Complex> x = nodes;
  std::stable_sort(x.begin(), x.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  const int n = static_cast<int>(x.size());
  int max_rep = 1, run = 1;
  for (int i = 1; i < n; ++i) {
    run = (x[i] == x[i - 1]) ? run + 1 : 1;
    max_rep = std::max(max_rep, run);
  }
  if (max_rep > degree_of(q) + 1)
    throw contract_error(
        "divided_difference: node repetition exceeds 1 + degree of q");

  // Taylor coefficients q^{(r)}(x)/r! at each distinct node, by prefix runs.
  std::vector<std::vector<Complex>> taylor(n);
  for (int i = 0; i < n; ++i) {
    if (i > 0 && x[i] == x[i - 1]) continue;
    auto d = eval_derivatives(q, x[i], max_rep - 1);
    double fact = 1.0;
    std::vector<Complex> t(max_rep);
    for (int r = 0; r < max_rep; ++r) {
      if (r > 0) fact *= r;
      t[r] = d[r] / fact;
    }
    taylor[i] = std::move(t);
  }
  for (int i = 1; i < n; ++i)
    if (x[i] == x[i - 1]) taylor[i] = taylor[i - 1];

  // Confluent Neville table.
  std::vector<Complex> f(n);
  for (int i = 0; i < n; ++i) f[i] = taylor[i][0];
  std::vector<int> start(n);  // index of the first node equal to x[i]
  for (int i = 0; i < n; ++i)
    start[i] = (i > 0 && x[i] == x[i - 1]) ? start[i - 1] : i;
  for (int level = 1; level < n; ++level) {
    for (int i = 0; i + level < n; ++i) {
      const int j = i + level;
      if (x[i] == x[j]) {
        f[i] = taylor[i][level];
      } else {
        f[i] = (f[i + 1] - f[i]) / (x[j] - x[i]);
      }
    }
  }
  return f[0];
}

double leading_dd_identity(const PolyCoeffs& q, const NodeSet& nodes,
                           int doubled_index) {
  const int s = nodes.size();
  if (degree_of(q) != s)
    throw contract_error("leading_dd_identity: degree of q must equal node count");
  if (std::abs(q.back() - Complex(1.0)) > 1e-12)
    throw contract_error("leading_dd_identity: q must be monic");
  if (doubled_index < 0 || doubled_index >= s)
    throw contract_error("leading_dd_identity: index out of range");
  std::vector<Complex> xs = nodes.nodes();
  xs.push_back(xs[doubled_index]);
  return std::abs(divided_difference(q, xs) - Complex(1.0));
}

double lagrange_residual(const PolyCoeffs& q, const NodeSet& nodes,
                         Complex z) {
  const int s = nodes.size();
  if (degree_of(q) != s)
    throw contract_error("lagrange_residual: degree of q must equal node count");
  if (std::abs(q.back() - Complex(1.0)) > 1e-12)
    throw contract_error("lagrange_residual: q must be monic");
  if (!is_finite(z)) throw contract_error("lagrange_residual: non-finite z");
  Complex sum(0.0);
  for (int i = 0; i < s; ++i) {
    const Complex qi = eval_derivatives(q, nodes.nodes()[i], 0)[0];
    sum += qi * nodes.omega_i(i, z) / nodes.omega_i(i, nodes.nodes()[i]);
  }
  const Complex omega_z = eval_derivatives(nodes.node_poly(), z, 0)[0];
  const Complex qz = eval_derivatives(q, z, 0)[0];
  return std::abs(qz - sum - omega_z);
}

}  // namespace sendovlab
