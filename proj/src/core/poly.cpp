#include "poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sendovlab {
namespace {

constexpr double kPi = std::numbers::pi;

double falling(int m, int l) {
  double r = 1.0;
  for (int t = 0; t < l; ++t) r *= static_cast<double>(m - t);
  return r;
}

}  // namespace

bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

ZeroConfig::ZeroConfig(std::vector<Zero> zeros, const Tolerances& tol)
    : zeros_(std::move(zeros)) {
  if (zeros_.empty()) throw contract_error("ZeroConfig: no zeros given");
  n_ = 0;
  for (const Zero& z : zeros_) {
    if (!is_finite(z.location))
      throw contract_error("ZeroConfig: non-finite zero location");
    if (z.multiplicity < 1)
      throw contract_error("ZeroConfig: multiplicity must be positive");
    n_ += z.multiplicity;
  }
  if (n_ > kMaxDegree)
    throw capacity_error("ZeroConfig: degree " + std::to_string(n_) +
                         " exceeds maximum " + std::to_string(kMaxDegree));
  for (size_t i = 0; i < zeros_.size(); ++i)
    for (size_t j = i + 1; j < zeros_.size(); ++j)
      if (std::abs(zeros_[i].location - zeros_[j].location) <= tol.sep)
        throw contract_error("ZeroConfig: zeros " + std::to_string(i) +
                             " and " + std::to_string(j) +
                             " are not distinct under the separation "
                             "tolerance");
}

ZeroConfig ZeroConfig::transformed(double rotation, double scale,
                                   Complex shift,
                                   const Tolerances& tol) const {
  if (!(scale > 0.0)) throw contract_error("transform: scale must be > 0");
  if (!std::isfinite(rotation) || !std::isfinite(scale) || !is_finite(shift))
    throw contract_error("transform: non-finite parameter");
  const Complex factor = scale * std::polar(1.0, rotation);
  std::vector<Zero> out = zeros_;
  for (Zero& z : out) z.location = factor * z.location + shift;
  return ZeroConfig(std::move(out), tol);
}

ZeroConfig ZeroConfig::roots_of_unity(int n, const Tolerances& tol) {
  if (n < 2) throw contract_error("roots_of_unity: need n >= 2");
  std::vector<Zero> zs;
  zs.reserve(n);
  for (int i = 0; i < n; ++i)
    zs.push_back({std::polar(1.0, 2.0 * kPi * i / n), 1});
  return ZeroConfig(std::move(zs), tol);
}

double coeff_scale_at(const PolyCoeffs& p, Complex z) {
  const double b = std::max(1.0, std::abs(z));
  double s = 0.0, pw = 1.0;
  for (const Complex& c : p) {
    s += std::abs(c) * pw;
    pw *= b;
  }
  return s;
}

PolyCoeffs expand(const ZeroConfig& config) {
  PolyCoeffs p{1.0};
  p.reserve(config.degree() + 1);
  for (const Zero& z : config.zeros()) {
    for (int t = 0; t < z.multiplicity; ++t) {
      // multiply by (x - z.location)
      p.push_back(p.back());
      for (size_t j = p.size() - 2; j >= 1; --j)
        p[j] = p[j - 1] - z.location * p[j];
      p[0] = -z.location * p[0];
    }
  }
  return p;
}

PolyCoeffs derivative(const PolyCoeffs& p) {
  if (p.size() <= 1) return {Complex(0.0)};
  PolyCoeffs d(p.size() - 1);
  for (size_t k = 1; k < p.size(); ++k)
    d[k - 1] = static_cast<double>(k) * p[k];
  return d;
}

std::vector<Complex> eval_derivatives(const PolyCoeffs& p, Complex z,
                                      int max_order) {
  if (max_order < 0) throw contract_error("eval_derivatives: negative order");
  if (!is_finite(z)) throw contract_error("eval_derivatives: non-finite point");
  // Repeated synthetic division by (x - z) yields the Taylor coefficients
  // of p at z; derivative k is k! times coefficient k.
  const int n = degree_of(p);
  std::vector<Complex> d(p.rbegin(), p.rend());  // descending
  std::vector<Complex> out(max_order + 1, Complex(0.0));
  double fact = 1.0;
  for (int k = 0; k <= max_order; ++k) {
    if (k > n) break;
    for (int j = 1; j <= n - k; ++j) d[j] += z * d[j - 1];
    if (k > 0) fact *= k;
    out[k] = fact * d[n - k];
  }
  return out;
}

std::vector<Complex> product_derivatives(
    Complex leading, std::span<const std::pair<Complex, int>> factors,
    Complex z, int max_order) {
  // Binomial table.
  static thread_local std::vector<std::vector<double>> binom;
  if (static_cast<int>(binom.size()) <= max_order) {
    binom.resize(max_order + 1);
    for (int i = 0; i <= max_order; ++i) {
      binom[i].assign(i + 1, 1.0);
      for (int j = 1; j < i; ++j)
        binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
    }
  }
  std::vector<Complex> vals(max_order + 1, Complex(0.0));
  vals[0] = leading;
  std::vector<Complex> next(max_order + 1), f(max_order + 1);
  for (const auto& [point, exp] : factors) {
    const Complex w = z - point;
    for (int l = 0; l <= max_order; ++l)
      f[l] = (l <= exp) ? falling(exp, l) * std::pow(w, exp - l)
                        : Complex(0.0);
    for (int t = 0; t <= max_order; ++t) {
      Complex acc(0.0);
      for (int l = 0; l <= t; ++l) acc += binom[t][l] * f[l] * vals[t - l];
      next[t] = acc;
    }
    vals.swap(next);
  }
  return vals;
}

std::vector<Complex> eval_derivatives(const ZeroConfig& config, Complex z,
                                      int max_order) {
  if (max_order < 0 || max_order > config.degree())
    throw contract_error("eval_derivatives: order out of range");
  if (!is_finite(z)) throw contract_error("eval_derivatives: non-finite point");
  std::vector<std::pair<Complex, int>> factors;
  factors.reserve(config.zeros().size());
  for (const Zero& zz : config.zeros())
    factors.emplace_back(zz.location, zz.multiplicity);
  return product_derivatives(Complex(1.0), factors, z, max_order);
}

std::vector<Complex> aberth_roots(const PolyCoeffs& monic) {
  const int n = degree_of(monic);
  if (n < 1) throw contract_error("aberth_roots: degree must be >= 1");
  if (std::abs(monic.back() - Complex(1.0)) > 1e-12)
    throw contract_error("aberth_roots: polynomial must be monic");
  if (n > kMaxDegree) throw capacity_error("aberth_roots: degree too large");

  double maxc = 0.0;
  for (int k = 0; k < n; ++k) maxc = std::max(maxc, std::abs(monic[k]));
  const double radius = 0.7 * (1.0 + maxc);  // inside the Cauchy bound

  std::vector<Complex> z(n);
  for (int i = 0; i < n; ++i)
    z[i] = radius * std::polar(1.0, 2.0 * kPi * i / n + 0.48);

  const int max_iter = 1000;
  for (int iter = 0; iter < max_iter; ++iter) {
    bool converged = true;
    for (int i = 0; i < n; ++i) {
      auto v = eval_derivatives(monic, z[i], 1);
      Complex p = v[0], dp = v[1];
      // Backward-error stop: near a multiple root the Aberth step stalls at
      // the cluster radius while the residual is already at rounding level.
      if (std::abs(p) <= 1e-12 * coeff_scale_at(monic, z[i])) continue;
      if (dp == Complex(0.0)) {
        z[i] += 1e-8 * (1.0 + std::abs(z[i])) * Complex(1.0, 1.0);
        converged = false;
        continue;
      }
      const Complex newton = p / dp;
      Complex sum(0.0);
      for (int j = 0; j < n; ++j)
        if (j != i) sum += 1.0 / (z[i] - z[j]);
      const Complex denom = 1.0 - newton * sum;
      Complex step = (std::abs(denom) > 1e-300) ? newton / denom : newton;
      z[i] -= step;
      if (std::abs(step) > 5e-15 * (1.0 + std::abs(z[i]))) converged = false;
    }
    if (converged) return z;
  }
  // Report best effort with residual.
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    worst = std::max(worst, std::abs(eval_derivatives(monic, z[i], 0)[0]) /
                                coeff_scale_at(monic, z[i]));
  throw numeric_error("aberth_roots: no convergence after " +
                      std::to_string(max_iter) +
                      " iterations (best relative residual " +
                      std::to_string(worst) + ")");
}

namespace {

// Newton iteration on q^{(mu-1)}: a mu-fold root of q is a simple root of
// q^{(mu-1)}, so the polished location is accurate to near machine precision.
Complex polish_on_derivative(const PolyCoeffs& q, Complex z0, int mu,
                             bool* converged) {
  Complex z = z0;
  *converged = false;
  Complex best_z = z0;
  double best_g = std::numeric_limits<double>::infinity();
  double min_step = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 60; ++it) {
    auto v = eval_derivatives(q, z, mu + 1);
    const Complex g = v[mu - 1], dg = v[mu];
    if (std::abs(g) < best_g) {
      best_g = std::abs(g);
      best_z = z;
    }
    if (std::abs(dg) < 1e-300) break;
    const Complex step = g / dg;
    z -= step;
    min_step = std::min(min_step, std::abs(step) / (1.0 + std::abs(z)));
    if (std::abs(step) <= 1e-13 * (1.0 + std::abs(z))) {
      *converged = true;
      return z;
    }
  }
  // Steps jitter at a conditioning-dependent rounding floor; accept the best
  // iterate once the floor is clearly below the cluster scale.
  if (min_step <= 1e-9) *converged = true;
  return best_z;
}

// Does q have a mu-fold root at c, to working precision?  Compares each
// lower Taylor coefficient against its natural magnitude scale.
bool multiplicity_plausible(const PolyCoeffs& q, Complex c, int mu) {
  const auto v = eval_derivatives(q, c, mu - 1);
  const int n = degree_of(q);
  const double b = std::max(1.0, std::abs(c));
  double fact = 1.0;
  for (int l = 0; l < mu; ++l) {
    if (l > 0) fact *= l;
    // scale of the l-th Taylor coefficient: sum_k C(k,l)|a_k| b^{k-l}
    double scale = 0.0, pw = 1.0, ch = 1.0;
    for (int k = l; k <= n; ++k) {
      scale += ch * std::abs(q[k]) * pw;
      pw *= b;
      ch = ch * (k + 1) / (k + 1 - l);
    }
    if (std::abs(v[l]) / fact > 1e-8 * std::max(scale, 1e-300)) return false;
  }
  return true;
}

std::vector<std::vector<Complex>> single_linkage(
    const std::vector<Complex>& pts, double threshold) {
  const int n = static_cast<int>(pts.size());
  std::vector<int> parent(n);
  for (int i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(pts[i] - pts[j]) <= threshold) parent[find(i)] = find(j);
  std::vector<std::vector<Complex>> groups;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < n; ++i) {
    int r = find(i);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(groups.size());
      groups.emplace_back();
    }
    groups[slot[r]].push_back(pts[i]);
  }
  return groups;
}

void process_group(const PolyCoeffs& q, const std::vector<Complex>& group,
                   double threshold, double tau_cluster,
                   std::vector<RootCluster>& out) {
  const int mu = static_cast<int>(group.size());
  if (mu == 1) {
    bool conv = false;
    Complex c = polish_on_derivative(q, group[0], 1, &conv);
    out.push_back({conv ? c : group[0], 1});
    return;
  }
  Complex centroid(0.0);
  for (const Complex& g : group) centroid += g;
  centroid /= static_cast<double>(mu);

  bool conv = false;
  const Complex c = polish_on_derivative(q, centroid, mu, &conv);
  if (conv && std::abs(c - centroid) <= 4.0 * threshold &&
      multiplicity_plausible(q, c, mu)) {
    out.push_back({c, mu});
    return;
  }
  // Not a single mu-fold root: split at successively finer scales.
  double t = threshold / 4.0;
  while (t >= tau_cluster) {
    auto sub = single_linkage(group, t);
    if (sub.size() > 1) {
      for (const auto& g : sub) process_group(q, g, t, tau_cluster, out);
      return;
    }
    t /= 4.0;
  }
  // Everything within tau_cluster of everything else: merge as prescribed.
  out.push_back({centroid, mu});
}

}  // namespace

std::vector<RootCluster> roots(const PolyCoeffs& monic,
                               const Tolerances& tol) {
  const std::vector<Complex> raw = aberth_roots(monic);
  const int n = static_cast<int>(raw.size());
  double scale = 1.0;
  for (const Complex& r : raw) scale = std::max(scale, std::abs(r));
  const double tau_cluster = tol.cluster * scale;
  // A mu-fold root computed at backward error 1e-12 scatters over a radius
  // of roughly (1e-12)^{1/mu}; the detection threshold must cover the worst
  // case mu = n.  Overlinked groups are split again during verification.
  const double detect =
      std::max(tau_cluster, 6.0 * scale * std::pow(1e-12, 1.0 / n));
  std::vector<RootCluster> out;
  for (const auto& g : single_linkage(raw, detect))
    process_group(monic, g, detect, tau_cluster, out);
  std::sort(out.begin(), out.end(), [](const RootCluster& a,
                                       const RootCluster& b) {
    if (a.location.real() != b.location.real())
      return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  return out;
}

PolyCoeffs second_kind_poly(const ZeroConfig& config) {
  // p'(z) = prod (z-z_i)^{mu_i - 1} * h(z),  h = sum_i mu_i prod_{j!=i}(z-z_j)
  // has degree m-1, leading coefficient n, and its roots are exactly the
  // second-kind critical points with their multiplicities.
  const auto& zs = config.zeros();
  const int m = config.distinct_count();
  PolyCoeffs h(m, Complex(0.0));
  for (int i = 0; i < m; ++i) {
    PolyCoeffs w{Complex(1.0)};
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      w.push_back(w.back());
      for (size_t t = w.size() - 2; t >= 1; --t)
        w[t] = w[t - 1] - zs[j].location * w[t];
      w[0] = -zs[j].location * w[0];
    }
    for (int t = 0; t < m; ++t)
      h[t] += static_cast<double>(zs[i].multiplicity) * w[t];
  }
  const double n = config.degree();
  for (Complex& c : h) c /= n;
  h.back() = 1.0;  // exact monic; leading coefficient is sum mu_i = n
  return h;
}

CriticalSet critical_points(const ZeroConfig& config, const Tolerances& tol) {
  if (config.degree() < 2)
    throw contract_error("critical_points: degree must be >= 2");
  CriticalSet cs;
  for (const Zero& z : config.zeros())
    if (z.multiplicity >= 2)
      cs.first_kind.push_back({z.location, z.multiplicity - 1});
  if (config.distinct_count() >= 2) {
    cs.second_kind = roots(second_kind_poly(config), tol);
    for (const RootCluster& xi : cs.second_kind)
      for (size_t i = 0; i < config.zeros().size(); ++i)
        if (std::abs(xi.location - config.zero(i).location) <= tol.sep)
          throw degeneracy_error(
              "critical_points: second-kind critical point at (" +
              std::to_string(xi.location.real()) + "," +
              std::to_string(xi.location.imag()) +
              ") coincides with zero " + std::to_string(i) +
              " under the separation tolerance");
  }
  int total = 0;
  for (const RootCluster& r : cs.first_kind) total += r.multiplicity;
  for (const RootCluster& r : cs.second_kind) total += r.multiplicity;
  if (total != config.degree() - 1)
    throw numeric_error("critical_points: multiplicity count " +
                        std::to_string(total) + " != n-1");
  return cs;
}

}  // namespace sendovlab
