#include "extremal.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parallel.hpp"
#include "rng.hpp"

namespace sendovlab {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

double angle_of(Complex z) {
  double a = std::arg(z);
  if (a < 0.0) a += kTwoPi;
  return a;
}

std::vector<Complex> all_critical_locations(const CriticalSet& cs) {
  std::vector<Complex> out;
  for (const RootCluster& r : cs.first_kind) out.push_back(r.location);
  for (const RootCluster& r : cs.second_kind) out.push_back(r.location);
  return out;
}

}  // namespace

SendovValue sendov_S(const ZeroConfig& config) {
  if (config.degree() < 2) throw contract_error("sendov_S: degree must be >= 2");
  const CriticalSet cs = critical_points(config);
  const std::vector<Complex> zeta = all_critical_locations(cs);
  SendovValue out;
  out.value = -1.0;
  for (int i = 0; i < config.distinct_count(); ++i) {
    const Zero& z = config.zero(i);
    double mn = std::numeric_limits<double>::infinity();
    int arg = -1;
    if (z.multiplicity >= 2) {
      mn = 0.0;
      for (size_t j = 0; j < cs.first_kind.size(); ++j)
        if (std::abs(cs.first_kind[j].location - z.location) == 0.0)
          arg = static_cast<int>(j);
    } else {
      for (size_t j = 0; j < zeta.size(); ++j) {
        const double d = std::abs(z.location - zeta[j]);
        if (d < mn) {
          mn = d;
          arg = static_cast<int>(j);
        }
      }
    }
    if (mn > out.value) {
      out.value = mn;
      out.attaining_zero_index = i;
      out.attaining_crit_index = arg;
    }
  }
  return out;
}

SendovValue sendov_S_ell(const ZeroConfig& config, int ell) {
  if (ell < 0 || ell >= config.distinct_count())
    throw contract_error("sendov_S_ell: index out of range");
  if (config.zero(ell).multiplicity != 1)
    throw contract_error("sendov_S_ell: mu_ell must be 1");
  const CriticalSet cs = critical_points(config);
  if (cs.second_kind.empty())
    throw contract_error("sendov_S_ell: no second-kind critical points");
  SendovValue out;
  out.attaining_zero_index = ell;
  out.value = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < cs.second_kind.size(); ++j) {
    const double d =
        std::abs(config.zero(ell).location - cs.second_kind[j].location);
    if (d < out.value) {
      out.value = d;
      out.attaining_crit_index = static_cast<int>(j);
    }
  }
  return out;
}

Complex centroid_xi(const ZeroConfig& config) {
  const int m = config.distinct_count();
  if (m < 2) throw contract_error("centroid_xi: need at least two zeros");
  const CriticalSet cs = critical_points(config);
  if (cs.k() != 1)
    throw contract_error("centroid_xi: configuration is not in a k = 1 stratum");
  const double n = config.degree();
  Complex xi(0.0);
  for (const Zero& z : config.zeros()) {
    const double mu_t = (n - z.multiplicity) / (m - 1);
    xi += (mu_t / n) * z.location;
  }
  if (std::abs(xi - cs.second_kind[0].location) > 1e-10)
    throw numeric_error("centroid_xi: centroid disagrees with root finding");
  return xi;
}

namespace {

struct Disk {
  Complex c;
  double r = -1.0;  // negative: covers nothing
};

bool disk_contains(const Disk& d, Complex p) {
  return std::abs(p - d.c) <= d.r + 1e-12 * std::max(1.0, d.r);
}

Disk disk2(Complex a, Complex b) {
  return {0.5 * (a + b), 0.5 * std::abs(a - b)};
}

Disk disk3(Complex a, Complex b, Complex c) {
  const double d = 2.0 * (a.real() * (b.imag() - c.imag()) +
                          b.real() * (c.imag() - a.imag()) +
                          c.real() * (a.imag() - b.imag()));
  const double span = std::max({std::abs(a - b), std::abs(b - c),
                                std::abs(c - a), 1.0});
  if (std::abs(d) < 1e-14 * span * span) {
    // collinear: widest two-point disk
    Disk best = disk2(a, b);
    for (const Disk& cand : {disk2(b, c), disk2(a, c)})
      if (cand.r > best.r) best = cand;
    return best;
  }
  const double na = std::norm(a), nb = std::norm(b), nc = std::norm(c);
  const double ux = (na * (b.imag() - c.imag()) + nb * (c.imag() - a.imag()) +
                     nc * (a.imag() - b.imag())) /
                    d;
  const double uy = (na * (c.real() - b.real()) + nb * (a.real() - c.real()) +
                     nc * (b.real() - a.real())) /
                    d;
  const Complex center(ux, uy);
  return {center, std::abs(a - center)};
}

Disk trivial_disk(const std::vector<Complex>& pts,
                  const std::vector<int>& boundary) {
  switch (boundary.size()) {
    case 0:
      return {};
    case 1:
      return {pts[boundary[0]], 0.0};
    case 2:
      return disk2(pts[boundary[0]], pts[boundary[1]]);
    default:
      return disk3(pts[boundary[0]], pts[boundary[1]], pts[boundary[2]]);
  }
}

Disk welzl(const std::vector<Complex>& pts, std::vector<int>& order, int count,
           std::vector<int>& boundary) {
  if (count == 0 || boundary.size() == 3)
    return trivial_disk(pts, boundary);
  const int i = order[count - 1];
  Disk d = welzl(pts, order, count - 1, boundary);
  if (d.r >= 0.0 && disk_contains(d, pts[i])) return d;
  boundary.push_back(i);
  d = welzl(pts, order, count - 1, boundary);
  boundary.pop_back();
  return d;
}

}  // namespace

EnclosingDisk enclosing_disk(const std::vector<Complex>& points) {
  if (points.empty()) throw contract_error("enclosing_disk: no points");
  for (const Complex& p : points)
    if (!is_finite(p)) throw contract_error("enclosing_disk: non-finite point");
  std::vector<int> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 shuffle_rng(0x5d1c7c93u);
  std::shuffle(order.begin(), order.end(), shuffle_rng);
  std::vector<int> boundary;
  const Disk d =
      welzl(points, order, static_cast<int>(points.size()), boundary);
  EnclosingDisk out;
  out.center = d.c;
  out.radius = std::max(d.r, 0.0);
  for (size_t i = 0; i < points.size() && out.support.size() < 3; ++i)
    if (std::abs(std::abs(points[i] - d.c) - d.r) <=
        1e-9 * std::max(1.0, d.r))
      out.support.push_back(static_cast<int>(i));
  return out;
}

KKTState make_kkt_state(const ZeroConfig& config, int i0, double lambda,
                        double theta_lambda, std::vector<double> eta) {
  const int m = config.distinct_count();
  if (i0 < 0 || i0 >= m) throw contract_error("make_kkt_state: i0 out of range");
  if (config.zero(i0).multiplicity != 1)
    throw contract_error("make_kkt_state: mu_{i0} must be 1");
  if (static_cast<int>(eta.size()) != m)
    throw contract_error("make_kkt_state: eta must have one entry per zero");
  if (lambda < 0.0) throw contract_error("make_kkt_state: lambda must be >= 0");
  for (int i = 0; i < m; ++i) {
    if (eta[i] < 0.0)
      throw contract_error("make_kkt_state: eta entries must be >= 0");
    const double slack = eta[i] * (std::norm(config.zero(i).location) - 1.0);
    if (std::abs(slack) > 1e-10)
      throw contract_error("make_kkt_state: complementary slackness violated");
  }
  const Complex xi = centroid_xi(config);
  KKTState st;
  st.lambda = lambda;
  st.theta_lambda = theta_lambda;
  st.eta = std::move(eta);
  st.i0 = i0;
  for (int i = 0; i < m; ++i) {
    const Complex w = xi - config.zero(i).location;
    const double ci = std::abs(w);
    if (ci <= 1e-12)
      throw contract_error("make_kkt_state: a zero coincides with xi");
    st.c_i.push_back(ci);
    st.theta_i.push_back(angle_of(w));
    st.c *= ci;
    st.theta += st.theta_i.back();
  }
  return st;
}

KKTResiduals kkt_residual(const ZeroConfig& config, const KKTState& state) {
  const int m = config.distinct_count();
  if (m < 3)
    throw contract_error(
        "kkt_residual: the stationarity algebra needs m >= 3");
  if (static_cast<int>(state.c_i.size()) != m ||
      static_cast<int>(state.eta.size()) != m)
    throw contract_error("kkt_residual: state arity mismatch");
  const Complex xi = centroid_xi(config);
  // polar consistency
  for (int i = 0; i < m; ++i) {
    const Complex rebuilt =
        state.c_i[i] * std::polar(1.0, state.theta_i[i]);
    if (std::abs(rebuilt - (xi - config.zero(i).location)) > 1e-12 * (1.0 + state.c_i[i]))
      throw contract_error("kkt_residual: polar data inconsistent with config");
  }
  const double n = config.degree();
  const int i0 = state.i0;
  const double l1 = state.lambda * std::cos(state.theta_lambda);
  const double l2 = state.lambda * std::sin(state.theta_lambda);
  const double ci0 = state.c_i[i0];
  const double ti0 = state.theta_i[i0];

  Complex prod(1.0);
  for (int j = 0; j < m; ++j) prod *= xi - config.zero(j).location;

  KKTResiduals out;
  out.grad_a.resize(m);
  out.grad_b.resize(m);
  out.consolidated.resize(m);
  for (int i = 0; i < m; ++i) {
    const double mu = config.zero(i).multiplicity;
    const double mu_t = (n - mu) / (m - 1);
    const double lead = (i == i0) ? (2.0 * mu_t - 2.0 * n) : 2.0 * mu_t;
    const double ci = state.c_i[i];
    const double phase = state.theta - 2.0 * state.theta_i[i];
    const double coef = state.c * mu / (n * ci * ci);
    const Complex zi = config.zero(i).location;
    out.grad_a[i] = (lead / n) * ci0 * std::cos(ti0) +
                    coef * (l1 * std::cos(phase) + l2 * std::sin(phase)) -
                    2.0 * state.eta[i] * zi.real();
    out.grad_b[i] = (lead / n) * ci0 * std::sin(ti0) +
                    coef * (-l1 * std::sin(phase) + l2 * std::cos(phase)) -
                    2.0 * state.eta[i] * zi.imag();
    const Complex zi0 = config.zero(i0).location;
    const Complex w = xi - zi;
    out.consolidated[i] =
        state.lambda * std::polar(1.0, -state.theta_lambda) * prod / (w * w) +
        (lead / mu) * std::conj(xi - zi0) -
        2.0 * n * (state.eta[i] / mu) * std::conj(zi);
    const double mism_a =
        std::abs(out.consolidated[i].real() * mu / n - out.grad_a[i]);
    const double mism_b =
        std::abs(-out.consolidated[i].imag() * mu / n - out.grad_b[i]);
    out.max_mismatch = std::max({out.max_mismatch, mism_a, mism_b});
  }
  return out;
}

KKTFit fit_multipliers(const ZeroConfig& config, int i0) {
  const int m = config.distinct_count();
  KKTState base = make_kkt_state(config, i0, 0.0, 0.0,
                                 std::vector<double>(m, 0.0));
  std::vector<int> bnd;  // zeros on the unit circle get a free eta
  for (int i = 0; i < m; ++i)
    if (std::abs(config.zero(i).location) >= 1.0 - 1e-8) bnd.push_back(i);

  const int unknowns = 2 + static_cast<int>(bnd.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, unknowns);
  Eigen::VectorXd rhs(2 * m);
  const double n = config.degree();
  const double ci0 = base.c_i[i0];
  const double ti0 = base.theta_i[i0];
  for (int i = 0; i < m; ++i) {
    const double mu = config.zero(i).multiplicity;
    const double mu_t = (n - mu) / (m - 1);
    const double lead = (i == i0) ? (2.0 * mu_t - 2.0 * n) : 2.0 * mu_t;
    const double coef = base.c * mu / (n * base.c_i[i] * base.c_i[i]);
    const double phase = base.theta - 2.0 * base.theta_i[i];
    rhs(2 * i) = -(lead / n) * ci0 * std::cos(ti0);
    rhs(2 * i + 1) = -(lead / n) * ci0 * std::sin(ti0);
    A(2 * i, 0) = coef * std::cos(phase);
    A(2 * i, 1) = coef * std::sin(phase);
    A(2 * i + 1, 0) = -coef * std::sin(phase);
    A(2 * i + 1, 1) = coef * std::cos(phase);
    for (size_t bcol = 0; bcol < bnd.size(); ++bcol) {
      if (bnd[bcol] != i) continue;
      const Complex zi = config.zero(i).location;
      A(2 * i, 2 + bcol) = -2.0 * zi.real();
      A(2 * i + 1, 2 + bcol) = -2.0 * zi.imag();
    }
  }
  const Eigen::VectorXd x = A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
                                .solve(rhs);
  const double l1 = x(0), l2 = x(1);
  KKTFit fit;
  fit.feasible = true;
  std::vector<double> eta(m, 0.0);
  for (size_t bcol = 0; bcol < bnd.size(); ++bcol) {
    if (x(2 + bcol) < -1e-9) fit.feasible = false;
    eta[bnd[bcol]] = std::max(0.0, x(2 + bcol));
  }
  const double lambda = std::hypot(l1, l2);
  const double theta_lambda = lambda > 0.0 ? angle_of(Complex(l1, l2)) : 0.0;
  fit.state = make_kkt_state(config, i0, lambda, theta_lambda, std::move(eta));
  const KKTResiduals res = kkt_residual(config, fit.state);
  double ss = 0.0;
  for (int i = 0; i < m; ++i)
    ss += res.grad_a[i] * res.grad_a[i] + res.grad_b[i] * res.grad_b[i];
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

HalfPlaneCert halfplane_cert(const ZeroConfig& config, int i, int i0) {
  const int m = config.distinct_count();
  if (i < 0 || i >= m || i0 < 0 || i0 >= m || i == i0)
    throw contract_error("halfplane_cert: bad indices");
  if (std::abs(std::abs(config.zero(i).location) - 1.0) > 1e-10)
    throw contract_error("halfplane_cert: z_i must lie on the unit circle");
  // weighted centroid: equals the single critical point in a k = 1 stratum
  // and the nu-weighted mean of the second-kind points otherwise
  const double n = config.degree();
  Complex xi(0.0);
  for (const Zero& z : config.zeros())
    xi += ((n - z.multiplicity) / (config.distinct_count() - 1) / n) *
          z.location;
  const Complex w0 = xi - config.zero(i0).location;
  if (std::abs(w0) <= 1e-12)
    throw contract_error("halfplane_cert: xi coincides with z_{i0}");
  // rotate so that xi - z_{i0} is real and negative
  const Complex rot = std::polar(1.0, M_PI - std::arg(w0));
  const Complex zi = rot * config.zero(i).location;
  const Complex w = rot * (xi - config.zero(i).location);

  HalfPlaneCert cert;
  cert.gamma_i = angle_of(zi);
  cert.theta_i = angle_of(w);
  cert.psi1 = w * w;
  cert.psi2 = cert.psi1 * std::conj(zi);
  cert.conv1 = cert.psi1.imag() * cert.psi2.imag() < 0.0;
  cert.degenerate =
      std::abs(cert.psi2.imag()) <= 1e-14 * std::abs(cert.psi2);
  if (!cert.degenerate)
    cert.conv2 = cert.psi1.real() <
                 (cert.psi1.imag() / cert.psi2.imag()) * cert.psi2.real();
  const double s1 = std::sin(2.0 * cert.theta_i);
  const double s2 = std::sin(2.0 * cert.theta_i - cert.gamma_i);
  cert.conv1_trig = s1 * s2 < 0.0;
  if (!cert.degenerate)
    cert.conv2_trig = std::cos(2.0 * cert.theta_i) <
                      (s1 / s2) * std::cos(2.0 * cert.theta_i - cert.gamma_i);
  cert.forms_agree = cert.conv1 == cert.conv1_trig &&
                     (cert.degenerate || cert.conv2 == cert.conv2_trig);
  return cert;
}

namespace {

void note_finding(std::vector<Finding>& findings, const ZeroConfig& cfg,
                  double S, double eps_report) {
  if (S > 1.0 - eps_report) findings.push_back({cfg.zeros(), S});
}

}  // namespace

LocalSearchResult local_search(const ZeroConfig& config, int ell, int steps,
                               std::uint64_t seed, double eps_report) {
  if (steps < 0) throw contract_error("local_search: negative step count");
  if (config.distinct_count() < 2)
    throw contract_error("local_search: need at least two distinct zeros");
  if (config.zero(ell).multiplicity != 1)
    throw contract_error("local_search: mu_ell must be 1");
  for (const Zero& z : config.zeros())
    if (std::abs(z.location) > 1.0 + 1e-12)
      throw contract_error("local_search: zeros must lie in the closed disk");

  LocalSearchResult out{config, {}, 0, 0, -1.0, false, {}};
  double curS = sendov_S_ell(out.best, ell).value;
  out.trace.push_back(curS);
  note_finding(out.findings, out.best, sendov_S(out.best).value, eps_report);

  auto rng = rng_for(seed);
  double sigma = 1e-2;
  int drought = 0;
  for (int step = 0; step < steps; ++step) {
    std::vector<Zero> zs = out.best.zeros();
    for (Zero& z : zs) {
      z.location += uniform_disk(rng, sigma);
      const double r = std::abs(z.location);
      if (r > 1.0) z.location /= r;
    }
    try {
      ZeroConfig cand(std::move(zs));
      const double Sl = sendov_S_ell(cand, ell).value;
      note_finding(out.findings, cand, sendov_S(cand).value, eps_report);
      if (Sl > curS + 1e-12) {
        out.best = std::move(cand);
        curS = Sl;
        out.trace.push_back(curS);
        ++out.accepted;
        drought = 0;
      } else if (++drought > 500) {
        sigma = std::max(1e-6, sigma * 0.7);
        drought = 0;
      }
    } catch (const std::exception&) {
      ++out.collapses;
      sigma = std::max(1e-6, sigma * 0.5);
    }
  }

  if (out.best.distinct_count() >= 3) {
    try {
      const KKTFit fit = fit_multipliers(out.best, ell);
      out.kkt_residual_norm = fit.residual_norm;
      out.kkt_feasible = fit.feasible;
    } catch (const std::exception&) {
      // not a k = 1 stratum or degenerate; diagnostics stay unavailable
    }
  }
  return out;
}

namespace {

std::vector<Zero> draw_tuple(std::uint64_t seed, std::uint64_t index, int n) {
  auto rng = rng_for(seed, index);
  std::vector<Zero> zs(n);
  for (int i = 0; i < n; ++i) zs[i] = {uniform_disk(rng, 1.0), 1};
  return zs;
}

}  // namespace

MonteCarloResult monte_carlo(int n, int samples, std::uint64_t seed,
                             double eps_report) {
  if (n < 2) throw contract_error("monte_carlo: n must be >= 2");
  if (n > kMaxDegree) throw capacity_error("monte_carlo: n exceeds capacity");
  if (samples < 0) throw contract_error("monte_carlo: negative sample count");

  std::vector<double> S(samples, -1.0);
  parallel_for(samples, [&](int idx) {
    try {
      const ZeroConfig cfg(draw_tuple(seed, idx, n));
      S[idx] = sendov_S(cfg).value;
    } catch (const std::exception&) {
      // separation violation or root-finder failure: skip the draw
    }
  });

  MonteCarloResult out;
  out.samples = samples;
  out.max_S = -1.0;
  for (int idx = 0; idx < samples; ++idx) {
    if (S[idx] < 0.0) {
      ++out.skipped;
      continue;
    }
    if (S[idx] > out.max_S) {
      out.max_S = S[idx];
      out.argmax_index = idx;
    }
    if (S[idx] > 1.0 - eps_report)
      out.findings.push_back({draw_tuple(seed, idx, n), S[idx]});
  }
  if (out.max_S >= 0.0)
    out.argmax = ZeroConfig(draw_tuple(seed, out.argmax_index, n));
  return out;
}

}  // namespace sendovlab
