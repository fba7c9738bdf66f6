#include "jacobian.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "parallel.hpp"
#include "rng.hpp"

namespace sendovlab {
namespace {

Eigen::MatrixXcd to_eigen(const ImplicitJacobian& jac) {
  const int d = static_cast<int>(jac.matrix.size());
  Eigen::MatrixXcd M(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) M(r, c) = jac.matrix[r][c];
  return M;
}

}  // namespace

std::vector<Complex> omega_derivatives(const ZeroConfig& config, int i,
                                       Complex z, int ord) {
  std::vector<std::pair<Complex, int>> factors;
  factors.reserve(config.zeros().size());
  for (int t = 0; t < config.distinct_count(); ++t) {
    const Zero& zz = config.zero(t);
    const int exp = zz.multiplicity - (t == i ? 1 : 0);
    if (exp > 0) factors.emplace_back(zz.location, exp);
  }
  return product_derivatives(
      Complex(-static_cast<double>(config.zero(i).multiplicity)), factors, z,
      ord);
}

std::vector<Complex> system_values(const ZeroConfig& config,
                                   const CriticalSet& crit) {
  std::vector<Complex> F;
  for (const RootCluster& xi : crit.second_kind) {
    const auto d = eval_derivatives(config, xi.location, xi.multiplicity);
    for (int l = 1; l <= xi.multiplicity; ++l) F.push_back(d[l]);
  }
  return F;
}

ImplicitJacobian assemble(const ZeroConfig& config, const CriticalSet& crit) {
  const int m = config.distinct_count();
  const int k = crit.k();
  const int s = m - 1 - k;
  if (s < 0)
    throw contract_error("assemble: more critical points than m - 1");
  int nu_sum = 0;
  for (const RootCluster& xi : crit.second_kind) nu_sum += xi.multiplicity;
  if (nu_sum != m - 1)
    throw contract_error("assemble: critical multiplicities do not sum to m-1");

  ImplicitJacobian jac;
  jac.s = s;
  jac.k = k;
  const int d = m - 1;
  jac.matrix.assign(d, std::vector<Complex>(d, Complex(0.0)));

  int row = 0;
  for (int j = 0; j < k; ++j) {
    const RootCluster& xi = crit.second_kind[j];
    jac.nu.push_back(xi.multiplicity);
    const auto p_derivs =
        eval_derivatives(config, xi.location, xi.multiplicity + 1);
    // Sanity: crit must at least approximately solve the system; the slack
    // leaves room for Newton corrector iterates.
    const double scale = coeff_scale_at(expand(config), xi.location);
    if (std::abs(p_derivs[1]) > 1e-3 * std::max(scale, 1e-300))
      throw contract_error(
          "assemble: critical set inconsistent with configuration");
    std::vector<std::vector<Complex>> omega(s);
    for (int i = 0; i < s; ++i)
      omega[i] =
          omega_derivatives(config, i, xi.location, xi.multiplicity);
    for (int l = 1; l <= xi.multiplicity; ++l, ++row) {
      for (int i = 0; i < s; ++i) jac.matrix[row][i] = omega[i][l];
      jac.matrix[row][s + j] = p_derivs[l + 1];
    }
  }
  return jac;
}

double finite_difference_check(const ZeroConfig& config,
                               const CriticalSet& crit,
                               const ImplicitJacobian& jac) {
  const int d = static_cast<int>(jac.matrix.size());
  const int s = jac.s;
  const double h = 1e-6;
  double amax = 0.0;
  for (const auto& r : jac.matrix)
    for (const Complex& v : r) amax = std::max(amax, std::abs(v));

  // The map is holomorphic in every unknown, so a real step suffices.
  auto values_at = [&](int col, double offset) {
    if (col < s) {
      std::vector<Zero> zs = config.zeros();
      zs[col].location += offset;
      Tolerances loose;
      loose.sep = 0.0;
      return system_values(ZeroConfig(std::move(zs), loose), crit);
    }
    CriticalSet moved = crit;
    moved.second_kind[col - s].location += offset;
    return system_values(config, moved);
  };

  double worst = 0.0;
  for (int c = 0; c < d; ++c) {
    const auto plus = values_at(c, h);
    const auto minus = values_at(c, -h);
    for (int r = 0; r < d; ++r) {
      const Complex fd = (plus[r] - minus[r]) / (2.0 * h);
      const double denom =
          std::max({std::abs(jac.matrix[r][c]), 1e-6 * amax, 1e-300});
      worst = std::max(worst, std::abs(fd - jac.matrix[r][c]) / denom);
    }
  }
  return worst;
}

RankCertificate rank_certificate(ImplicitJacobian& jac, double threshold) {
  const Eigen::MatrixXcd M = to_eigen(jac);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  if (svd.info() != Eigen::Success)
    throw numeric_error("rank_certificate: SVD failed to converge");
  const auto& sv = svd.singularValues();
  jac.singular_values.assign(sv.data(), sv.data() + sv.size());
  RankCertificate cert;
  cert.threshold = threshold;
  cert.sigma_max = jac.singular_values.front();
  cert.sigma_min = jac.singular_values.back();
  for (double v : jac.singular_values)
    if (v > threshold * cert.sigma_max) ++cert.rank;
  return cert;
}

namespace {

bool nu_matches(const Structure& a, const Structure& b) {
  std::vector<int> x = a.nu, y = b.nu;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y && a.mu == b.mu;
}

double min_separation(const std::vector<Complex>& pts) {
  double d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      d = std::min(d, std::abs(pts[i] - pts[j]));
  return d;
}

std::vector<Complex> draw_separated(std::mt19937_64& rng, int count,
                                    double radius, double min_sep) {
  std::vector<Complex> pts;
  int guard = 0;
  while (static_cast<int>(pts.size()) < count) {
    if (++guard > 10000) throw numeric_error("draw_separated: stuck");
    const Complex c = uniform_disk(rng, radius);
    bool ok = true;
    for (const Complex& p : pts)
      if (std::abs(c - p) < min_sep) ok = false;
    if (ok) pts.push_back(c);
  }
  return pts;
}

PolyCoeffs target_critical_poly(const Structure& st,
                                const std::vector<Complex>& xis) {
  // g = n * prod (z - xi_j)^{nu_j}, degree m-1
  PolyCoeffs g{Complex(static_cast<double>(st.n))};
  for (int j = 0; j < st.k; ++j)
    for (int t = 0; t < st.nu[j]; ++t) {
      g.push_back(g.back());
      for (size_t u = g.size() - 2; u >= 1; --u)
        g[u] = g[u - 1] - xis[j] * g[u];
      g[0] = -xis[j] * g[0];
    }
  return g;
}

// Newton with step damping on the scaled residue system
//   R_i(z) = g(z_i) / omega_i(z_i) - mu_i = 0,  omega_i = prod_{j!=i}(z - z_j).
// A solution makes sum mu_i omega_i(z) == g coefficientwise, i.e. places the
// second-kind critical points exactly at the chosen xi's.  The division keeps
// the residual away from the collapsed configurations z_1 = ... = z_m, which
// would zero the unscaled point values.  Lagrange interpolation of g at the m
// points gives sum_i R_i == 0 identically, so the Jacobian has exactly one
// null direction on the solution set; the minimal-norm Gauss-Newton step
// handles it.
bool solve_residue_system(const Structure& st, const PolyCoeffs& g,
                          std::vector<Complex>& z) {
  const int m = st.m;
  Eigen::VectorXcd R(m);
  Eigen::MatrixXcd J(m, m);
  auto residual = [&](const std::vector<Complex>& zz, Eigen::VectorXcd& out) {
    for (int i = 0; i < m; ++i) {
      Complex w(1.0);
      for (int j = 0; j < m; ++j)
        if (j != i) w *= zz[i] - zz[j];
      if (std::abs(w) < 1e-280) return false;
      out(i) = eval_derivatives(g, zz[i], 0)[0] / w -
               static_cast<double>(st.mu[i]);
    }
    return true;
  };
  if (!residual(z, R)) return false;
  double rnorm = R.norm();
  for (int iter = 0; iter < 120; ++iter) {
    if (rnorm <= 1e-12 * st.n) return true;
    for (int i = 0; i < m; ++i) {
      Complex w(1.0);
      for (int j = 0; j < m; ++j)
        if (j != i) w *= z[i] - z[j];
      const auto gd = eval_derivatives(g, z[i], 1);
      const Complex gi = gd[0] / w;
      Complex inv_sum(0.0);
      for (int j = 0; j < m; ++j) {
        if (j == i) continue;
        const Complex inv = Complex(1.0) / (z[i] - z[j]);
        J(i, j) = gi * inv;
        inv_sum += inv;
      }
      J(i, i) = gd[1] / w - gi * inv_sum;
    }
    const Eigen::VectorXcd step =
        J.completeOrthogonalDecomposition().solve(R);
    if (!step.allFinite()) return false;
    double t = 1.0;
    bool improved = false;
    for (int back = 0; back < 12; ++back) {
      std::vector<Complex> trial = z;
      for (int i = 0; i < m; ++i) trial[i] -= t * step(i);
      Eigen::VectorXcd Rt(m);
      if (residual(trial, Rt) && Rt.norm() < rnorm) {
        z = trial;
        R = Rt;
        rnorm = Rt.norm();
        improved = true;
        break;
      }
      t *= 0.5;
    }
    if (!improved) return false;
  }
  return rnorm <= 1e-12 * st.n;
}

}  // namespace

std::optional<ZeroConfig> sample_stratum(const Structure& target,
                                         std::uint64_t seed,
                                         std::uint64_t index,
                                         int max_retries) {
  auto rng = rng_for(seed, index);
  const bool generic =
      std::all_of(target.nu.begin(), target.nu.end(),
                  [](int v) { return v == 1; });
  const bool simple_zeros =
      std::all_of(target.mu.begin(), target.mu.end(),
                  [](int v) { return v == 1; });

  for (int attempt = 0; attempt < max_retries; ++attempt) {
    try {
      if (generic) {
        const auto pts = draw_separated(rng, target.m, 1.0, 0.1);
        std::vector<Zero> zs(target.m);
        for (int i = 0; i < target.m; ++i) zs[i] = {pts[i], target.mu[i]};
        ZeroConfig cfg(std::move(zs));
        if (nu_matches(classify_stratum(cfg), target)) return cfg;
        continue;
      }
      const auto xis = draw_separated(rng, target.k, 0.6, 0.2);
      const PolyCoeffs g = target_critical_poly(target, xis);
      if (simple_zeros) {
        // p = antiderivative of g plus a constant; any constant avoiding the
        // critical values gives distinct simple zeros.
        PolyCoeffs p(g.size() + 1, Complex(0.0));
        for (size_t t = 0; t < g.size(); ++t)
          p[t + 1] = g[t] / static_cast<double>(t + 1);
        p.back() = 1.0;  // leading coefficient n / n
        p[0] = uniform_disk(rng, 2.0) + Complex(0.3, 0.3);
        std::vector<Complex> zeros;
        for (const Complex& r : aberth_roots(p)) zeros.push_back(r);
        if (min_separation(zeros) < 1e-2) continue;
        std::vector<Zero> zs;
        for (const Complex& r : zeros) zs.push_back({r, 1});
        ZeroConfig cfg(std::move(zs));
        if (nu_matches(classify_stratum(cfg), target)) return cfg;
        continue;
      }
      // Mixed multiplicities: residue system.
      std::vector<Complex> z = draw_separated(rng, target.m, 1.2, 0.1);
      if (!solve_residue_system(target, g, z)) continue;
      if (min_separation(z) < 1e-2) continue;
      bool bounded = true;
      for (const Complex& v : z)
        if (std::abs(v) > 20.0) bounded = false;
      if (!bounded) continue;
      std::vector<Zero> zs(target.m);
      for (int i = 0; i < target.m; ++i) zs[i] = {z[i], target.mu[i]};
      ZeroConfig cfg(std::move(zs));
      if (nu_matches(classify_stratum(cfg), target)) return cfg;
    } catch (const std::exception&) {
      // resample
    }
  }
  return std::nullopt;
}

SweepReport rank_sweep(const Structure& stratum, int samples,
                       std::uint64_t seed,
                       const std::function<void(const SweepRecord&)>& sink) {
  if (samples < 0) throw contract_error("rank_sweep: negative sample count");
  SweepReport report;
  report.stratum = stratum;
  report.samples_requested = samples;

  std::vector<std::optional<SweepRecord>> records(samples);
  parallel_for(samples, [&](int i) {
    auto cfg = sample_stratum(stratum, seed, static_cast<std::uint64_t>(i));
    if (!cfg) return;
    const CriticalSet crit = critical_points(*cfg);
    ImplicitJacobian jac = assemble(*cfg, crit);
    const RankCertificate cert = rank_certificate(jac);
    SweepRecord rec{static_cast<std::uint64_t>(i), *cfg,
                    cert.sigma_min / cert.sigma_max, cert.rank,
                    cert.rank < stratum.m - 1};
    records[i] = std::move(rec);
  });

  for (int i = 0; i < samples; ++i) {
    if (!records[i]) {
      ++report.sampler_failures;
      continue;
    }
    const SweepRecord& rec = *records[i];
    ++report.samples_built;
    report.min_sigma_ratio = std::min(report.min_sigma_ratio, rec.sigma_ratio);
    if (rec.deficient) ++report.deficient_count;
    if (sink) sink(rec);
  }
  if (samples > 0 && report.samples_built < (samples * 4) / 5)
    throw numeric_error("rank_sweep: sampler failed for more than 20% of "
                        "requested samples");
  return report;
}

}  // namespace sendovlab
