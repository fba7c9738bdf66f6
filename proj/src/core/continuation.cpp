#include "continuation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

#include "parallel.hpp"

namespace sendovlab {
namespace {

double eta_newton(const PolyCoeffs& p) {
  double mx = 1.0;
  for (const Complex& c : p) mx = std::max(mx, std::abs(c));
  return 1e-12 * mx;
}

double max_abs(const std::vector<Complex>& v) {
  double mx = 0.0;
  for (const Complex& c : v) mx = std::max(mx, std::abs(c));
  return mx;
}

// Throws boundary_error naming the collapsed separation.
void check_separations(const ImplicitState& st, const Tolerances& tol) {
  std::vector<Complex> zeros = st.dependent;
  zeros.insert(zeros.end(), st.free.begin(), st.free.end());
  for (size_t i = 0; i < zeros.size(); ++i)
    for (size_t j = i + 1; j < zeros.size(); ++j)
      if (std::abs(zeros[i] - zeros[j]) <= tol.sep)
        throw boundary_error("zeros " + std::to_string(i + 1) + " and " +
                             std::to_string(j + 1) + " collided");
  for (size_t i = 0; i < st.crit.size(); ++i) {
    for (size_t j = i + 1; j < st.crit.size(); ++j)
      if (std::abs(st.crit[i] - st.crit[j]) <= tol.sep)
        throw boundary_error("critical points " + std::to_string(i + 1) +
                             " and " + std::to_string(j + 1) + " collided");
    for (size_t j = 0; j < zeros.size(); ++j)
      if (std::abs(st.crit[i] - zeros[j]) <= tol.sep)
        throw boundary_error("critical point " + std::to_string(i + 1) +
                             " collided with zero " + std::to_string(j + 1));
  }
}

}  // namespace

ZeroConfig ImplicitState::config(const Tolerances& tol) const {
  if (static_cast<int>(dependent.size()) != stratum.s ||
      static_cast<int>(free.size()) != stratum.m - stratum.s ||
      static_cast<int>(crit.size()) != stratum.k)
    throw contract_error("ImplicitState: block sizes disagree with stratum");
  std::vector<Zero> zs;
  zs.reserve(stratum.m);
  for (int i = 0; i < stratum.s; ++i)
    zs.push_back({dependent[i], stratum.mu[i]});
  for (int i = stratum.s; i < stratum.m; ++i)
    zs.push_back({free[i - stratum.s], stratum.mu[i]});
  return ZeroConfig(std::move(zs), tol);
}

CriticalSet ImplicitState::critical_set() const {
  CriticalSet cs;
  for (int i = 0; i < stratum.m; ++i) {
    const int mu = stratum.mu[i];
    if (mu < 2) continue;
    const Complex loc =
        i < stratum.s ? dependent[i] : free[i - stratum.s];
    cs.first_kind.push_back({loc, mu - 1});
  }
  for (int j = 0; j < stratum.k; ++j)
    cs.second_kind.push_back({crit[j], stratum.nu[j]});
  return cs;
}

ImplicitState make_state(const ZeroConfig& config, const Tolerances& tol) {
  const CriticalSet cs = critical_points(config, tol);
  std::vector<int> mu, nu;
  for (const Zero& z : config.zeros()) mu.push_back(z.multiplicity);
  for (const RootCluster& xi : cs.second_kind) nu.push_back(xi.multiplicity);
  ImplicitState st;
  st.stratum = Structure(std::move(mu), std::move(nu));
  for (int i = 0; i < st.stratum.s; ++i)
    st.dependent.push_back(config.zero(i).location);
  for (int i = st.stratum.s; i < st.stratum.m; ++i)
    st.free.push_back(config.zero(i).location);
  for (const RootCluster& xi : cs.second_kind) st.crit.push_back(xi.location);
  st.residual = max_abs(system_values(config, cs));
  return st;
}

ImplicitState correct(const ImplicitState& state, const Tolerances& tol) {
  ImplicitState cur = state;
  const int s = cur.stratum.s;
  const int k = cur.stratum.k;
  const int d = s + k;
  double best = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 25; ++iter) {
    check_separations(cur, tol);
    ZeroConfig cfg = [&] {
      try {
        return cur.config(tol);
      } catch (const contract_error& e) {
        throw boundary_error(e.what());
      }
    }();
    const CriticalSet cs = cur.critical_set();
    const std::vector<Complex> F = system_values(cfg, cs);
    cur.residual = max_abs(F);
    if (cur.residual <= eta_newton(expand(cfg))) return cur;
    if (iter >= 5 && cur.residual > 0.5 * best)
      throw numeric_error("correct: residual stalled outside Newton basin");
    best = std::min(best, cur.residual);

    ImplicitJacobian jac = [&] {
      try {
        return assemble(cfg, cs);
      } catch (const contract_error& e) {
        throw numeric_error(std::string("correct: ") + e.what());
      }
    }();
    const RankCertificate cert = rank_certificate(jac, tol.rank);
    if (cert.sigma_min < tol.rank * cert.sigma_max)
      throw boundary_error("correct: Jacobian singular, stratum boundary");
    Eigen::MatrixXcd J(d, d);
    Eigen::VectorXcd rhs(d);
    for (int r = 0; r < d; ++r) {
      rhs(r) = -F[r];
      for (int c = 0; c < d; ++c) J(r, c) = jac.matrix[r][c];
    }
    const Eigen::VectorXcd delta = J.partialPivLu().solve(rhs);
    if (!delta.allFinite())
      throw numeric_error("correct: non-finite Newton step");
    for (int i = 0; i < s; ++i) cur.dependent[i] += delta(i);
    for (int j = 0; j < k; ++j) cur.crit[j] += delta(s + j);
  }
  throw numeric_error("correct: no convergence in 25 iterations");
}

TrackResult track(const ImplicitState& start, const PathSpec& path,
                  const Tolerances& tol) {
  if (path.max_step <= 0.0)
    throw contract_error("track: max_step must be positive");
  for (const auto& w : path.waypoints) {
    if (w.size() != start.free.size())
      throw contract_error("track: waypoint arity mismatch");
    for (const Complex& c : w)
      if (!is_finite(c)) throw contract_error("track: non-finite waypoint");
  }

  TrackResult out;
  ImplicitState cur = correct(start, tol);
  out.trajectory.push_back(cur);
  const int nf = static_cast<int>(cur.free.size());
  const int s = cur.stratum.s;
  const int k = cur.stratum.k;

  for (const auto& target : path.waypoints) {
    const std::vector<Complex> base = cur.free;
    double t = 0.0;
    double step = path.max_step;
    while (t < 1.0) {
      const double tn = std::min(t + step, 1.0);
      ImplicitState cand = cur;
      for (int f = 0; f < nf; ++f)
        cand.free[f] = base[f] + tn * (target[f] - base[f]);
      try {
        // Tangent predictor: J delta = -B dfree.
        const ZeroConfig cfg = cur.config(tol);
        const CriticalSet cs = cur.critical_set();
        ImplicitJacobian jac = assemble(cfg, cs);
        const int d = s + k;
        Eigen::MatrixXcd J(d, d);
        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(d);
        for (int r = 0; r < d; ++r)
          for (int c = 0; c < d; ++c) J(r, c) = jac.matrix[r][c];
        int row = 0;
        for (int j = 0; j < k; ++j) {
          std::vector<std::vector<Complex>> om(nf);
          for (int f = 0; f < nf; ++f)
            om[f] = omega_derivatives(cfg, s + f, cur.crit[j],
                                      cur.stratum.nu[j]);
          for (int l = 1; l <= cur.stratum.nu[j]; ++l, ++row)
            for (int f = 0; f < nf; ++f)
              rhs(row) -= om[f][l] * (cand.free[f] - cur.free[f]);
        }
        const Eigen::VectorXcd delta = J.partialPivLu().solve(rhs);
        if (delta.allFinite()) {
          for (int i = 0; i < s; ++i) cand.dependent[i] += delta(i);
          for (int j = 0; j < k; ++j) cand.crit[j] += delta(s + j);
        }
        cur = correct(cand, tol);
      } catch (const numeric_error& e) {
        step *= 0.5;
        if (step < 1e-9) {
          out.stop_reason = e.what();
          return out;
        }
        continue;
      }
      t = tn;
      out.trajectory.push_back(cur);
      step = std::min(path.max_step, step * 2.0);
    }
  }
  out.completed = true;
  return out;
}

ScanResult scan_analyticity(const ImplicitState& state, int variable_index,
                            int output_index, double radius, int resolution,
                            const Tolerances& tol) {
  const int nf = static_cast<int>(state.free.size());
  const int s = state.stratum.s;
  const int k = state.stratum.k;
  if (variable_index < 0 || variable_index >= nf)
    throw contract_error("scan_analyticity: variable index out of range");
  if (output_index < 0 || output_index >= s + k)
    throw contract_error("scan_analyticity: output index out of range");
  if (resolution < 2)
    throw contract_error("scan_analyticity: resolution must be >= 2");
  if (!(radius > 0.0))
    throw contract_error("scan_analyticity: radius must be positive");

  ScanResult res;
  res.resolution = resolution;
  res.radius = radius;
  const int total = resolution * resolution;
  res.values.assign(total, Complex(0.0));
  std::vector<char> ok(total, 0);
  const Complex center = state.free[variable_index];
  const double h = 2.0 * radius / (resolution - 1);

  ImplicitState base = correct(state, tol);
  parallel_for(total, [&](int idx) {
    const int iy = idx / resolution;
    const int ix = idx % resolution;
    const Complex target =
        center + Complex(-radius + ix * h, -radius + iy * h);
    PathSpec path;
    std::vector<Complex> w = base.free;
    w[variable_index] = target;
    path.waypoints.push_back(std::move(w));
    path.max_step = 0.25;
    const TrackResult tr = track(base, path, tol);
    if (!tr.completed) return;
    const ImplicitState& fin = tr.trajectory.back();
    res.values[idx] = output_index < s ? fin.dependent[output_index]
                                       : fin.crit[output_index - s];
    ok[idx] = 1;
  });

  res.ok.assign(total, false);
  for (int i = 0; i < total; ++i) {
    res.ok[i] = ok[i] != 0;
    if (!ok[i]) ++res.failed_points;
  }
  res.cr_residual.assign(total, -1.0);
  for (int iy = 1; iy + 1 < resolution; ++iy)
    for (int ix = 1; ix + 1 < resolution; ++ix) {
      const int idx = iy * resolution + ix;
      const int xm = idx - 1, xp = idx + 1;
      const int ym = idx - resolution, yp = idx + resolution;
      if (!(ok[idx] && ok[xm] && ok[xp] && ok[ym] && ok[yp])) continue;
      const Complex wx = (res.values[xp] - res.values[xm]) / (2.0 * h);
      const Complex wy = (res.values[yp] - res.values[ym]) / (2.0 * h);
      const double cr = std::abs(wx + Complex(0, 1) * wy);
      res.cr_residual[idx] = cr;
      res.max_cr_residual = std::max(res.max_cr_residual, cr);
    }
  return res;
}

}  // namespace sendovlab
