#include "sendovlab.h"

#include <cstring>
#include <string>
#include <vector>

#include "core/continuation.hpp"
#include "core/extremal.hpp"
#include "core/io.hpp"
#include "core/jacobian.hpp"

using namespace sendovlab;

struct svl_config {
  ZeroConfig cfg;
};

namespace {

thread_local std::string g_error;
Tolerances g_tol;

int fail(int code, const char* what) {
  g_error = what;
  return code;
}

template <typename F>
int guarded(F&& body) {
  try {
    body();
    return SVL_OK;
  } catch (const contract_error& e) {
    return fail(SVL_ERR_CONTRACT, e.what());
  } catch (const numeric_error& e) {
    return fail(SVL_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(SVL_ERR_NUMERIC, e.what());
  }
}

void emit_config(const ZeroConfig& cfg, svl_finding_cb cb, void* user,
                 double S) {
  const int m = cfg.distinct_count();
  std::vector<double> re(m), im(m);
  std::vector<int> mu(m);
  for (int i = 0; i < m; ++i) {
    re[i] = cfg.zero(i).location.real();
    im[i] = cfg.zero(i).location.imag();
    mu[i] = cfg.zero(i).multiplicity;
  }
  cb(user, S, re.data(), im.data(), mu.data(), m);
}

}  // namespace

extern "C" {

const char* svl_version(void) { return "1.0.0"; }

const char* svl_last_error(void) { return g_error.c_str(); }

int svl_set_tolerances(double sep, double cluster, double rank) {
  if (!(sep > 0.0) || !(cluster > 0.0) || !(rank > 0.0))
    return fail(SVL_ERR_CONTRACT, "tolerances must be positive");
  g_tol = {sep, cluster, rank};
  return SVL_OK;
}

void svl_get_tolerances(double* sep, double* cluster, double* rank) {
  if (sep) *sep = g_tol.sep;
  if (cluster) *cluster = g_tol.cluster;
  if (rank) *rank = g_tol.rank;
}

int svl_config_parse(const char* text, svl_config** out) {
  if (!text || !out) return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] { *out = new svl_config{parse_zeros(text, g_tol)}; });
}

int svl_config_create(const double* re, const double* im, const int* mult,
                      int m, svl_config** out) {
  if (!re || !im || !mult || !out || m < 1)
    return fail(SVL_ERR_CONTRACT, "null argument or empty configuration");
  return guarded([&] {
    std::vector<Zero> zs(m);
    for (int i = 0; i < m; ++i) zs[i] = {Complex(re[i], im[i]), mult[i]};
    *out = new svl_config{ZeroConfig(std::move(zs), g_tol)};
  });
}

void svl_config_free(svl_config* cfg) { delete cfg; }

int svl_config_degree(const svl_config* cfg) {
  return cfg ? cfg->cfg.degree() : -1;
}

int svl_config_distinct(const svl_config* cfg) {
  return cfg ? cfg->cfg.distinct_count() : -1;
}

void svl_config_zero(const svl_config* cfg, int i, double* re, double* im,
                     int* mult) {
  if (!cfg || i < 0 || i >= cfg->cfg.distinct_count()) return;
  const Zero& z = cfg->cfg.zero(i);
  if (re) *re = z.location.real();
  if (im) *im = z.location.imag();
  if (mult) *mult = z.multiplicity;
}

int svl_config_serialize(const svl_config* cfg, char* buf, int cap) {
  if (!cfg) return -1;
  const std::string s = serialize(cfg->cfg);
  if (buf && cap > 0) {
    const int n = std::min<int>(cap - 1, static_cast<int>(s.size()));
    std::memcpy(buf, s.data(), n);
    buf[n] = '\0';
  }
  return static_cast<int>(s.size());
}

int svl_classify(const svl_config* cfg, int* mu, int* nu, int* k) {
  if (!cfg || !mu || !nu || !k) return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] {
    const Structure st = classify_stratum(cfg->cfg, g_tol);
    for (int i = 0; i < st.m; ++i) mu[i] = st.mu[i];
    for (int j = 0; j < st.k; ++j) nu[j] = st.nu[j];
    *k = st.k;
  });
}

int svl_critical_points(const svl_config* cfg, double* re, double* im,
                        int* mult, int* first_count, int* second_count) {
  if (!cfg || !re || !im || !mult || !first_count || !second_count)
    return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] {
    const CriticalSet cs = critical_points(cfg->cfg, g_tol);
    int at = 0;
    for (const RootCluster& r : cs.first_kind) {
      re[at] = r.location.real();
      im[at] = r.location.imag();
      mult[at] = r.multiplicity;
      ++at;
    }
    *first_count = at;
    for (const RootCluster& r : cs.second_kind) {
      re[at] = r.location.real();
      im[at] = r.location.imag();
      mult[at] = r.multiplicity;
      ++at;
    }
    *second_count = at - *first_count;
  });
}

int svl_sendov_S(const svl_config* cfg, double* value, int* zero_index,
                 int* crit_index) {
  if (!cfg || !value) return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] {
    const SendovValue s = sendov_S(cfg->cfg);
    *value = s.value;
    if (zero_index) *zero_index = s.attaining_zero_index;
    if (crit_index) *crit_index = s.attaining_crit_index;
  });
}

int svl_sendov_S_ell(const svl_config* cfg, int ell, double* value,
                     int* crit_index) {
  if (!cfg || !value) return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] {
    const SendovValue s = sendov_S_ell(cfg->cfg, ell);
    *value = s.value;
    if (crit_index) *crit_index = s.attaining_crit_index;
  });
}

int svl_centroid_xi(const svl_config* cfg, double* re, double* im) {
  if (!cfg || !re || !im) return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] {
    const Complex xi = centroid_xi(cfg->cfg);
    *re = xi.real();
    *im = xi.imag();
  });
}

int svl_rank_sweep(const char* stratum, int samples, uint64_t seed,
                   svl_sweep_cb cb, void* user, int* samples_built,
                   int* deficient_count, double* min_sigma_ratio) {
  if (!stratum) return fail(SVL_ERR_CONTRACT, "null stratum");
  return guarded([&] {
    const Structure st = parse_stratum(stratum);
    auto sink = [&](const SweepRecord& rec) {
      if (!cb) return;
      const int m = rec.config.distinct_count();
      std::vector<double> re(m), im(m);
      std::vector<int> mu(m);
      for (int i = 0; i < m; ++i) {
        re[i] = rec.config.zero(i).location.real();
        im[i] = rec.config.zero(i).location.imag();
        mu[i] = rec.config.zero(i).multiplicity;
      }
      cb(user, rec.sample_index, rec.sigma_ratio, rec.rank,
         rec.deficient ? 1 : 0, re.data(), im.data(), mu.data(), m);
    };
    const SweepReport rep = rank_sweep(st, samples, seed, sink);
    if (samples_built) *samples_built = rep.samples_built;
    if (deficient_count) *deficient_count = rep.deficient_count;
    if (min_sigma_ratio) *min_sigma_ratio = rep.min_sigma_ratio;
  });
}

int svl_track(const svl_config* cfg, const double* target_re,
              const double* target_im, int nf, double max_step,
              svl_track_cb cb, void* user, int* completed, char* stop_reason,
              int reason_cap) {
  if (!cfg || !target_re || !target_im || !completed)
    return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] {
    const ImplicitState start = make_state(cfg->cfg, g_tol);
    if (static_cast<int>(start.free.size()) != nf)
      throw contract_error("track: expected " +
                           std::to_string(start.free.size()) +
                           " free-variable targets");
    PathSpec path;
    std::vector<Complex> w(nf);
    for (int i = 0; i < nf; ++i) w[i] = Complex(target_re[i], target_im[i]);
    path.waypoints.push_back(std::move(w));
    if (max_step > 0.0) path.max_step = max_step;
    const TrackResult tr = track(start, path, g_tol);
    if (cb) {
      for (size_t step = 0; step < tr.trajectory.size(); ++step) {
        const ImplicitState& st = tr.trajectory[step];
        const int s = st.stratum.s, k = st.stratum.k;
        std::vector<double> dre(s), dim(s), fre(nf), fim(nf), cre(k), cim(k);
        for (int i = 0; i < s; ++i) {
          dre[i] = st.dependent[i].real();
          dim[i] = st.dependent[i].imag();
        }
        for (int i = 0; i < nf; ++i) {
          fre[i] = st.free[i].real();
          fim[i] = st.free[i].imag();
        }
        for (int j = 0; j < k; ++j) {
          cre[j] = st.crit[j].real();
          cim[j] = st.crit[j].imag();
        }
        cb(user, static_cast<int>(step), dre.data(), dim.data(), s,
           fre.data(), fim.data(), nf, cre.data(), cim.data(), k,
           st.residual);
      }
    }
    *completed = tr.completed ? 1 : 0;
    if (stop_reason && reason_cap > 0) {
      const int n = std::min<int>(reason_cap - 1,
                                  static_cast<int>(tr.stop_reason.size()));
      std::memcpy(stop_reason, tr.stop_reason.data(), n);
      stop_reason[n] = '\0';
    }
  });
}

int svl_scan(const svl_config* cfg, int variable_index, int output_index,
             double radius, int resolution, double* values_re,
             double* values_im, int* ok, double* max_cr_residual,
             int* failed_points) {
  if (!cfg || !values_re || !values_im || !ok)
    return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] {
    const ImplicitState st = make_state(cfg->cfg, g_tol);
    const ScanResult res = scan_analyticity(st, variable_index, output_index,
                                            radius, resolution, g_tol);
    const int total = resolution * resolution;
    for (int i = 0; i < total; ++i) {
      values_re[i] = res.values[i].real();
      values_im[i] = res.values[i].imag();
      ok[i] = res.ok[i] ? 1 : 0;
    }
    if (max_cr_residual) *max_cr_residual = res.max_cr_residual;
    if (failed_points) *failed_points = res.failed_points;
  });
}

int svl_search(const svl_config* cfg, int ell, int steps, uint64_t seed,
               double eps_report, svl_trace_cb trace, svl_finding_cb finding,
               void* user, svl_config** best, int* accepted, int* collapses,
               double* kkt_residual_norm, int* kkt_feasible) {
  if (!cfg || !best) return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] {
    const LocalSearchResult res =
        local_search(cfg->cfg, ell, steps, seed, eps_report);
    if (trace)
      for (size_t i = 0; i < res.trace.size(); ++i)
        trace(user, static_cast<int>(i), res.trace[i]);
    if (finding)
      for (const Finding& f : res.findings)
        emit_config(ZeroConfig(f.zeros), finding, user, f.S);
    *best = new svl_config{res.best};
    if (accepted) *accepted = res.accepted;
    if (collapses) *collapses = res.collapses;
    if (kkt_residual_norm) *kkt_residual_norm = res.kkt_residual_norm;
    if (kkt_feasible) *kkt_feasible = res.kkt_feasible ? 1 : 0;
  });
}

int svl_sample(int n, int samples, uint64_t seed, double eps_report,
               svl_finding_cb finding, void* user, double* max_S,
               uint64_t* argmax_index, svl_config** argmax, int* skipped) {
  if (!max_S) return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] {
    const MonteCarloResult res = monte_carlo(n, samples, seed, eps_report);
    if (finding)
      for (const Finding& f : res.findings)
        emit_config(ZeroConfig(f.zeros), finding, user, f.S);
    *max_S = res.max_S;
    if (argmax_index) *argmax_index = res.argmax_index;
    if (argmax)
      *argmax = res.argmax ? new svl_config{*res.argmax} : nullptr;
    if (skipped) *skipped = res.skipped;
  });
}

int svl_kkt_fit(const svl_config* cfg, int i0, double* lambda,
                double* theta_lambda, double* eta, double* grad,
                double* residual_norm, double* max_mismatch, int* feasible) {
  if (!cfg || !lambda || !theta_lambda || !eta)
    return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] {
    const KKTFit fit = fit_multipliers(cfg->cfg, i0);
    const KKTResiduals res = kkt_residual(cfg->cfg, fit.state);
    *lambda = fit.state.lambda;
    *theta_lambda = fit.state.theta_lambda;
    const int m = cfg->cfg.distinct_count();
    for (int i = 0; i < m; ++i) eta[i] = fit.state.eta[i];
    if (grad)
      for (int i = 0; i < m; ++i) {
        grad[2 * i] = res.grad_a[i];
        grad[2 * i + 1] = res.grad_b[i];
      }
    if (residual_norm) *residual_norm = fit.residual_norm;
    if (max_mismatch) *max_mismatch = res.max_mismatch;
    if (feasible) *feasible = fit.feasible ? 1 : 0;
  });
}

int svl_enclosing_disk(const double* re, const double* im, int count,
                       double* center_re, double* center_im, double* radius,
                       int* support, int* support_count) {
  if (!re || !im || !center_re || !center_im || !radius)
    return fail(SVL_ERR_CONTRACT, "null argument");
  return guarded([&] {
    std::vector<Complex> pts(count);
    for (int i = 0; i < count; ++i) pts[i] = Complex(re[i], im[i]);
    const EnclosingDisk d = enclosing_disk(pts);
    *center_re = d.center.real();
    *center_im = d.center.imag();
    *radius = d.radius;
    if (support && support_count) {
      *support_count = static_cast<int>(d.support.size());
      for (size_t i = 0; i < d.support.size(); ++i) support[i] = d.support[i];
    }
  });
}

}  // extern "C"
