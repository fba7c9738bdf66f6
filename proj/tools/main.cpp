#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sendovlab.h"

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void die(int svl_code) {
  std::cerr << "error: " << svl_last_error() << "\n";
  std::exit(svl_code);
}

int check(int rc) {
  if (rc != SVL_OK) die(rc);
  return rc;
}

// Reports embed '#' commentary; strip it so reports feed back into --zeros.
std::string strip_comments(const std::string& text) {
  std::string out;
  bool skip = false;
  for (char ch : text) {
    if (ch == '#') skip = true;
    if (ch == '\n') skip = false;
    if (!skip) out.push_back(ch);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot read " << path << "\n";
    std::exit(SVL_ERR_CONTRACT);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Common {
  uint64_t seed = 0;
  double tol_sep = 1e-7, tol_cluster = 1e-8, tol_rank = 1e-10;
  std::string zeros_text, zeros_file, out_path, findings_path;
};

void add_common(CLI::App* cmd, Common& c, bool wants_zeros) {
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--tol-sep", c.tol_sep, "zero separation tolerance");
  cmd->add_option("--tol-cluster", c.tol_cluster, "root clustering tolerance");
  cmd->add_option("--tol-rank", c.tol_rank, "relative SVD rank threshold");
  cmd->add_option("--out", c.out_path, "write the report here (default stdout)");
  cmd->add_option("--findings", c.findings_path,
                  "append-only findings log (default findings.log)");
  if (wants_zeros) {
    cmd->add_option("--zeros", c.zeros_text,
                    "zero list: 're im mult' statements separated by ';' or "
                    "newlines, optional 'n=N m=M' header, or roots_of_unity:N");
    cmd->add_option("--zeros-file", c.zeros_file,
                    "read the zero list from a file ('#' comments ignored)");
  }
}

svl_config* load_config(const Common& c) {
  std::string text = c.zeros_text;
  if (!c.zeros_file.empty()) text = strip_comments(read_file(c.zeros_file));
  if (text.empty()) {
    std::cerr << "error: no zeros given (--zeros or --zeros-file)\n";
    std::exit(SVL_ERR_CONTRACT);
  }
  svl_config* cfg = nullptr;
  check(svl_config_parse(text.c_str(), &cfg));
  return cfg;
}

std::string serialize(const svl_config* cfg) {
  const int need = svl_config_serialize(cfg, nullptr, 0);
  std::string buf(need + 1, '\0');
  svl_config_serialize(cfg, buf.data(), need + 1);
  buf.resize(need);
  return buf;
}

std::string one_line(const svl_config* cfg) {
  const int m = svl_config_distinct(cfg);
  std::string out;
  for (int i = 0; i < m; ++i) {
    double re, im;
    int mu;
    svl_config_zero(cfg, i, &re, &im, &mu);
    if (i) out += "; ";
    out += fmt(re) + " " + fmt(im) + " " + std::to_string(mu);
  }
  return out;
}

struct Report {
  std::ostringstream body;
  int findings = 0;
  std::string findings_path;
  std::ofstream findings_log;  // opened on the first finding, append-only

  void finding(double S, const std::string& zeros_line) {
    ++findings;
    body << "# finding: S exceeds the reporting threshold\n";
    body << "finding S " << fmt(S) << " | " << zeros_line << "\n";
    if (!findings_log.is_open())
      findings_log.open(findings_path, std::ios::app);
    findings_log << "S " << fmt(S) << " | " << zeros_line << "\n";
  }
};

std::vector<std::pair<double, double>> parse_points(const std::string& text) {
  std::vector<std::pair<double, double>> pts;
  std::string norm = text;
  for (char& ch : norm)
    if (ch == ';' || ch == ',') ch = ' ';
  std::istringstream in(norm);
  double re, im;
  while (in >> re >> im) pts.emplace_back(re, im);
  if (!in.eof()) {
    std::cerr << "error: expected 're im' pairs\n";
    std::exit(SVL_ERR_CONTRACT);
  }
  return pts;
}

void cmd_classify(const Common& c, Report& rep) {
  svl_config* cfg = load_config(c);
  const int m = svl_config_distinct(cfg);
  std::vector<int> mu(m), nu(m);
  int k = 0;
  check(svl_classify(cfg, mu.data(), nu.data(), &k));
  rep.body << serialize(cfg);
  rep.body << "# stratum " << svl_config_degree(cfg) << ":";
  for (int i = 0; i < m; ++i) rep.body << (i ? "," : "") << mu[i];
  rep.body << "/";
  for (int j = 0; j < k; ++j) rep.body << (j ? "," : "") << nu[j];
  rep.body << "\n# k " << k << "\n";
  svl_config_free(cfg);
}

void cmd_crit(const Common& c, Report& rep) {
  svl_config* cfg = load_config(c);
  const int n = svl_config_degree(cfg);
  std::vector<double> re(2 * n), im(2 * n);
  std::vector<int> mult(2 * n);
  int nf = 0, ns = 0;
  check(svl_critical_points(cfg, re.data(), im.data(), mult.data(), &nf, &ns));
  double S, xr, xi;
  int zi, ci;
  check(svl_sendov_S(cfg, &S, &zi, &ci));
  rep.body << "# zeros: " << one_line(cfg) << "\n";
  rep.body << "# critical points, 're im mult', first kind then second kind;\n"
           << "# the bare block below re-parses as the critical-point set\n";
  int crit_degree = 0;
  for (int i = 0; i < nf + ns; ++i) crit_degree += mult[i];
  rep.body << "n=" << crit_degree << " m=" << nf + ns << "\n";
  for (int i = 0; i < nf + ns; ++i)
    rep.body << fmt(re[i]) << " " << fmt(im[i]) << " " << mult[i] << " # "
             << (i < nf ? "first" : "second") << "\n";
  rep.body << "# S " << fmt(S) << " attained zero " << zi << " crit " << ci
           << "\n";
  if (svl_centroid_xi(cfg, &xr, &xi) == SVL_OK)
    rep.body << "# centroid_xi " << fmt(xr) << " " << fmt(xi) << "\n";
  svl_config_free(cfg);
}

struct SweepCtx {
  Report* rep;
};

void cmd_rank_sweep(const Common& c, const std::string& stratum, int samples,
                    Report& rep) {
  SweepCtx ctx{&rep};
  auto cb = [](void* user, uint64_t index, double sigma_ratio, int rank,
               int deficient, const double* zre, const double* zim,
               const int* mult, int m) {
    auto& body = static_cast<SweepCtx*>(user)->rep->body;
    body << index << " sigma_ratio " << fmt(sigma_ratio) << " rank " << rank
         << " deficient " << deficient << " | ";
    for (int i = 0; i < m; ++i)
      body << (i ? "; " : "") << fmt(zre[i]) << " " << fmt(zim[i]) << " "
           << mult[i];
    body << "\n";
  };
  int built = 0, deficient = 0;
  double min_ratio = 0.0;
  check(svl_rank_sweep(stratum.c_str(), samples, c.seed, cb, &ctx, &built,
                       &deficient, &min_ratio));
  rep.body << "# built " << built << " deficient " << deficient
           << " min_sigma_ratio " << fmt(min_ratio) << "\n";
  if (deficient > 0) {
    rep.body << "# finding: rank-deficient samples\n";
    rep.findings += deficient;
  }
}

void cmd_track(const Common& c, const std::string& target, double max_step,
               Report& rep) {
  svl_config* cfg = load_config(c);
  const auto pts = parse_points(target);
  std::vector<double> tre, tim;
  for (const auto& [re, im] : pts) {
    tre.push_back(re);
    tim.push_back(im);
  }
  auto cb = [](void* user, int step, const double* dre, const double* dim,
               int s, const double* fre, const double* fim, int nf,
               const double* cre, const double* cim, int k, double residual) {
    auto& body = static_cast<Report*>(user)->body;
    body << step << " residual " << fmt(residual) << " dep";
    for (int i = 0; i < s; ++i)
      body << " " << fmt(dre[i]) << " " << fmt(dim[i]);
    body << " free";
    for (int i = 0; i < nf; ++i)
      body << " " << fmt(fre[i]) << " " << fmt(fim[i]);
    body << " crit";
    for (int j = 0; j < k; ++j)
      body << " " << fmt(cre[j]) << " " << fmt(cim[j]);
    body << "\n";
  };
  int completed = 0;
  char reason[256];
  check(svl_track(cfg, tre.data(), tim.data(), (int)pts.size(), max_step, cb,
                  &rep, &completed, reason, sizeof reason));
  rep.body << "# completed " << completed << "\n";
  if (!completed) rep.body << "# stop_reason " << reason << "\n";
  svl_config_free(cfg);
}

void cmd_scan(const Common& c, int variable, int output, double radius,
              int resolution, Report& rep) {
  svl_config* cfg = load_config(c);
  const int total = resolution * resolution;
  std::vector<double> vre(total), vim(total);
  std::vector<int> ok(total);
  double max_cr = 0.0;
  int failed = 0;
  check(svl_scan(cfg, variable, output, radius, resolution, vre.data(),
                 vim.data(), ok.data(), &max_cr, &failed));
  rep.body << "# grid row col ok re im\n";
  for (int r = 0; r < resolution; ++r)
    for (int col = 0; col < resolution; ++col) {
      const int i = r * resolution + col;
      rep.body << r << " " << col << " " << ok[i] << " " << fmt(vre[i]) << " "
               << fmt(vim[i]) << "\n";
    }
  rep.body << "# max_cr_residual " << fmt(max_cr) << " failed_points "
           << failed << "\n";
  svl_config_free(cfg);
}

struct FindCtx {
  Report* rep;
};

void finding_cb(void* user, double S, const double* re, const double* im,
                const int* mult, int m) {
  std::string line;
  for (int i = 0; i < m; ++i) {
    if (i) line += "; ";
    line += fmt(re[i]) + " " + fmt(im[i]) + " " + std::to_string(mult[i]);
  }
  static_cast<FindCtx*>(user)->rep->finding(S, line);
}

void cmd_search(const Common& c, int ell, int steps, double eps_report,
                Report& rep) {
  svl_config* cfg = load_config(c);
  FindCtx ctx{&rep};
  auto trace = [](void* user, int index, double value) {
    static_cast<FindCtx*>(user)->rep->body
        << "trace " << index << " " << fmt(value) << "\n";
  };
  svl_config* best = nullptr;
  int accepted = 0, collapses = 0, feasible = 0;
  double kkt_norm = -1.0;
  check(svl_search(cfg, ell, steps, c.seed, eps_report, trace, finding_cb,
                   &ctx, &best, &accepted, &collapses, &kkt_norm, &feasible));
  double S = 0.0;
  check(svl_sendov_S_ell(best, ell, &S, nullptr));
  rep.body << "# best, S_ell " << fmt(S) << "\n" << serialize(best);
  rep.body << "# accepted " << accepted << " collapses " << collapses << "\n";
  rep.body << "# kkt_residual_norm " << fmt(kkt_norm) << " kkt_feasible "
           << feasible << "\n";
  svl_config_free(best);
  svl_config_free(cfg);
}

void cmd_sample(const Common& c, int n, int samples, double eps_report,
                Report& rep) {
  FindCtx ctx{&rep};
  double max_S = 0.0;
  uint64_t argmax_index = 0;
  svl_config* argmax = nullptr;
  int skipped = 0;
  check(svl_sample(n, samples, c.seed, eps_report, finding_cb, &ctx, &max_S,
                   &argmax_index, &argmax, &skipped));
  rep.body << "# max_S " << fmt(max_S) << " at sample " << argmax_index
           << " skipped " << skipped << "\n";
  if (argmax) {
    rep.body << serialize(argmax);
    svl_config_free(argmax);
  }
}

void cmd_kkt(const Common& c, int i0, Report& rep) {
  svl_config* cfg = load_config(c);
  const int m = svl_config_distinct(cfg);
  std::vector<double> eta(m), grad(2 * m);
  double lambda = 0, theta_lambda = 0, rnorm = 0, mismatch = 0;
  int feasible = 0;
  check(svl_kkt_fit(cfg, i0, &lambda, &theta_lambda, eta.data(), grad.data(),
                    &rnorm, &mismatch, &feasible));
  rep.body << "# lambda " << fmt(lambda) << " theta_lambda "
           << fmt(theta_lambda) << "\n";
  for (int i = 0; i < m; ++i)
    rep.body << "zero " << i << " eta " << fmt(eta[i]) << " grad_a "
             << fmt(grad[2 * i]) << " grad_b " << fmt(grad[2 * i + 1]) << "\n";
  rep.body << "# residual_norm " << fmt(rnorm) << " max_mismatch "
           << fmt(mismatch) << " feasible " << feasible << "\n";
  svl_config_free(cfg);
}

void cmd_disk(const std::string& points, Report& rep) {
  const auto pts = parse_points(points);
  std::vector<double> re, im;
  for (const auto& [r, i] : pts) {
    re.push_back(r);
    im.push_back(i);
  }
  double cre = 0, cim = 0, rad = 0;
  int support[3], sc = 0;
  check(svl_enclosing_disk(re.data(), im.data(), (int)pts.size(), &cre, &cim,
                           &rad, support, &sc));
  rep.body << "# center re im radius\n";
  rep.body << fmt(cre) << " " << fmt(cim) << " " << fmt(rad) << "\n";
  rep.body << "# support";
  for (int i = 0; i < sc; ++i) rep.body << " " << support[i];
  rep.body << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sendovlab: numerical experiments on critical points of "
               "complex polynomials and the Sendov bound.\n"
               "Strata are written n:mu_1,...,mu_m/nu_1,...,nu_k (zero "
               "multiplicities / second-kind critical multiplicities)."};
  app.require_subcommand(1);

  Common c;
  std::string stratum, target, points;
  int samples = 100, steps = 1000, ell = 0, i0 = 0, n = 3;
  int variable = 0, output = 0, resolution = 11;
  double max_step = 0.0, radius = 1e-2, eps_report = 1e-3;

  auto* classify = app.add_subcommand("classify", "stratum of a zero list");
  add_common(classify, c, true);
  auto* crit = app.add_subcommand("crit", "critical points and S");
  add_common(crit, c, true);
  auto* sweep = app.add_subcommand("rank-sweep", "Jacobian rank over a stratum");
  add_common(sweep, c, false);
  sweep->add_option("--stratum", stratum)->required();
  sweep->add_option("--samples", samples);
  auto* track = app.add_subcommand("track", "continuation of the free zeros");
  add_common(track, c, true);
  track->add_option("--free-target", target, "'re im' per free zero")
      ->required();
  track->add_option("--max-step", max_step);
  auto* scan = app.add_subcommand("scan", "Cauchy-Riemann scan of one output");
  add_common(scan, c, true);
  scan->add_option("--variable", variable, "free variable index");
  scan->add_option("--output-index", output,
                   "dependent zero (< s) or critical point (>= s)");
  scan->add_option("--radius", radius);
  scan->add_option("--resolution", resolution);
  auto* search = app.add_subcommand("search", "stochastic ascent on S_ell");
  add_common(search, c, true);
  search->add_option("--ell", ell);
  search->add_option("--steps", steps);
  search->add_option("--eps-report", eps_report);
  auto* sample = app.add_subcommand("sample", "Monte Carlo over the disk");
  add_common(sample, c, false);
  sample->add_option("--n", n)->required();
  sample->add_option("--samples", samples);
  sample->add_option("--eps-report", eps_report);
  auto* kkt = app.add_subcommand("kkt", "KKT multiplier fit at xi");
  add_common(kkt, c, true);
  kkt->add_option("--i0", i0, "distinguished zero index");
  auto* disk = app.add_subcommand("disk", "smallest enclosing disk");
  add_common(disk, c, false);
  disk->add_option("--points", points, "'re im' pairs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : SVL_ERR_CONTRACT;
  }

  check(svl_set_tolerances(c.tol_sep, c.tol_cluster, c.tol_rank));

  Report rep;
  rep.findings_path =
      c.findings_path.empty() ? "findings.log" : c.findings_path;

  const std::string cmd = app.get_subcommands()[0]->get_name();
  if (cmd == "classify") cmd_classify(c, rep);
  else if (cmd == "crit") cmd_crit(c, rep);
  else if (cmd == "rank-sweep") cmd_rank_sweep(c, stratum, samples, rep);
  else if (cmd == "track") cmd_track(c, target, max_step, rep);
  else if (cmd == "scan") cmd_scan(c, variable, output, radius, resolution, rep);
  else if (cmd == "search") cmd_search(c, ell, steps, eps_report, rep);
  else if (cmd == "sample") cmd_sample(c, n, samples, eps_report, rep);
  else if (cmd == "kkt") cmd_kkt(c, i0, rep);
  else if (cmd == "disk") cmd_disk(points, rep);

  std::ostringstream out;
  out << "# sendovlab " << svl_version() << "\n";
  out << "# command " << cmd << "\n";
  out << "# seed " << c.seed << "\n";
  out << "# tolerances sep " << fmt(c.tol_sep) << " cluster "
      << fmt(c.tol_cluster) << " rank " << fmt(c.tol_rank) << "\n";
  out << rep.body.str();

  if (c.out_path.empty()) {
    std::cout << out.str();
  } else {
    std::ofstream f(c.out_path);
    f << out.str();
  }
  return rep.findings > 0 ? 3 : 0;
}
