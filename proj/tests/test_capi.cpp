#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>
#include <cstring>
#include <string>
#include <vector>

#include "doctest.h"
#include "sendovlab.h"

namespace {

svl_config* must_parse(const char* text) {
  svl_config* cfg = nullptr;
  REQUIRE(svl_config_parse(text, &cfg) == SVL_OK);
  REQUIRE(cfg != nullptr);
  return cfg;
}

}  // namespace

TEST_CASE("version and error text") {
  CHECK(std::strlen(svl_version()) > 0);
  svl_config* cfg = nullptr;
  CHECK(svl_config_parse("not a config", &cfg) == SVL_ERR_CONTRACT);
  CHECK(std::strlen(svl_last_error()) > 0);
  CHECK(svl_config_parse(nullptr, &cfg) == SVL_ERR_CONTRACT);
}

TEST_CASE("tolerances") {
  double s, c, r;
  svl_get_tolerances(&s, &c, &r);
  CHECK(s == 1e-7);
  CHECK(svl_set_tolerances(1e-6, 1e-8, 1e-10) == SVL_OK);
  svl_get_tolerances(&s, &c, &r);
  CHECK(s == 1e-6);
  CHECK(svl_set_tolerances(-1.0, 1e-8, 1e-10) == SVL_ERR_CONTRACT);
  CHECK(svl_set_tolerances(1e-7, 1e-8, 1e-10) == SVL_OK);
}

TEST_CASE("config parse, accessors, serialize round-trip") {
  svl_config* cfg = must_parse("n=3 m=2; 0.5 0.25 2; -0.5 0 1");
  CHECK(svl_config_degree(cfg) == 3);
  CHECK(svl_config_distinct(cfg) == 2);
  double re, im;
  int mult;
  svl_config_zero(cfg, 0, &re, &im, &mult);
  CHECK(re == 0.5);
  CHECK(im == 0.25);
  CHECK(mult == 2);

  const int need = svl_config_serialize(cfg, nullptr, 0);
  REQUIRE(need > 0);
  std::string buf(need + 1, '\0');
  CHECK(svl_config_serialize(cfg, buf.data(), need + 1) == need);
  svl_config* back = must_parse(buf.c_str());
  CHECK(svl_config_degree(back) == 3);
  svl_config_zero(back, 0, &re, &im, &mult);
  CHECK(re == 0.5);
  svl_config_free(back);
  svl_config_free(cfg);
}

TEST_CASE("create from arrays and classify") {
  const double re[] = {1.0, -0.5, -0.5};
  const double im[] = {0.0, 0.8660254037844386, -0.8660254037844386};
  const int mult[] = {1, 1, 1};
  svl_config* cfg = nullptr;
  REQUIRE(svl_config_create(re, im, mult, 3, &cfg) == SVL_OK);
  int mu[3], nu[2], k = -1;
  REQUIRE(svl_classify(cfg, mu, nu, &k) == SVL_OK);
  CHECK(k == 1);  // z^3 - 1: p' has the double root 0
  CHECK(nu[0] == 2);
  svl_config_free(cfg);
}

TEST_CASE("critical points and Sendov values") {
  svl_config* cfg = must_parse("roots_of_unity:5");
  double re[8], im[8];
  int mult[8], nf = -1, ns = -1;
  REQUIRE(svl_critical_points(cfg, re, im, mult, &nf, &ns) == SVL_OK);
  CHECK(nf == 0);
  CHECK(ns == 1);
  CHECK(std::abs(std::complex<double>(re[0], im[0])) < 1e-12);
  CHECK(mult[0] == 4);

  double S = -1;
  int zi = -1, ci = -1;
  REQUIRE(svl_sendov_S(cfg, &S, &zi, &ci) == SVL_OK);
  CHECK(S == doctest::Approx(1.0).epsilon(1e-12));
  REQUIRE(svl_sendov_S_ell(cfg, 0, &S, &ci) == SVL_OK);
  CHECK(S == doctest::Approx(1.0).epsilon(1e-12));

  double xr, xi_;
  REQUIRE(svl_centroid_xi(cfg, &xr, &xi_) == SVL_OK);
  CHECK(std::abs(std::complex<double>(xr, xi_)) < 1e-12);
  svl_config_free(cfg);
}

TEST_CASE("rank sweep") {
  struct Acc {
    int calls = 0;
    double worst = 1.0;
  } acc;
  auto cb = [](void* user, uint64_t, double sigma_ratio, int rank,
               int deficient, const double*, const double*, const int*,
               int m) {
    Acc* a = static_cast<Acc*>(user);
    ++a->calls;
    if (sigma_ratio < a->worst) a->worst = sigma_ratio;
    CHECK(rank == m - 1);
    CHECK(deficient == 0);
  };
  int built = 0, deficient = 0;
  double min_ratio = 0.0;
  REQUIRE(svl_rank_sweep("4:1,1,1,1/1,1,1", 25, 7, cb, &acc, &built,
                         &deficient, &min_ratio) == SVL_OK);
  CHECK(built == 25);
  CHECK(acc.calls == 25);
  CHECK(deficient == 0);
  CHECK(min_ratio == doctest::Approx(acc.worst));
  CHECK(svl_rank_sweep("garbage", 5, 7, nullptr, nullptr, &built, &deficient,
                       &min_ratio) == SVL_ERR_CONTRACT);
}

TEST_CASE("track and scan") {
  svl_config* cfg =
      must_parse("0.1 0.0 1; -0.3 0.4 1; 0.5 -0.2 1; -0.6 -0.5 1");
  int mu[4], nu[3], k = -1;
  REQUIRE(svl_classify(cfg, mu, nu, &k) == SVL_OK);
  const int nf = k + 1;
  REQUIRE(nf == 4);  // generic quartic: all zeros free

  double tre[4], tim[4];
  int m = svl_config_distinct(cfg);
  for (int i = 0; i < nf; ++i) {
    int mm;
    svl_config_zero(cfg, m - nf + i, &tre[i], &tim[i], &mm);
    tre[i] += 0.05;
  }
  int steps = 0;
  auto cb = [](void* user, int, const double*, const double*, int,
               const double*, const double*, int, const double*,
               const double*, int, double residual) {
    ++*static_cast<int*>(user);
    CHECK(residual < 1e-8);
  };
  int completed = -1;
  char reason[128];
  REQUIRE(svl_track(cfg, tre, tim, nf, 0.0, cb, &steps, &completed, reason,
                    sizeof reason) == SVL_OK);
  CHECK(completed == 1);
  CHECK(steps >= 2);
  CHECK(reason[0] == '\0');

  const int res = 5;
  std::vector<double> vre(res * res), vim(res * res);
  std::vector<int> ok(res * res);
  double max_cr = -1;
  int failed = -1;
  REQUIRE(svl_scan(cfg, 0, 0, 1e-2, res, vre.data(), vim.data(), ok.data(),
                   &max_cr, &failed) == SVL_OK);
  CHECK(failed == 0);
  CHECK(max_cr < 1e-4);
  svl_config_free(cfg);
}

TEST_CASE("search and sample") {
  svl_config* cfg = must_parse("0.2 0.1 1; -0.4 0.3 1; 0.1 -0.5 1");
  svl_config* best = nullptr;
  int accepted = -1, collapses = -1, feasible = -1;
  double kkt_norm = -2;
  int findings = 0;
  auto fcb = [](void* user, double, const double*, const double*, const int*,
                int) { ++*static_cast<int*>(user); };
  REQUIRE(svl_search(cfg, 0, 300, 11, 1e-3, nullptr, fcb, &findings, &best,
                     &accepted, &collapses, &kkt_norm, &feasible) == SVL_OK);
  REQUIRE(best != nullptr);
  double S0, S1;
  REQUIRE(svl_sendov_S_ell(cfg, 0, &S0, nullptr) == SVL_OK);
  REQUIRE(svl_sendov_S_ell(best, 0, &S1, nullptr) == SVL_OK);
  CHECK(S1 >= S0);
  CHECK(accepted >= 0);
  svl_config_free(best);
  svl_config_free(cfg);

  double max_S = -1;
  uint64_t argmax_index = 0;
  svl_config* argmax = nullptr;
  int skipped = -1;
  REQUIRE(svl_sample(3, 500, 13, 1e-3, nullptr, nullptr, &max_S,
                     &argmax_index, &argmax, &skipped) == SVL_OK);
  CHECK(max_S > 0.0);
  CHECK(max_S <= 1.0 + 1e-9);
  REQUIRE(argmax != nullptr);
  double check_S;
  REQUIRE(svl_sendov_S(argmax, &check_S, nullptr, nullptr) == SVL_OK);
  CHECK(check_S == doctest::Approx(max_S).epsilon(1e-12));
  svl_config_free(argmax);
}

TEST_CASE("kkt fit") {
  // all zeros on the unit circle, k = 1
  svl_config* cfg = must_parse("roots_of_unity:4");
  double lambda, theta_lambda, eta[4], grad[8], rnorm, mismatch;
  int feasible = -1;
  REQUIRE(svl_kkt_fit(cfg, 0, &lambda, &theta_lambda, eta, grad, &rnorm,
                      &mismatch, &feasible) == SVL_OK);
  CHECK(mismatch < 1e-9);
  CHECK(rnorm < 1e-8);  // extremal stationary point
}

TEST_CASE("enclosing disk") {
  const double re[] = {1, -1, 1, -1, 0.2};
  const double im[] = {1, 1, -1, -1, 0.0};
  double cre, cim, rad;
  int support[3], sc = -1;
  REQUIRE(svl_enclosing_disk(re, im, 5, &cre, &cim, &rad, support, &sc) ==
          SVL_OK);
  CHECK(std::abs(cre) < 1e-12);
  CHECK(std::abs(cim) < 1e-12);
  CHECK(rad == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(sc >= 2);
}
