#include <cmath>

#include "core/continuation.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace sendovlab;
using namespace sendovlab::testutil;

namespace {

double state_set_distance(const ImplicitState& st, const ZeroConfig& cfg) {
  // compares dependent+crit of st against critical_points of cfg
  const CriticalSet direct = critical_points(cfg);
  std::vector<RootCluster> a, b;
  for (int j = 0; j < st.stratum.k; ++j)
    a.push_back({st.crit[j], st.stratum.nu[j]});
  for (const RootCluster& xi : direct.second_kind) b.push_back(xi);
  return set_distance(a, b);
}

}  // namespace

TEST_CASE("make_state splits blocks and reports a tiny residual") {
  const ZeroConfig cfg = ZeroConfig::roots_of_unity(5);
  const ImplicitState st = make_state(cfg);
  CHECK(st.stratum.s == 3);
  CHECK(st.stratum.k == 1);
  CHECK(st.dependent.size() == 3);
  CHECK(st.free.size() == 2);
  CHECK(std::abs(st.crit[0]) < 1e-10);
  CHECK(st.residual < 1e-10);
}

TEST_CASE("correct: exact solution is a fixed point") {
  const ImplicitState st = make_state(ZeroConfig::roots_of_unity(5));
  const ImplicitState out = correct(st);
  for (int i = 0; i < st.stratum.s; ++i)
    CHECK(std::abs(out.dependent[i] - st.dependent[i]) <= 1e-12);
  CHECK(std::abs(out.crit[0] - st.crit[0]) <= 1e-12);
  // idempotence
  const ImplicitState again = correct(out);
  CHECK(std::abs(again.crit[0] - out.crit[0]) <= 1e-12);
}

TEST_CASE("correct: perturbed xi of z^5 - 1 is pulled back to 0") {
  ImplicitState st = make_state(ZeroConfig::roots_of_unity(5));
  st.crit[0] += Complex(1e-3, -1e-3);
  for (int i = 0; i < 3; ++i) st.dependent[i] += Complex(-1e-3, 1e-3);
  const ImplicitState out = correct(st);
  CHECK(std::abs(out.crit[0]) <= 1e-12);
  CHECK(out.residual <= 1e-12 * 1.0 * 5);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(out.dependent[i] - make_state(ZeroConfig::roots_of_unity(5))
                                          .dependent[i]) <= 1e-10);
}

TEST_CASE("correct: merged critical points raise a boundary error") {
  // two xi's forced onto the same spot
  auto rng = rng_for(41);
  ZeroConfig cfg = random_config(rng, 5, 4);
  while (classify_stratum(cfg).k < 2) cfg = random_config(rng, 5, 4);
  ImplicitState st = make_state(cfg);
  st.crit[1] = st.crit[0];
  CHECK_THROWS_AS(correct(st), boundary_error);
}

TEST_CASE("track: rigid rotation of z^5 - 1 keeps xi at 0") {
  const ImplicitState st = make_state(ZeroConfig::roots_of_unity(5));
  const double phi = 0.3;
  PathSpec path;
  std::vector<Complex> target;
  for (const Complex& f : st.free) target.push_back(std::polar(1.0, phi) * f);
  // rotating only the free zeros drags the dependent ones along the same
  // rigid rotation (the rotated configuration solves the system and the
  // branch is unique); xi = 0 stays put
  path.waypoints.push_back(target);
  path.max_step = 0.05;
  const TrackResult tr = track(st, path);
  REQUIRE(tr.completed);
  for (const ImplicitState& s : tr.trajectory)
    CHECK(std::abs(s.crit[0]) <= 1e-9);
  const ImplicitState& fin = tr.trajectory.back();
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(fin.dependent[i] -
                   std::polar(1.0, phi) * st.dependent[i]) <= 1e-8);
}

TEST_CASE("track: radial move of one zero of z^3 - 1, endpoint cross-check") {
  const ImplicitState st = make_state(ZeroConfig::roots_of_unity(3));
  PathSpec path;
  std::vector<Complex> target = st.free;
  target.back() *= 0.9;
  path.waypoints.push_back(target);
  const TrackResult tr = track(st, path);
  REQUIRE(tr.completed);
  const ImplicitState& fin = tr.trajectory.back();
  CHECK(state_set_distance(fin, fin.config()) <= 1e-9);
}

TEST_CASE("track: contractible loop returns to the start") {
  auto rng = rng_for(42);
  for (int trial = 0; trial < 10; ++trial) {
    const ZeroConfig cfg = random_config(rng, 6, 5);
    const ImplicitState st = make_state(cfg);
    PathSpec path;
    const double r = 1e-2;
    for (int leg = 1; leg <= 4; ++leg) {
      std::vector<Complex> w = st.free;
      w[0] += r * std::polar(1.0, 2.0 * M_PI * leg / 4.0) - r;
      if (leg == 4) w[0] = st.free[0];
      path.waypoints.push_back(std::move(w));
    }
    const TrackResult tr = track(st, path);
    REQUIRE(tr.completed);
    const ImplicitState& fin = tr.trajectory.back();
    for (size_t i = 0; i < st.dependent.size(); ++i)
      CHECK(std::abs(fin.dependent[i] - st.dependent[i]) <= 1e-8);
    for (size_t j = 0; j < st.crit.size(); ++j)
      CHECK(std::abs(fin.crit[j] - st.crit[j]) <= 1e-8);
  }
}

TEST_CASE("track: endpoint matches direct recomputation on random paths") {
  auto rng = rng_for(43);
  int done = 0;
  for (int trial = 0; trial < 40 && done < 15; ++trial) {
    const int m = 4 + trial % 3;
    const ZeroConfig cfg = random_config(rng, m + 1, m);
    const ImplicitState st = make_state(cfg);
    PathSpec path;
    std::vector<Complex> w = st.free;
    for (Complex& c : w) c += uniform_disk(rng, 0.05);
    path.waypoints.push_back(std::move(w));
    const TrackResult tr = track(st, path);
    if (!tr.completed) continue;  // path may have hit a boundary
    const ImplicitState& fin = tr.trajectory.back();
    CHECK(state_set_distance(fin, fin.config()) <= 1e-8);
    ++done;
  }
  CHECK(done >= 10);
}

TEST_CASE("track: driving two zeros together stops with a reason") {
  const ImplicitState st = make_state(ZeroConfig::roots_of_unity(4));
  PathSpec path;
  std::vector<Complex> w = st.free;
  w[0] = w[1];  // the two free zeros are driven onto the same point
  path.waypoints.push_back(std::move(w));
  const TrackResult tr = track(st, path);
  CHECK(!tr.completed);
  CHECK(!tr.stop_reason.empty());
  CHECK(!tr.trajectory.empty());
}

TEST_CASE("scan_analyticity: xi of a k = 1 stratum is analytic (affine)") {
  // n = m: xi is the centroid sum mu~_i z_i / n, affine in each zero.
  // m = 2 with mu = (2, 1): s = 0, xi = ((n - mu_1) z_1 + (n - mu_2) z_2) / n
  const ZeroConfig cfg({{Complex(0.1, 0.2), 2}, {Complex(0.9, -0.4), 1}});
  const ImplicitState st = make_state(cfg);
  REQUIRE(st.stratum.k == 1);
  const ScanResult res =
      scan_analyticity(st, 0, st.stratum.s, 1e-2, 11);
  CHECK(res.failed_points == 0);
  CHECK(res.max_cr_residual <= 1e-6);
}

TEST_CASE("scan_analyticity: xi_1 of z^5 - 1 under one moving zero") {
  const ImplicitState st = make_state(ZeroConfig::roots_of_unity(5));
  const ScanResult res =
      scan_analyticity(st, 0, st.stratum.s, 1e-2, 11);
  CHECK(res.failed_points == 0);
  CHECK(res.max_cr_residual <= 1e-5);
}

TEST_CASE("scan_analyticity: dependent zero output is analytic too") {
  const ImplicitState st = make_state(ZeroConfig::roots_of_unity(5));
  const ScanResult res = scan_analyticity(st, 1, 0, 1e-2, 9);
  CHECK(res.failed_points == 0);
  CHECK(res.max_cr_residual <= 1e-5);
}

TEST_CASE("track equivariance under global rotation and scaling") {
  auto rng = rng_for(45);
  const ZeroConfig cfg = random_config(rng, 5, 4);
  const ImplicitState st = make_state(cfg);
  PathSpec path;
  std::vector<Complex> w = st.free;
  w[0] += Complex(0.03, -0.02);
  path.waypoints.push_back(w);
  const TrackResult plain = track(st, path);
  REQUIRE(plain.completed);

  const double rot = 0.7, scale = 1.3;
  const Complex factor = scale * std::polar(1.0, rot);
  const ImplicitState st2 = make_state(cfg.transformed(rot, scale, {0, 0}));
  PathSpec path2;
  std::vector<Complex> w2;
  for (const Complex& c : w) w2.push_back(factor * c);
  path2.waypoints.push_back(w2);
  const TrackResult conj = track(st2, path2);
  REQUIRE(conj.completed);
  const ImplicitState& a = plain.trajectory.back();
  const ImplicitState& b = conj.trajectory.back();
  for (size_t i = 0; i < a.dependent.size(); ++i)
    CHECK(std::abs(factor * a.dependent[i] - b.dependent[i]) <= 1e-8);
  std::vector<RootCluster> ca, cb;
  for (int j = 0; j < a.stratum.k; ++j) {
    ca.push_back({factor * a.crit[j], a.stratum.nu[j]});
    cb.push_back({b.crit[j], b.stratum.nu[j]});
  }
  CHECK(set_distance(ca, cb) <= 1e-8);
}
