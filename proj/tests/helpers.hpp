#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "core/poly.hpp"
#include "core/rng.hpp"

namespace sendovlab::testutil {

// Random configuration with m distinct zeros, multiplicities summing to n,
// pairwise separation at least min_sep.
inline ZeroConfig random_config(std::mt19937_64& rng, int n, int m,
                                double radius = 1.0, double min_sep = 5e-2,
                                int max_mult = 3) {
  std::uniform_int_distribution<int> pick(0, m - 1);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<Complex> pts;
    while (static_cast<int>(pts.size()) < m) {
      Complex c = uniform_disk(rng, radius);
      bool ok = true;
      for (const Complex& p : pts)
        if (std::abs(c - p) < min_sep) ok = false;
      if (ok) pts.push_back(c);
    }
    std::vector<int> mult(m, 1);
    int extra = n - m;
    int guard = 0;
    while (extra > 0 && guard++ < 10000) {
      int i = pick(rng);
      if (mult[i] < max_mult) {
        ++mult[i];
        --extra;
      }
    }
    if (extra > 0) continue;  // cannot fit multiplicities, retry
    std::vector<Zero> zs(m);
    for (int i = 0; i < m; ++i) zs[i] = {pts[i], mult[i]};
    return ZeroConfig(std::move(zs));
  }
  throw std::runtime_error("random_config: failed to build configuration");
}

// Distance from q to the convex hull of pts (0 if inside).
inline double hull_distance(Complex q, std::vector<Complex> pts) {
  auto cross = [](Complex o, Complex a, Complex b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) -
           (a.imag() - o.imag()) * (b.real() - o.real());
  };
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const int n = static_cast<int>(pts.size());
  std::vector<Complex> hull;
  if (n <= 2) {
    hull = pts;
  } else {
    std::vector<Complex> h(2 * n);
    int k = 0;
    for (int i = 0; i < n; ++i) {
      while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
      h[k++] = pts[i];
    }
    int lower = k + 1;
    for (int i = n - 2; i >= 0; --i) {
      while (k >= lower && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
      h[k++] = pts[i];
    }
    h.resize(k - 1);
    hull = h;
  }
  auto seg_dist = [](Complex p, Complex a, Complex b) {
    const Complex ab = b - a;
    const double len2 = std::norm(ab);
    if (len2 == 0.0) return std::abs(p - a);
    double t = ((p.real() - a.real()) * ab.real() +
                (p.imag() - a.imag()) * ab.imag()) /
               len2;
    t = std::clamp(t, 0.0, 1.0);
    return std::abs(p - (a + t * ab));
  };
  if (hull.size() == 1) return std::abs(q - hull[0]);
  if (hull.size() == 2) return seg_dist(q, hull[0], hull[1]);
  // Inside test: q is inside iff it is left of every ccw edge.
  bool inside = true;
  const int hn = static_cast<int>(hull.size());
  for (int i = 0; i < hn; ++i)
    if (cross(hull[i], hull[(i + 1) % hn], q) < 0) inside = false;
  if (inside) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (int i = 0; i < hn; ++i)
    d = std::min(d, seg_dist(q, hull[i], hull[(i + 1) % hn]));
  return d;
}

// O(n^4) smallest enclosing disk oracle.
inline std::pair<Complex, double> brute_disk(const std::vector<Complex>& pts) {
  const double inf = std::numeric_limits<double>::infinity();
  Complex best_c;
  double best_r = inf;
  auto covers = [&](Complex c, double r) {
    for (const Complex& p : pts)
      if (std::abs(p - c) > r + 1e-12) return false;
    return true;
  };
  for (const Complex& p : pts)
    if (covers(p, 0.0)) return {p, 0.0};
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j) {
      const Complex c = 0.5 * (pts[i] + pts[j]);
      const double r = 0.5 * std::abs(pts[i] - pts[j]);
      if (r < best_r && covers(c, r)) {
        best_c = c;
        best_r = r;
      }
    }
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      for (size_t k = j + 1; k < pts.size(); ++k) {
        const Complex a = pts[i], b = pts[j], cc = pts[k];
        const double d = 2.0 * (a.real() * (b.imag() - cc.imag()) +
                                b.real() * (cc.imag() - a.imag()) +
                                cc.real() * (a.imag() - b.imag()));
        if (std::abs(d) < 1e-14) continue;
        const double na = std::norm(a), nb = std::norm(b), nc = std::norm(cc);
        const Complex c((na * (b.imag() - cc.imag()) +
                         nb * (cc.imag() - a.imag()) +
                         nc * (a.imag() - b.imag())) /
                            d,
                        (na * (cc.real() - b.real()) +
                         nb * (a.real() - cc.real()) +
                         nc * (b.real() - a.real())) /
                            d);
        const double r = std::abs(a - c);
        if (r < best_r && covers(c, r)) {
          best_c = c;
          best_r = r;
        }
      }
  return {best_c, best_r};
}

// Order-insensitive matching of two root sets with multiplicities.
inline double set_distance(std::vector<RootCluster> a,
                           std::vector<RootCluster> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const RootCluster& x : a) {
    double best = std::numeric_limits<double>::infinity();
    size_t arg = 0;
    for (size_t j = 0; j < b.size(); ++j) {
      const double d = std::abs(x.location - b[j].location);
      if (d < best) {
        best = d;
        arg = j;
      }
    }
    if (b.empty() || b[arg].multiplicity != x.multiplicity)
      return std::numeric_limits<double>::infinity();
    b.erase(b.begin() + arg);
    worst = std::max(worst, best);
  }
  return worst;
}

}  // namespace sendovlab::testutil
