#include <cmath>

#include "core/strata.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace sendovlab;
using namespace sendovlab::testutil;

namespace {

PolyCoeffs random_monic(std::mt19937_64& rng, int degree) {
  PolyCoeffs q(degree + 1);
  for (int i = 0; i < degree; ++i) q[i] = uniform_disk(rng, 2.0);
  q[degree] = 1.0;
  return q;
}

NodeSet random_nodes(std::mt19937_64& rng, int count, double min_sep = 1e-2) {
  std::vector<Complex> pts;
  while (static_cast<int>(pts.size()) < count) {
    Complex c = uniform_disk(rng, 2.0);
    bool ok = true;
    for (const Complex& p : pts)
      if (std::abs(c - p) < min_sep) ok = false;
    if (ok) pts.push_back(c);
  }
  return NodeSet(std::move(pts));
}

}  // namespace

TEST_CASE("classify_stratum: two simple zeros") {
  const ZeroConfig c({{Complex(1, 0), 1}, {Complex(-1, 0), 1}});
  const Structure st = classify_stratum(c);
  CHECK(st.mu == std::vector<int>{1, 1});
  CHECK(st.nu == std::vector<int>{1});
  CHECK(st.m == 2);
  CHECK(st.k == 1);
  CHECK(st.s == 0);
}

TEST_CASE("classify_stratum: fifth roots of unity") {
  const Structure st = classify_stratum(ZeroConfig::roots_of_unity(5));
  CHECK(st.mu == std::vector<int>(5, 1));
  CHECK(st.nu == std::vector<int>{4});
  CHECK(st.m == 5);
  CHECK(st.k == 1);
  CHECK(st.s == 3);
}

TEST_CASE("classify_stratum: z^2(z-1)") {
  const Structure st =
      classify_stratum(ZeroConfig({{Complex(0, 0), 2}, {Complex(1, 0), 1}}));
  CHECK(st.mu == std::vector<int>{2, 1});
  CHECK(st.nu == std::vector<int>{1});
  CHECK(st.m == 2);
  CHECK(st.k == 1);
  CHECK(st.s == 0);
}

TEST_CASE("classify_stratum: closure and the s = 0 parenthetical") {
  auto rng = rng_for(21);
  for (int trial = 0; trial < 40; ++trial) {
    const ZeroConfig c = random_config(rng, 8, 3 + trial % 6);
    const Structure st = classify_stratum(c);
    int mu_sum = 0;
    for (int v : st.mu) mu_sum += v;
    int nu_sum = 0;
    for (int v : st.nu) nu_sum += v;
    CHECK(mu_sum == st.n);
    CHECK(nu_sum == st.m - 1);
    CHECK(st.s == st.m - 1 - st.k);
    CHECK(st.s >= 0);
    const bool all_ones =
        std::all_of(st.nu.begin(), st.nu.end(), [](int v) { return v == 1; });
    CHECK((st.s == 0) == all_ones);
  }
  // s = 0 with a nu_j > 1 is impossible; the converse direction on a known
  // s > 0 case:
  CHECK(classify_stratum(ZeroConfig::roots_of_unity(4)).s == 2);
}

TEST_CASE("divided_difference: monic quadratic over three nodes") {
  const PolyCoeffs q{Complex(0), Complex(0), Complex(1)};  // z^2
  CHECK(std::abs(divided_difference(q, {Complex(0), Complex(1), Complex(2)}) -
                 Complex(1)) < 1e-14);
}

TEST_CASE("divided_difference: confluent node uses the derivative") {
  const PolyCoeffs q{Complex(0), Complex(0), Complex(1)};  // z^2, q'(0) = 0
  CHECK(std::abs(divided_difference(q, {Complex(0), Complex(0), Complex(1)}) -
                 Complex(1)) < 1e-14);
  // two-node case: (q(1) - q(0)) / 1 = 1
  CHECK(std::abs(divided_difference(q, {Complex(0), Complex(1)}) -
                 Complex(1)) < 1e-14);
}

TEST_CASE("divided_difference: fully confluent equals Taylor coefficient") {
  // q = (z-2)^3: q[2,2,2,2] = 1, q[2,2,2] = 0
  const PolyCoeffs q = expand(ZeroConfig({{Complex(2, 0), 3}}));
  const Complex two(2, 0);
  CHECK(std::abs(divided_difference(q, {two, two, two, two}) - Complex(1)) <
        1e-14);
  CHECK(std::abs(divided_difference(q, {two, two, two})) < 1e-14);
}

TEST_CASE("divided_difference: permutation invariance") {
  auto rng = rng_for(22);
  for (int trial = 0; trial < 30; ++trial) {
    const PolyCoeffs q = random_monic(rng, 5);
    std::vector<Complex> nodes;
    for (int i = 0; i < 6; ++i) nodes.push_back(uniform_disk(rng, 1.5));
    nodes.push_back(nodes[2]);  // one repetition too
    const Complex a = divided_difference(q, nodes);
    std::shuffle(nodes.begin(), nodes.end(), rng);
    const Complex b = divided_difference(q, nodes);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("divided_difference: repetition beyond 1 + degree rejected") {
  const PolyCoeffs q{Complex(0), Complex(1)};  // z, degree 1
  CHECK_THROWS_AS(
      divided_difference(q, {Complex(0), Complex(0), Complex(0)}),
      contract_error);
}

TEST_CASE("leading_dd_identity: node polynomial itself") {
  auto rng = rng_for(23);
  const NodeSet nodes = random_nodes(rng, 4, 5e-2);
  const PolyCoeffs omega = nodes.node_poly();
  for (int i = 0; i < 4; ++i)
    CHECK(leading_dd_identity(omega, nodes, i) < 1e-12);
}

TEST_CASE("leading_dd_identity: z^3 + z over (0, 1, -1)") {
  const PolyCoeffs q{Complex(0), Complex(1), Complex(0), Complex(1)};
  const NodeSet nodes({Complex(0), Complex(1), Complex(-1)});
  CHECK(leading_dd_identity(q, nodes, 0) < 1e-10);
}

TEST_CASE("leading_dd_identity: property over random draws") {
  auto rng = rng_for(24);
  std::uniform_int_distribution<int> pick_s(2, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const int s = pick_s(rng);
    const NodeSet nodes = random_nodes(rng, s);
    const PolyCoeffs q = random_monic(rng, s);
    std::uniform_int_distribution<int> pick_i(0, s - 1);
    CHECK(leading_dd_identity(q, nodes, pick_i(rng)) <= 1e-8);
  }
}

TEST_CASE("lagrange_residual: the node polynomial leaves only omega") {
  auto rng = rng_for(25);
  const NodeSet nodes = random_nodes(rng, 4, 5e-2);
  CHECK(lagrange_residual(nodes.node_poly(), nodes, Complex(0.3, 0.7)) <
        1e-12);
}

TEST_CASE("lagrange_residual: hand-evaluated quadratic") {
  // q = z^2, nodes (0, 1), z = 5: 25 = [0 + 1 * (5-0)/(1-0)] + 5*4
  const PolyCoeffs q{Complex(0), Complex(0), Complex(1)};
  const NodeSet nodes({Complex(0), Complex(1)});
  CHECK(lagrange_residual(q, nodes, Complex(5, 0)) < 1e-12);
}

TEST_CASE("lagrange_residual: property over random draws") {
  auto rng = rng_for(26);
  std::uniform_int_distribution<int> pick_s(2, 4);
  for (int trial = 0; trial < 1000; ++trial) {
    const int s = (trial % 2 == 0) ? 4 : pick_s(rng);
    const NodeSet nodes = random_nodes(rng, s);
    const PolyCoeffs q = random_monic(rng, s);
    const Complex z = uniform_disk(rng, 3.0);
    CHECK(lagrange_residual(q, nodes, z) <=
          1e-8 * std::pow(1.0 + std::abs(z), s));
  }
}
