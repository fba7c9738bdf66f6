#include "core/io.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace sendovlab;
using namespace sendovlab::testutil;

TEST_CASE("parse_zeros: semicolon form with keyed header") {
  const ZeroConfig c = parse_zeros("n=2 m=2; 1 0 1; -1 0 1");
  CHECK(c.degree() == 2);
  CHECK(c.zero(0).location == Complex(1, 0));
  CHECK(c.zero(1).location == Complex(-1, 0));
}

TEST_CASE("parse_zeros: bare header and newlines") {
  const ZeroConfig c = parse_zeros("3 2\n0 0 2\n1 0 1\n");
  CHECK(c.degree() == 3);
  CHECK(c.zero(0).multiplicity == 2);
}

TEST_CASE("parse_zeros: headerless") {
  const ZeroConfig c = parse_zeros("0.5 0.25 1; -0.5 0 2");
  CHECK(c.degree() == 3);
  CHECK(c.distinct_count() == 2);
}

TEST_CASE("parse_zeros: macro") {
  const ZeroConfig c = parse_zeros("roots_of_unity:6");
  CHECK(c.degree() == 6);
  CHECK(std::abs(c.zero(0).location - Complex(1, 0)) < 1e-15);
}

TEST_CASE("parse_zeros: violations named with position") {
  CHECK_THROWS_WITH_AS(parse_zeros("n=3 m=2; 1 0 1; -1 0 1"),
                       doctest::Contains("header says n=3"), parse_error);
  CHECK_THROWS_WITH_AS(parse_zeros("n=2 m=3; 1 0 1; -1 0 1"),
                       doctest::Contains("m disagrees"), parse_error);
  CHECK_THROWS_WITH_AS(parse_zeros("1 0 1; 1 0 1"),
                       doctest::Contains("duplicate"), parse_error);
  CHECK_THROWS_WITH_AS(parse_zeros("1 0 1; nan 0 1"),
                       doctest::Contains("number"), parse_error);
  CHECK_THROWS_AS(parse_zeros("1 0"), parse_error);
  CHECK_THROWS_AS(parse_zeros(""), parse_error);
  try {
    parse_zeros("1 0 1\nbad line here\n");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 1);
  }
}

TEST_CASE("parse_zeros . serialize round-trips exactly") {
  auto rng = rng_for(71);
  for (int trial = 0; trial < 50; ++trial) {
    const ZeroConfig cfg = random_config(rng, 9, 3 + trial % 6);
    const ZeroConfig back = parse_zeros(serialize(cfg));
    REQUIRE(back.distinct_count() == cfg.distinct_count());
    for (int i = 0; i < cfg.distinct_count(); ++i) {
      CHECK(back.zero(i).location == cfg.zero(i).location);
      CHECK(back.zero(i).multiplicity == cfg.zero(i).multiplicity);
    }
  }
}

TEST_CASE("parse_stratum and format_stratum") {
  const Structure st = parse_stratum("5:1,1,1,1,1/1,1,1,1");
  CHECK(st.n == 5);
  CHECK(st.m == 5);
  CHECK(st.k == 4);
  CHECK(format_stratum(st) == "5:1,1,1,1,1/1,1,1,1");
  const Structure st2 = parse_stratum("4:2,1,1/2");
  CHECK(st2.s == 1);
  CHECK_THROWS_AS(parse_stratum("5:1,1/1,1"), parse_error);  // sums wrong
  CHECK_THROWS_AS(parse_stratum("4:2,1,1"), parse_error);
  CHECK_THROWS_AS(parse_stratum("x:1/1"), parse_error);
}

TEST_CASE("fmt_real keeps 17 significant digits") {
  const double x = 0.1234567890123456789;
  CHECK(std::stod(fmt_real(x)) == x);
  CHECK(std::stod(fmt_real(1e300)) == 1e300);
}
