#include "doctest.h"
#include "qtate/scalar.hpp"
#include "test_util.hpp"

using namespace qtate;

TEST_CASE("scalar ring arithmetic") {
  const int N = 5;
  const Scalar one_plus_t = Scalar::from_terms({{0, 1}, {1, 1}}, N);
  const Scalar one_minus_t = Scalar::from_terms({{0, 1}, {1, -1}}, N);
  // (1+t)(1-t) = 1 - t^2
  CHECK((one_plus_t * one_minus_t) == Scalar::from_terms({{0, 1}, {2, -1}}, N));

  // val(t * t^2) = 3
  CHECK(*(Scalar::t_power(1) * Scalar::t_power(2)).val() == 3);

  // q = 1+t: val(q-1) = 1, lognorm(1-q) = -1 < 0
  const Scalar q = Scalar::from_terms({{0, 1}, {1, 1}});
  CHECK(*(q - Scalar::one()).val() == 1);
  const LogNorm n = (Scalar::one() - q).lognorm();
  CHECK(n == LogNorm(-1));
  CHECK(n < LogNorm(0));
}

TEST_CASE("scalar inverse") {
  // inv(1+t) = 1 - t + t^2 - t^3 + t^4 at N=5
  const Scalar a = Scalar::from_terms({{0, 1}, {1, 1}}, 5);
  CHECK(a.inv() == Scalar::from_terms({{0, 1}, {1, -1}, {2, 1}, {3, -1}, {4, 1}}, 5));

  // inv(t) = t^{-1}
  const Scalar t = Scalar::t_power(1, 16);
  const Scalar ti = t.inv();
  CHECK(ti.terms().size() == 1);
  CHECK(ti.terms()[0].first == -1);
  CHECK(ti.terms()[0].second == 1);
  CHECK(ti.precision() == 14);

  // inv(2+t) at N=3: multiply back and check == 1 mod t^3
  const Scalar b = Scalar::from_terms({{0, 2}, {1, 1}}, 3);
  const Scalar bi = b.inv();
  CHECK(bi == Scalar::from_terms({{0, mpq_class(1, 2)}, {1, mpq_class(-1, 4)}, {2, mpq_class(1, 8)}}, 3));
  CHECK((b * bi) == Scalar::one(3));

  CHECK_THROWS_AS(Scalar::zero().inv(), precondition_error);
}

TEST_CASE("lognorm basics") {
  CHECK(Scalar::t_power(1).lognorm() == LogNorm(-1));
  CHECK(Scalar::zero().lognorm().is_bottom());
  CHECK(Scalar::from_terms({{0, 3}, {1, 5}}).lognorm() == LogNorm(0));
  // bottom absorbing under addition, minimal under comparison
  CHECK((LogNorm::bottom() + LogNorm(3)).is_bottom());
  CHECK(LogNorm::bottom() < LogNorm(mpq_class(-100)));
  CHECK(max(LogNorm::bottom(), LogNorm(2)) == LogNorm(2));
}

TEST_CASE("valuation additivity on random pairs") {
  qtest::Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Scalar a = qtest::rand_scalar_nonzero(rng);
    const Scalar b = qtest::rand_scalar_nonzero(rng);
    const Scalar ab = a * b;
    REQUIRE(!ab.is_zero());
    CHECK(*ab.val() == *a.val() + *b.val());
    CHECK(ab.lognorm() == a.lognorm() + b.lognorm());
  }
}

TEST_CASE("ultrametric inequality") {
  qtest::Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    const Scalar a = qtest::rand_scalar_nonzero(rng);
    const Scalar b = qtest::rand_scalar_nonzero(rng);
    const LogNorm ns = (a + b).lognorm();
    CHECK(ns <= max(a.lognorm(), b.lognorm()));
    if (a.lognorm() != b.lognorm()) CHECK(ns == max(a.lognorm(), b.lognorm()));
  }
}

TEST_CASE("inverse is two-sided up to the documented precision loss") {
  qtest::Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Scalar a = qtest::rand_scalar_nonzero(rng);
    const Scalar ai = a.inv();
    const int common = std::min(a.precision(), ai.precision());
    CHECK((a * ai).truncated(common) == Scalar::one(common));
    CHECK((ai * a).truncated(common) == Scalar::one(common));
    CHECK(ai.lognorm() == -a.lognorm());
  }
}

TEST_CASE("precision propagates pessimistically") {
  const Scalar a = Scalar::from_terms({{0, 1}, {7, 1}}, 8);
  const Scalar b = Scalar::one(4);
  CHECK((a * b).precision() == 4);
  CHECK((a * b) == Scalar::one(4));
  CHECK((a + b).precision() == 4);
}
