#include "doctest.h"
#include "qtate/k3.hpp"
#include "test_util.hpp"

using namespace qtate;
using namespace qtate::k3;

namespace {

Scalar q_std() { return Scalar::from_terms({{0, 1}, {1, 1}}); }

}  // namespace

TEST_CASE("the orientation oracle selects a unique convention set") {
  const auto winners = consistent_conventions(q_std());
  REQUIRE(winners.size() == 1);
  CHECK(winners[0] == selected_convention());
  CHECK(winners[0].xi_eta_q);
  CHECK(winners[0].ac_printed);
  CHECK(!winners[0].bc_printed);
}

TEST_CASE("chart homomorphisms have exactly-zero residuals") {
  const K3Context ctx(q_std());
  const auto conv = selected_convention();
  const Presentation pres{ctx.q, conv.ac_printed, conv.bc_printed};
  for (int i = 1; i <= 3; ++i) {
    const auto res = relation_residuals(make_chart(i, ctx), pres, ctx);
    for (const auto& r : res) CHECK(r.is_zero());
  }

  // Sample step of the first relation in chart 1: (alpha beta - 1) gamma = 1.
  const auto c1 = make_chart(1, ctx);
  const auto ab = c1.a * c1.b;
  const auto eta = TwistedElement::monomial(ctx.twist, ctx.q, Domain::torus, {0, 1},
                                            Scalar::one());
  CHECK(ab - TwistedElement::unit(ctx.twist, ctx.q, Domain::torus) == eta);
}

TEST_CASE("q = 1 degeneration still verifies") {
  const K3Context ctx(Scalar::one());
  const auto conv = selected_convention();
  const Presentation pres{ctx.q, conv.ac_printed, conv.bc_printed};
  for (int i = 1; i <= 3; ++i)
    for (const auto& r : relation_residuals(make_chart(i, ctx), pres, ctx))
      CHECK(r.is_zero());
}

TEST_CASE("map_f against frozen values") {
  const K3Context ctx(q_std());
  const auto c1 = make_chart(1, ctx);
  CHECK(map_f(c1, -1, 2) == std::array<mpq_class, 3>{1, 1, -2});

  const auto c2 = make_chart(2, ctx);
  CHECK(map_f(c2, 2, -1) == std::array<mpq_class, 3>{0, 2, 1});

  CHECK_THROWS_AS(map_f(c1, 2, 1), precondition_error);  // outside U1
}

TEST_CASE("embed_j frozen values and continuity seam") {
  CHECK(embed_j(-1, 2) == std::array<mpq_class, 3>{1, 1, -2});
  CHECK(embed_j(2, -1) == std::array<mpq_class, 3>{0, 2, 1});
  for (long yy = -3; yy <= 3; ++yy) {
    const mpq_class y(yy);
    const auto seam = embed_j(0, y);
    CHECK(seam == std::array<mpq_class, 3>{0, y < 0 ? mpq_class(0) : y, -y});
  }
}

TEST_CASE("project and embed invert each other") {
  qtest::Rng rng(51);
  for (int i = 0; i < 100; ++i) {
    mpq_class x(rng.uniform(-20, 20), rng.uniform(1, 4));
    mpq_class y(rng.uniform(-20, 20), rng.uniform(1, 4));
    x.canonicalize();
    y.canonicalize();
    CHECK(invert_j(embed_j(x, y)) == std::array<mpq_class, 2>{x, y});
  }
  // 10 x 10 rational grid.
  for (long a = 0; a < 10; ++a)
    for (long b = 0; b < 10; ++b) {
      mpq_class x(a - 5, 2), y(b - 5, 2);
      x.canonicalize();
      y.canonicalize();
      CHECK(invert_j(embed_j(x, y)) == std::array<mpq_class, 2>{x, y});
    }
  CHECK_THROWS_AS(invert_j({-1, 0, 0}), precondition_error);
}

TEST_CASE("chart projections") {
  // pi_1 is the identity.
  CHECK(chart_projection(1, mpq_class(1, 2), -3) ==
        std::array<mpq_class, 2>{mpq_class(1, 2), -3});
  // pi_2 shifts the first coordinate when log|eta| >= 0.
  CHECK(chart_projection(2, 3, 1) == std::array<mpq_class, 2>{2, 1});
  CHECK(chart_projection(2, 3, -1) == std::array<mpq_class, 2>{3, -1});
}

TEST_CASE("compatibility sweep passes exactly on every chart") {
  const K3Context ctx(q_std());
  for (int i = 1; i <= 3; ++i) {
    const auto chart = make_chart(i, ctx);
    const auto report = compatibility_sweep(chart, ctx);
    for (const auto& f : report.failures) MESSAGE(f);
    CHECK(report.passed());
    CHECK(report.total >= 100);
    if (i == 1) {
      CHECK(report.branch_x_neg > 0);
      CHECK(report.branch_x_pos > 0);
    }
    if (i == 2) CHECK(report.branch_pi2_high > 0);
  }
  // project_pi composes map_f with the inverse embedding.
  const auto c1 = make_chart(1, ctx);
  CHECK(project_pi(c1, -1, 2) == chart_projection(1, -1, 2));
}

TEST_CASE("gluing automorphism checks") {
  const K3Context ctx(q_std());
  for (int overlap : {12, 13}) {
    const auto report = glue_automorphism_check(overlap, 8, ctx);
    for (const auto& f : report.failures) MESSAGE(f);
    CHECK(report.commutation_ok);
    CHECK(report.roundtrip_ok);
    CHECK(report.invertibility_samples == 3);
    CHECK(report.passed());
  }
}
