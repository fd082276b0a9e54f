#include "doctest.h"
#include "qtate/json_io.hpp"
#include "test_util.hpp"

using namespace qtate;
using namespace qtate::io;

TEST_CASE("scalar and element round-trips") {
  qtest::Rng rng(61);
  const Scalar q = Scalar::from_terms({{0, 1}, {1, 1}});
  for (int i = 0; i < 50; ++i) {
    const Scalar s = qtest::rand_scalar_nonzero(rng);
    CHECK(scalar_from_json(scalar_to_json(s)) == s);

    const int d = static_cast<int>(rng.uniform(1, 3));
    const TwistForm b = rng.coin() ? TwistForm::skew(d) : TwistForm::ordered(d);
    const Domain dom = rng.coin() ? Domain::torus : Domain::polydisc;
    const auto f = qtest::rand_element(rng, b, q, dom, 3, 3);
    CHECK(element_from_json(element_to_json(f)) == f);
  }
}

TEST_CASE("point round-trips") {
  const auto mono = spectra::SpectrumPoint::monomial({mpq_class(1, 2), -2});
  CHECK(point_to_json(point_from_json(point_to_json(mono))) == point_to_json(mono));

  const auto sp = spectra::SpectrumPoint::shifted_polydisc(
      {Scalar::t_power(1), Scalar::zero()}, {mpq_class(-1), mpq_class(0)},
      std::vector<mpq_class>{mpq_class(0), mpq_class(1)});
  CHECK(point_to_json(point_from_json(point_to_json(sp))) == point_to_json(sp));

  const auto st = spectra::SpectrumPoint::shifted_torus({Scalar::t_power(2)},
                                                        {mpq_class(-1)}, 8);
  CHECK(point_to_json(point_from_json(point_to_json(st))) == point_to_json(st));
}

TEST_CASE("polytope, transition and wall round-trips") {
  const sheaf::Polytope u(2, {{mpq_class(0), mpq_class(0)}}, {{1, 0}, {0, 1}});
  CHECK(polytope_to_json(polytope_from_json(polytope_to_json(u))) == polytope_to_json(u));

  const sheaf::TransitionData g({{1, 1}, {0, 1}}, {Scalar::t_power(1), Scalar::one()});
  CHECK(transition_to_json(transition_from_json(transition_to_json(g))) ==
        transition_to_json(g));

  const scatter::ScatterContext ctx(Scalar::from_terms({{0, 1}, {1, 1}}));
  const auto proto = scatter::wall_aut(
      scatter::Covector(0, 1),
      TwistedElement::monomial(ctx.twist, ctx.q, Domain::torus, {0, -1}, Scalar::one()), ctx, 6);
  CHECK(wall_to_json(wall_from_json(wall_to_json(proto))) == wall_to_json(proto));

  scatter::ScatteringDiagram diag;
  diag.lines.push_back(scatter::Line{{mpq_class(0), mpq_class(-1)},
                                     {0, 1},
                                     scatter::Covector(0, 1),
                                     proto,
                                     false});
  CHECK(diagram_to_json(diagram_from_json(diagram_to_json(diag))) == diagram_to_json(diag));
}

TEST_CASE("malformed documents are rejected") {
  CHECK_THROWS_AS(scalar_from_json(json::parse(R"({"terms": []})")), format_error);
  CHECK_THROWS_AS(scalar_from_json(json::parse(R"({"terms": [[0,"1"],[0,"2"]], "precision": 8})")),
                  format_error);
  CHECK_THROWS_AS(rational_from_json(json::parse(R"("not-a-number")")), format_error);
  CHECK_THROWS_AS(element_from_json(json::parse(R"({"twist": [[0]], "q": 3})")), format_error);
  // Structurally fine but violating a precondition: negative polydisc exponent.
  const json bad = json::parse(R"({
    "twist": [[0]], "q": {"terms": [[0,"1"]], "precision": 16}, "domain": "polydisc",
    "terms": [{"exp": [-1], "coeff": {"terms": [[0,"1"]], "precision": 16}}],
    "truncation": null})");
  CHECK_THROWS_AS(element_from_json(bad), precondition_error);
}
