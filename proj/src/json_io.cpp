#include "qtate/json_io.hpp"

namespace qtate::io {

namespace {

const json& field(const json& j, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) throw format_error(std::string("missing field: ") + name);
  return *it;
}

long integer_from(const json& j, const char* what) {
  if (!j.is_number_integer()) throw format_error(std::string(what) + ": expected an integer");
  return j.get<long>();
}

}  // namespace

json rational_to_json(const mpq_class& v) { return v.get_str(); }

mpq_class rational_from_json(const json& j) {
  if (!j.is_string()) throw format_error("rational: expected a string like \"p/q\"");
  try {
    mpq_class v(j.get<std::string>());
    v.canonicalize();
    return v;
  } catch (const std::invalid_argument&) {
    throw format_error("rational: cannot parse \"" + j.get<std::string>() + "\"");
  }
}

std::vector<mpq_class> rationals_from_json(const json& j) {
  if (!j.is_array()) throw format_error("expected an array of rationals");
  std::vector<mpq_class> out;
  for (const auto& e : j) out.push_back(rational_from_json(e));
  return out;
}

json rationals_to_json(std::span<const mpq_class> v) {
  json out = json::array();
  for (const auto& c : v) out.push_back(rational_to_json(c));
  return out;
}

json scalar_to_json(const Scalar& s) {
  json terms = json::array();
  for (const auto& [e, c] : s.terms()) terms.push_back(json::array({e, rational_to_json(c)}));
  return json{{"terms", std::move(terms)}, {"precision", s.precision()}};
}

Scalar scalar_from_json(const json& j) {
  if (!j.is_object()) throw format_error("scalar: expected an object");
  const int precision = static_cast<int>(integer_from(field(j, "precision"), "scalar precision"));
  const json& terms = field(j, "terms");
  if (!terms.is_array()) throw format_error("scalar: terms must be an array");
  std::vector<Scalar::Term> out;
  long prev = 0;
  bool first = true;
  for (const auto& t : terms) {
    if (!t.is_array() || t.size() != 2) throw format_error("scalar: term must be [exp, coeff]");
    const long e = integer_from(t[0], "scalar exponent");
    if (!first && e <= prev) throw format_error("scalar: exponents must be strictly ascending");
    first = false;
    prev = e;
    out.emplace_back(e, rational_from_json(t[1]));
  }
  return Scalar::from_terms(std::move(out), precision);
}

json element_to_json(const TwistedElement& f) {
  json twist = json::array();
  for (const auto& row : f.twist().entries) twist.push_back(row);
  json terms = json::array();
  for (const auto& [e, c] : f.terms())
    terms.push_back(json{{"exp", e}, {"coeff", scalar_to_json(c)}});
  json out{{"twist", std::move(twist)},
           {"q", scalar_to_json(f.q())},
           {"domain", f.domain() == Domain::polydisc ? "polydisc" : "torus"},
           {"terms", std::move(terms)}};
  out["truncation"] = f.truncation() ? json(*f.truncation()) : json(nullptr);
  return out;
}

TwistedElement element_from_json(const json& j) {
  if (!j.is_object()) throw format_error("element: expected an object");
  const json& tw = field(j, "twist");
  if (!tw.is_array() || tw.empty()) throw format_error("element: twist must be a square matrix");
  const int d = static_cast<int>(tw.size());
  std::vector<std::vector<long>> entries;
  for (const auto& row : tw) {
    if (!row.is_array() || static_cast<int>(row.size()) != d)
      throw format_error("element: twist must be a square matrix");
    std::vector<long> r;
    for (const auto& v : row) r.push_back(integer_from(v, "twist entry"));
    entries.push_back(std::move(r));
  }
  const Scalar q = scalar_from_json(field(j, "q"));
  const std::string dom = field(j, "domain").get<std::string>();
  if (dom != "polydisc" && dom != "torus")
    throw format_error("element: domain must be \"polydisc\" or \"torus\"");
  std::optional<long> truncation;
  if (auto it = j.find("truncation"); it != j.end() && !it->is_null())
    truncation = integer_from(*it, "truncation");

  int precision = q.precision();
  TwistedBuilder builder(TwistedElement(TwistForm(d, std::move(entries)), q,
                                        dom == "polydisc" ? Domain::polydisc : Domain::torus,
                                        truncation));
  const json& terms = field(j, "terms");
  if (!terms.is_array()) throw format_error("element: terms must be an array");
  for (const auto& t : terms) {
    const json& ej = field(t, "exp");
    if (!ej.is_array() || static_cast<int>(ej.size()) != d)
      throw format_error("element: exponent dimension mismatch");
    Exponent e;
    for (const auto& v : ej) e.push_back(static_cast<int>(integer_from(v, "exponent")));
    const Scalar c = scalar_from_json(field(t, "coeff"));
    if (c.precision() != precision)
      throw precondition_error("element: coefficient precision mismatch");
    if (dom == "polydisc")
      for (int v : e)
        if (v < 0) throw precondition_error("element: negative exponent on a polydisc");
    builder.add(std::move(e), c);
  }
  return std::move(builder).build();
}

json free_element_to_json(const FreeElement& f, int alphabet) {
  json terms = json::array();
  for (const auto& [w, c] : f.terms()) {
    json word = json::array();
    for (uint8_t letter : w) word.push_back(static_cast<int>(letter));
    terms.push_back(json{{"word", std::move(word)}, {"coeff", scalar_to_json(c)}});
  }
  return json{{"alphabet", alphabet}, {"terms", std::move(terms)}};
}

FreeElement free_element_from_json(const json& j) {
  const int alphabet = static_cast<int>(integer_from(field(j, "alphabet"), "alphabet"));
  FreeElement out(alphabet);
  const json& terms = field(j, "terms");
  if (!terms.is_array()) throw format_error("free element: terms must be an array");
  for (const auto& t : terms) {
    const json& wj = field(t, "word");
    FreeElement::Word w;
    for (const auto& v : wj) {
      const long letter = integer_from(v, "letter");
      if (letter < 0 || letter >= alphabet)
        throw precondition_error("free element: letter outside alphabet");
      w.push_back(static_cast<uint8_t>(letter));
    }
    out = out + FreeElement::word(alphabet, std::move(w), scalar_from_json(field(t, "coeff")));
  }
  return out;
}

json point_to_json(const spectra::SpectrumPoint& p) {
  using Kind = spectra::SpectrumPoint::Kind;
  json out;
  switch (p.kind()) {
    case Kind::monomial:
      out["kind"] = "monomial";
      out["x"] = rationals_to_json(p.x());
      return out;
    case Kind::shifted_polydisc:
      out["kind"] = "shifted_polydisc";
      break;
    case Kind::shifted_torus:
      out["kind"] = "shifted_torus";
      break;
  }
  json a = json::array();
  for (const auto& s : p.center()) a.push_back(scalar_to_json(s));
  out["a"] = std::move(a);
  out["rho"] = rationals_to_json(p.rho());
  out["ambient"] = p.ambient() ? rationals_to_json(*p.ambient()) : json(nullptr);
  if (p.kind() == Kind::shifted_torus) out["tail_order"] = p.tail_order();
  return out;
}

spectra::SpectrumPoint point_from_json(const json& j) {
  const std::string kind = field(j, "kind").get<std::string>();
  if (kind == "monomial") return spectra::SpectrumPoint::monomial(rationals_from_json(field(j, "x")));
  if (kind != "shifted_polydisc" && kind != "shifted_torus")
    throw format_error("point: unknown kind \"" + kind + "\"");
  std::vector<Scalar> a;
  for (const auto& s : field(j, "a")) a.push_back(scalar_from_json(s));
  auto rho = rationals_from_json(field(j, "rho"));
  std::optional<std::vector<mpq_class>> ambient;
  if (auto it = j.find("ambient"); it != j.end() && !it->is_null())
    ambient = rationals_from_json(*it);
  if (kind == "shifted_polydisc")
    return spectra::SpectrumPoint::shifted_polydisc(std::move(a), std::move(rho),
                                                    std::move(ambient));
  const long m = integer_from(field(j, "tail_order"), "tail_order");
  return spectra::SpectrumPoint::shifted_torus(std::move(a), std::move(rho), m,
                                               std::move(ambient));
}

json polytope_to_json(const sheaf::Polytope& u) {
  json verts = json::array();
  for (const auto& v : u.vertices) verts.push_back(rationals_to_json(v));
  json rays = json::array();
  for (const auto& r : u.rays) rays.push_back(r);
  return json{{"vertices", std::move(verts)}, {"rays", std::move(rays)}};
}

sheaf::Polytope polytope_from_json(const json& j) {
  const json& vj = field(j, "vertices");
  if (!vj.is_array() || vj.empty()) throw format_error("polytope: vertices must be nonempty");
  std::vector<std::vector<mpq_class>> verts;
  for (const auto& v : vj) verts.push_back(rationals_from_json(v));
  std::vector<std::vector<long>> rays;
  if (auto it = j.find("rays"); it != j.end()) {
    for (const auto& r : *it) {
      std::vector<long> ray;
      for (const auto& v : r) ray.push_back(integer_from(v, "ray entry"));
      rays.push_back(std::move(ray));
    }
  }
  const int dim = static_cast<int>(verts.front().size());
  return sheaf::Polytope(dim, std::move(verts), std::move(rays));
}

json transition_to_json(const sheaf::TransitionData& g) {
  json a = json::array();
  for (const auto& row : g.A) a.push_back(row);
  json lam = json::array();
  for (const auto& s : g.lambda) lam.push_back(scalar_to_json(s));
  return json{{"A", std::move(a)}, {"lambda", std::move(lam)}};
}

sheaf::TransitionData transition_from_json(const json& j) {
  const json& aj = field(j, "A");
  std::vector<std::vector<long>> a;
  for (const auto& row : aj) {
    std::vector<long> r;
    for (const auto& v : row) r.push_back(integer_from(v, "matrix entry"));
    a.push_back(std::move(r));
  }
  std::vector<Scalar> lam;
  for (const auto& s : field(j, "lambda")) lam.push_back(scalar_from_json(s));
  return sheaf::TransitionData(std::move(a), std::move(lam));
}

json wall_to_json(const scatter::WallAutomorphism& w) {
  json out{{"xi_image", element_to_json(w.xi_image())},
           {"eta_image", element_to_json(w.eta_image())},
           {"order", w.order()}};
  out["slope"] = w.slope_tag() ? json(w.slope_tag()->str()) : json(nullptr);
  out["q"] = scalar_to_json(w.context().q);
  return out;
}

scatter::WallAutomorphism wall_from_json(const json& j) {
  const Scalar q = scalar_from_json(field(j, "q"));
  const scatter::ScatterContext ctx(q);
  TwistedElement xi = element_from_json(field(j, "xi_image"));
  TwistedElement eta = element_from_json(field(j, "eta_image"));
  if (!(xi.twist() == ctx.twist) || !(eta.twist() == ctx.twist))
    throw precondition_error("wall: images must use the scatter twist convention");
  const long order = integer_from(field(j, "order"), "order");
  std::optional<scatter::Slope> slope;
  if (auto it = j.find("slope"); it != j.end() && !it->is_null()) {
    const std::string s = it->get<std::string>();
    if (s == "inf") {
      slope = scatter::Slope::infinity();
    } else {
      const auto pos = s.find('/');
      const long num = std::stol(s.substr(0, pos));
      const long den = pos == std::string::npos ? 1 : std::stol(s.substr(pos + 1));
      slope = scatter::Slope::of(den, num);
    }
  }
  return scatter::WallAutomorphism::from_images(ctx, std::move(xi), std::move(eta), order, slope);
}

json diagram_to_json(const scatter::ScatteringDiagram& d) {
  json lines = json::array();
  for (const auto& line : d.lines) {
    lines.push_back(json{{"base", rationals_to_json(line.base)},
                         {"dir", json::array({line.dir.first, line.dir.second})},
                         {"covector", json::array({line.alpha.a, line.alpha.b})},
                         {"automorphism", wall_to_json(line.aut)},
                         {"generation", line.composite ? "composite" : "initial"}});
  }
  return json{{"lines", std::move(lines)}};
}

scatter::ScatteringDiagram diagram_from_json(const json& j) {
  scatter::ScatteringDiagram out;
  for (const auto& lj : field(j, "lines")) {
    auto base = rationals_from_json(field(lj, "base"));
    const json& dj = field(lj, "dir");
    const json& cj = field(lj, "covector");
    if (base.size() != 2 || dj.size() != 2 || cj.size() != 2)
      throw format_error("diagram line: base, dir and covector must be 2-dimensional");
    scatter::Line line{std::move(base),
                       {integer_from(dj[0], "dir"), integer_from(dj[1], "dir")},
                       scatter::Covector(integer_from(cj[0], "covector"),
                                         integer_from(cj[1], "covector")),
                       wall_from_json(field(lj, "automorphism")),
                       field(lj, "generation").get<std::string>() == "composite"};
    out.lines.push_back(std::move(line));
  }
  return out;
}

}  // namespace qtate::io
