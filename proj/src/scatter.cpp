#include "qtate/scatter.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "qtate/kernels.hpp"

namespace qtate::scatter {

namespace {

Exponent exp2(long a, long b) { return {static_cast<int>(a), static_cast<int>(b)}; }

long exp_sum(const Exponent& e) {
  long s = 0;
  for (int v : e) s += v;
  return s;
}

TwistedElement mono(const ScatterContext& ctx, Exponent e, Scalar c) {
  return TwistedElement::monomial(ctx.twist, ctx.q, Domain::torus, std::move(e), std::move(c));
}

TwistedElement unit_el(const ScatterContext& ctx) {
  return TwistedElement::unit(ctx.twist, ctx.q, Domain::torus);
}

// Product truncated at anchored order D: keeps exponent sums >= anchor_sum - D.
TwistedElement mul_anch(const TwistedElement& a, const TwistedElement& b, long anchor_sum,
                        long order) {
  const kernels::MulOptions opts{.degree_bound = {}, .min_exp_sum = anchor_sum - order};
  TwistedElement out(a.twist(), a.q(), Domain::torus);
  auto terms = (a.support_size() * b.support_size() >= kernels::parallel_threshold)
                   ? kernels::multiply_parallel(a.terms(), b.terms(), a.twist(), a.q(), opts)
                   : kernels::multiply_serial(a.terms(), b.terms(), a.twist(), a.q(), opts);
  TwistedBuilder builder(out);
  for (auto& [e, c] : terms) builder.add(e, c);
  return std::move(builder).build();
}

// m(gamma)^{-1} = q^{B(gamma,gamma)} m(-gamma).
TwistedElement mono_inverse(const ScatterContext& ctx, const Exponent& gamma) {
  Exponent neg(gamma.size());
  for (size_t i = 0; i < gamma.size(); ++i) neg[i] = -gamma[i];
  const long w = ctx.twist.apply(gamma, gamma);
  return mono(ctx, std::move(neg), ctx.q.pow(w));
}

// Inverse of u = 1 + (anchored order >= 1 corrections): geometric series.
TwistedElement unit_inverse(const TwistedElement& u, const ScatterContext& ctx, long order) {
  const TwistedElement one = unit_el(ctx);
  const TwistedElement r = one - u;  // order >= 1
  TwistedElement acc = one;
  TwistedElement pw = one;
  for (long k = 1; k <= order; ++k) {
    pw = mul_anch(pw, r, 0, order);
    if (pw.is_zero()) break;
    acc = acc + pw;
  }
  return acc;
}

// General inverse of an element with invertible leading monomial m(gamma):
// x = m(gamma) u with u unipotent; x^{-1} = u^{-1} m(gamma)^{-1}.
TwistedElement element_inverse(const TwistedElement& x, const Exponent& gamma,
                               const ScatterContext& ctx, long order) {
  const TwistedElement u = mul_anch(mono_inverse(ctx, gamma), x, 0, order);
  const TwistedElement ui = unit_inverse(u, ctx, order);
  return mul_anch(ui, mono_inverse(ctx, gamma), -exp_sum(gamma), order);
}

// Drops image terms of anchored order above the bound (images anchor at
// exponent sum 1).
TwistedElement truncate_image(const TwistedElement& img, long order) {
  TwistedBuilder out(TwistedElement(img.twist(), img.q(), Domain::torus));
  for (const auto& [e, c] : img.terms())
    if (1 - exp_sum(e) <= order) out.add(e, c);
  return std::move(out).build();
}

std::optional<std::pair<long, long>> quadrant_coords(const Exponent& delta, const Covector& a1,
                                                     const Covector& a2) {
  // Solve delta = n1 (a1.a, a1.b) + n2 (a2.a, a2.b) over the integers, n >= 0.
  const long det = a1.wedge(a2);
  if (det == 0) return std::nullopt;
  const long d1 = delta[0], d2 = delta[1];
  const long n1num = d1 * a2.b - d2 * a2.a;
  const long n2num = a1.a * d2 - a1.b * d1;
  if (n1num % det || n2num % det) return std::nullopt;
  const long n1 = n1num / det, n2 = n2num / det;
  if (n1 < 0 || n2 < 0) return std::nullopt;
  return std::make_pair(n1, n2);
}

}  // namespace

Covector::Covector(long a_, long b_) : a(a_), b(b_) {
  if (a == 0 && b == 0) throw precondition_error("Covector: must be nonzero");
}

Covector Covector::primitive() const {
  const long g = std::gcd(std::abs(a), std::abs(b));
  return Covector(a / g, b / g);
}

Slope Slope::of(long n1, long n2) {
  if (n1 < 0 || n2 < 0 || (n1 == 0 && n2 == 0))
    throw precondition_error("Slope: quadrant coordinates required");
  if (n1 == 0) return infinity();
  if (n2 == 0) return zero();
  const long g = std::gcd(n1, n2);
  return {n2 / g, n1 / g};
}

std::string Slope::str() const {
  if (is_infinite()) return "inf";
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

ScatterContext::ScatterContext(Scalar q_in) : twist(2), q(std::move(q_in)) {
  // eta xi = q xi eta in the ordered basis m(i,j) = xi^i eta^j.
  twist.entries[1][0] = 1;
  if (q.lognorm() != LogNorm(0))
    throw precondition_error("ScatterContext: |q| = 1 required");
}

AngleRegion::AngleRegion(std::vector<mpq_class> base_in, Covector a1_in, Covector a2_in)
    : base(std::move(base_in)), a1(a1_in), a2(a2_in) {
  if (base.size() != 2) throw precondition_error("AngleRegion: base point must lie in Q^2");
  for (auto& c : base) c.canonicalize();
  if (a1.wedge(a2) <= 0) throw precondition_error("AngleRegion: requires a1 ^ a2 > 0");
}

AngleRegion AngleRegion::standard() {
  return AngleRegion({mpq_class(0), mpq_class(0)}, Covector(1, 0), Covector(0, 1));
}

mpq_class AngleRegion::coefficient_bound(long n1, long n2) const {
  mpq_class v = (n1 * a1.a + n2 * a2.a) * base[0] + (n1 * a1.b + n2 * a2.b) * base[1];
  v.canonicalize();
  return v;
}

WallAutomorphism WallAutomorphism::identity(const ScatterContext& ctx, long order) {
  return WallAutomorphism(ctx, mono(ctx, exp2(1, 0), Scalar::one(ctx.q.precision())),
                          mono(ctx, exp2(0, 1), Scalar::one(ctx.q.precision())), order,
                          std::nullopt);
}

WallAutomorphism WallAutomorphism::from_images(ScatterContext ctx, TwistedElement xi_image,
                                               TwistedElement eta_image, long order,
                                               std::optional<Slope> slope) {
  WallAutomorphism w(std::move(ctx), std::move(xi_image), std::move(eta_image), order, slope);
  const struct {
    const TwistedElement* img;
    Exponent anchor;
  } items[2] = {{&w.xi_, exp2(1, 0)}, {&w.eta_, exp2(0, 1)}};
  for (const auto& [img, anchor] : items) {
    if (!(img->coeff(anchor) == Scalar::one(w.ctx_.q.precision())))
      throw precondition_error("WallAutomorphism: images must be unipotent");
    for (const auto& [e, c] : img->terms()) {
      Exponent delta(2);
      delta[0] = anchor[0] - e[0];
      delta[1] = anchor[1] - e[1];
      if (delta[0] == 0 && delta[1] == 0) continue;
      if (delta[0] < 0 || delta[1] < 0)
        throw precondition_error("WallAutomorphism: correction outside the expansion quadrant");
      if (delta[0] + delta[1] > order)
        throw precondition_error("WallAutomorphism: correction beyond the truncation order");
    }
  }
  if (!w.preserves_commutation())
    throw precondition_error("WallAutomorphism: images break the q-commutation relation");
  if (!w.slope_supported())
    throw precondition_error("WallAutomorphism: corrections leave the tagged slope ray");
  return w;
}

bool WallAutomorphism::is_identity() const {
  const auto id = identity(ctx_, order_);
  return xi_ == id.xi_ && eta_ == id.eta_;
}

bool WallAutomorphism::preserves_commutation() const {
  const TwistedElement lhs = mul_anch(eta_, xi_, 2, order_);
  const TwistedElement rhs = mul_anch(xi_, eta_, 2, order_);
  const long w = ctx_.twist.commutator(exp2(0, 1), exp2(1, 0));
  return lhs == rhs.scaled(ctx_.q.pow(w));
}

bool WallAutomorphism::slope_supported() const {
  if (!slope_) return true;
  const struct {
    const TwistedElement* img;
    Exponent anchor;
  } items[2] = {{&xi_, exp2(1, 0)}, {&eta_, exp2(0, 1)}};
  for (const auto& [img, anchor] : items) {
    for (const auto& [e, c] : img->terms()) {
      const long n1 = anchor[0] - e[0], n2 = anchor[1] - e[1];
      if (n1 == 0 && n2 == 0) continue;
      if (n2 * slope_->den != n1 * slope_->num) return false;
    }
  }
  return true;
}

bool WallAutomorphism::satisfies_bound(const AngleRegion& v) const {
  const struct {
    const TwistedElement* img;
    Exponent anchor;
  } items[2] = {{&xi_, exp2(1, 0)}, {&eta_, exp2(0, 1)}};
  for (const auto& [img, anchor] : items) {
    for (const auto& [e, c] : img->terms()) {
      Exponent delta = exp2(anchor[0] - e[0], anchor[1] - e[1]);
      if (delta[0] == 0 && delta[1] == 0) continue;
      const auto n = quadrant_coords(delta, v.a1, v.a2);
      if (!n) return false;
      const LogNorm bound{v.coefficient_bound(n->first, n->second)};
      if (!(c.lognorm() <= bound)) return false;
    }
  }
  return true;
}

bool WallAutomorphism::operator==(const WallAutomorphism& o) const {
  return ctx_ == o.ctx_ && order_ == o.order_ && xi_ == o.xi_ && eta_ == o.eta_;
}

TwistedElement WallAutomorphism::apply(const TwistedElement& f) const {
  if (!(f.twist() == ctx_.twist) || !(f.q() == ctx_.q))
    throw precondition_error("WallAutomorphism: context mismatch");

  // Power tables per generator, negatives through one shared inverse.
  struct PowerTable {
    const WallAutomorphism* owner;
    const TwistedElement* base;
    Exponent anchor;
    std::map<long, TwistedElement> cache;
    std::optional<TwistedElement> inv;

    const TwistedElement& get(long k) {
      auto it = cache.find(k);
      if (it != cache.end()) return it->second;
      const long step = exp_sum(anchor);
      if (k > 0) {
        const TwistedElement& prev = get(k - 1);
        return cache.emplace(k, mul_anch(prev, *base, k * step, owner->order_)).first->second;
      }
      if (!inv) inv = element_inverse(*base, anchor, owner->ctx_, owner->order_);
      const TwistedElement& prev = get(k + 1);
      return cache.emplace(k, mul_anch(prev, *inv, k * step, owner->order_)).first->second;
    }
  };
  PowerTable xp{this, &xi_, exp2(1, 0), {{0, unit_el(ctx_)}}, {}};
  PowerTable yp{this, &eta_, exp2(0, 1), {{0, unit_el(ctx_)}}, {}};

  TwistedBuilder out(TwistedElement(ctx_.twist, ctx_.q, Domain::torus, f.truncation()));
  for (const auto& [e, c] : f.terms()) {
    out.add_scaled(mul_anch(xp.get(e[0]), yp.get(e[1]), e[0] + e[1], order_), c);
  }
  return std::move(out).build();
}

WallAutomorphism wall_aut(const Covector& alpha, const TwistedElement& corrections,
                          const ScatterContext& ctx, long order) {
  // Corrections must be a series in R_alpha^{-1} = m(-a, -b).
  for (const auto& [e, c] : corrections.terms()) {
    const bool on_ray = (static_cast<long>(e[0]) * alpha.b == static_cast<long>(e[1]) * alpha.a) &&
                        (e[0] * alpha.a <= 0) && (e[1] * alpha.b <= 0) &&
                        !(e[0] == 0 && e[1] == 0);
    if (!on_ray)
      throw precondition_error("wall_aut: corrections not supported on the ray of alpha");
  }
  const TwistedElement f = unit_el(ctx) + corrections;
  const long w_xi = alpha.b;      // (1,0) ^ alpha
  const long w_eta = -alpha.a;    // (0,1) ^ alpha
  auto f_power = [&](long w) {
    TwistedElement acc = unit_el(ctx);
    const TwistedElement base = w >= 0 ? f : unit_inverse(f, ctx, order);
    for (long i = 0; i < std::abs(w); ++i) acc = mul_anch(acc, base, 0, order);
    return acc;
  };
  TwistedElement xi_img = mul_anch(mono(ctx, exp2(1, 0), Scalar::one(ctx.q.precision())),
                                   f_power(w_xi), 1, order);
  TwistedElement eta_img = mul_anch(mono(ctx, exp2(0, 1), Scalar::one(ctx.q.precision())),
                                    f_power(w_eta), 1, order);
  const Slope tag = Slope::of(std::abs(alpha.a), std::abs(alpha.b));
  return WallAutomorphism::from_images(ctx, std::move(xi_img), std::move(eta_img), order, tag);
}

WallAutomorphism wall_conjugation(const Covector& alpha, const TwistedElement& corrections,
                                  const ScatterContext& ctx, long order) {
  const TwistedElement f = unit_el(ctx) + corrections;
  const TwistedElement fi = unit_inverse(f, ctx, order);
  auto conj = [&](const Exponent& anchor) {
    return mul_anch(mul_anch(f, mono(ctx, anchor, Scalar::one(ctx.q.precision())), 1, order), fi,
                    1, order);
  };
  const Slope tag = Slope::of(std::abs(alpha.a), std::abs(alpha.b));
  return WallAutomorphism::from_images(ctx, conj(exp2(1, 0)), conj(exp2(0, 1)), order, tag);
}

WallAutomorphism compose(const WallAutomorphism& phi, const WallAutomorphism& psi) {
  if (!(phi.context() == psi.context()))
    throw precondition_error("compose: twist/q mismatch");
  if (phi.order() != psi.order()) throw precondition_error("compose: truncation order mismatch");
  std::optional<Slope> tag;
  if (phi.slope_tag() && psi.slope_tag() && *phi.slope_tag() == *psi.slope_tag())
    tag = phi.slope_tag();
  return WallAutomorphism(phi.context(), truncate_image(phi.apply(psi.xi_image()), phi.order()),
                          truncate_image(phi.apply(psi.eta_image()), phi.order()), phi.order(),
                          tag);
}

WallAutomorphism invert(const WallAutomorphism& phi) {
  const ScatterContext& ctx = phi.context();
  const long order = phi.order();
  const TwistedElement xi = mono(ctx, exp2(1, 0), Scalar::one(ctx.q.precision()));
  const TwistedElement eta = mono(ctx, exp2(0, 1), Scalar::one(ctx.q.precision()));
  const TwistedElement rx = phi.xi_image() - xi;
  const TwistedElement ry = phi.eta_image() - eta;
  if (rx.is_zero() && ry.is_zero()) return phi;
  WallAutomorphism psi = WallAutomorphism::identity(ctx, order);
  for (long k = 0; k < order; ++k) {
    TwistedElement nx = truncate_image(xi - psi.apply(rx), order);
    TwistedElement ny = truncate_image(eta - psi.apply(ry), order);
    if (nx == psi.xi_image() && ny == psi.eta_image()) break;
    psi = WallAutomorphism(ctx, std::move(nx), std::move(ny), order, std::nullopt);
  }
  return WallAutomorphism(ctx, psi.xi_image(), psi.eta_image(), order, phi.slope_tag());
}

WallAutomorphism transport(const WallAutomorphism& phi, const Scalar& c) {
  if (!(c.lognorm() < LogNorm(0)))
    throw precondition_error("transport: requires |C| < 1");
  const ScatterContext& ctx = phi.context();
  auto scale = [&](const TwistedElement& img, long anchor_eta) {
    TwistedBuilder out(TwistedElement(ctx.twist, ctx.q, Domain::torus));
    for (const auto& [e, coeff] : img.terms()) {
      const long m = anchor_eta - e[1];  // eta-depth of the correction
      out.add(e, m == 0 ? coeff : coeff * c.pow(m));
    }
    return std::move(out).build();
  };
  return WallAutomorphism(ctx, scale(phi.xi_image(), 0), scale(phi.eta_image(), 1), phi.order(),
                          phi.slope_tag());
}

WallAutomorphism ordered_compose(const std::map<Slope, WallAutomorphism>& factors,
                                 const ScatterContext& ctx, long order) {
  // The display g_0 ... g_lambda ... g_inf is read diagrammatically: the
  // leftmost (smallest-slope) factor acts first.
  WallAutomorphism acc = WallAutomorphism::identity(ctx, order);
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) acc = compose(acc, it->second);
  return acc;
}

std::map<Slope, WallAutomorphism> factorize(const WallAutomorphism& g0,
                                            const WallAutomorphism& ginf, long order,
                                            const AngleRegion& v) {
  const ScatterContext& ctx = g0.context();
  if (!(ginf.context() == ctx)) throw precondition_error("factorize: context mismatch");
  if (!g0.satisfies_bound(v) || !ginf.satisfies_bound(v))
    throw precondition_error("factorize: inputs violate the angle coefficient bound");
  // Inputs must be single-slope: g0 on the R_{a1}^{-1} ray, ginf on R_{a2}^{-1}.
  const struct {
    const WallAutomorphism* g;
    bool zero_side;
  } inputs[2] = {{&g0, true}, {&ginf, false}};
  for (const auto& [g, zero_side] : inputs) {
    for (const auto* img : {&g->xi_image(), &g->eta_image()}) {
      for (const auto& [e, c] : img->terms()) {
        const Exponent anchor = img == &g->xi_image() ? exp2(1, 0) : exp2(0, 1);
        const Exponent d = exp2(anchor[0] - e[0], anchor[1] - e[1]);
        if (d[0] == 0 && d[1] == 0) continue;
        const auto n = quadrant_coords(d, v.a1, v.a2);
        if (!n || (zero_side ? n->second != 0 : n->first != 0))
          throw precondition_error(zero_side ? "factorize: g0 must lie in the slope-0 subgroup"
                                             : "factorize: ginf must lie in the slope-inf subgroup");
      }
    }
  }

  // Diagrammatic reading of g_inf g_0: the left factor acts first.
  const WallAutomorphism target = compose(g0, ginf);
  std::map<Slope, WallAutomorphism> factors;

  const struct {
    Exponent anchor;
  } sides[2] = {{exp2(1, 0)}, {exp2(0, 1)}};

  for (long k = 1; k <= order; ++k) {
    const WallAutomorphism p = ordered_compose(factors, ctx, order);
    const TwistedElement delta[2] = {target.xi_image() - p.xi_image(),
                                     target.eta_image() - p.eta_image()};
    // Split the order-k part of the discrepancy by slope.
    std::map<Slope, std::pair<TwistedElement, TwistedElement>> bump;
    for (int side = 0; side < 2; ++side) {
      for (const auto& [e, c] : delta[side].terms()) {
        const Exponent d = exp2(sides[side].anchor[0] - e[0], sides[side].anchor[1] - e[1]);
        const auto n = quadrant_coords(d, v.a1, v.a2);
        if (!n)
          throw precondition_error(
              "factorize: discrepancy not expressible in the expansion monomials");
        if (n->first + n->second != k) continue;
        const Slope s = Slope::of(n->first, n->second);
        auto it = bump.find(s);
        if (it == bump.end()) {
          it = bump.emplace(s, std::make_pair(TwistedElement(ctx.twist, ctx.q, Domain::torus),
                                              TwistedElement(ctx.twist, ctx.q, Domain::torus)))
                   .first;
        }
        auto& el = side == 0 ? it->second.first : it->second.second;
        el = el + mono(ctx, e, c);
      }
    }
    for (auto& [s, inc] : bump) {
      auto it = factors.find(s);
      if (it == factors.end()) {
        auto id = WallAutomorphism::identity(ctx, order);
        it = factors
                 .emplace(s, WallAutomorphism(ctx, id.xi_image(), id.eta_image(), order, s))
                 .first;
      }
      it->second = WallAutomorphism(ctx, it->second.xi_image() + inc.first,
                                    it->second.eta_image() + inc.second, order, s);
    }
  }
  return factors;
}

namespace {

struct Event {
  mpq_class time;  // max of the two line parameters
  std::vector<mpq_class> point;
  size_t i, j;

  bool operator<(const Event& o) const {
    if (time != o.time) return time < o.time;
    if (point[0] != o.point[0]) return point[0] < o.point[0];
    if (point[1] != o.point[1]) return point[1] < o.point[1];
    if (i != o.i) return i < o.i;
    return j < o.j;
  }
};

std::optional<Event> intersect(const std::vector<Line>& lines, size_t i, size_t j) {
  const auto& l1 = lines[i];
  const auto& l2 = lines[j];
  // base1 + t1 dir1 = base2 + t2 dir2
  const mpq_class dx = l2.base[0] - l1.base[0];
  const mpq_class dy = l2.base[1] - l1.base[1];
  const long det = l1.dir.first * (-l2.dir.second) - l1.dir.second * (-l2.dir.first);
  if (det == 0) return std::nullopt;
  mpq_class t1 = (dx * (-l2.dir.second) - dy * (-l2.dir.first)) / det;
  mpq_class t2 = (l1.dir.first * dy - l1.dir.second * dx) / det;
  t1.canonicalize();
  t2.canonicalize();
  if (!(t1 > 0) || !(t2 > 0)) return std::nullopt;
  Event ev;
  ev.time = t1 > t2 ? t1 : t2;
  mpq_class px = l1.base[0] + t1 * l1.dir.first;
  mpq_class py = l1.base[1] + t1 * l1.dir.second;
  px.canonicalize();
  py.canonicalize();
  ev.point = {px, py};
  ev.i = i;
  ev.j = j;
  return ev;
}

std::pair<long, long> primitive_dir(long x, long y) {
  if (x == 0 && y == 0) throw precondition_error("scatter_chart: degenerate newborn direction");
  const long g = std::gcd(std::abs(x), std::abs(y));
  return {x / g, y / g};
}

}  // namespace

ScatteringDiagram scatter_chart(const ScatteringDiagram& initial, long order) {
  ScatteringDiagram out = initial;
  std::set<std::pair<size_t, size_t>> processed;

  while (true) {
    std::optional<Event> next;
    for (size_t i = 0; i < out.lines.size(); ++i) {
      for (size_t j = i + 1; j < out.lines.size(); ++j) {
        if (processed.count({i, j})) continue;
        auto ev = intersect(out.lines, i, j);
        if (!ev) continue;
        if (!next || *ev < *next) next = ev;
      }
    }
    if (!next) break;
    processed.insert({next->i, next->j});

    size_t first = next->i, second = next->j;
    const long w = out.lines[first].alpha.wedge(out.lines[second].alpha);
    if (w == 0) throw precondition_error("scatter_chart: collinear collision");
    if (w < 0) std::swap(first, second);

    const AngleRegion v(next->point, out.lines[first].alpha, out.lines[second].alpha);
    const auto factors = factorize(out.lines[first].aut, out.lines[second].aut, order, v);

    CollisionRecord record;
    record.point = next->point;
    record.first_line = first;
    record.second_line = second;
    for (const auto& [slope, g] : factors) {
      if (slope.is_zero() || slope.is_infinite() || g.is_identity()) continue;
      const long n1 = slope.den, n2 = slope.num;
      const Covector alpha(n1 * out.lines[first].alpha.a + n2 * out.lines[second].alpha.a,
                           n1 * out.lines[first].alpha.b + n2 * out.lines[second].alpha.b);
      const auto dir =
          primitive_dir(n1 * out.lines[first].dir.first + n2 * out.lines[second].dir.first,
                        n1 * out.lines[first].dir.second + n2 * out.lines[second].dir.second);
      record.newborn.push_back(out.lines.size());
      out.lines.push_back(Line{next->point, dir, alpha, g, true});
    }
    out.collisions.push_back(std::move(record));
  }
  return out;
}

bool chart_consistent(const ScatteringDiagram& diagram, long order,
                      std::vector<std::string>* why) {
  bool ok = true;
  for (size_t c = 0; c < diagram.collisions.size(); ++c) {
    const auto& rec = diagram.collisions[c];
    const auto& l1 = diagram.lines[rec.first_line];
    const auto& l2 = diagram.lines[rec.second_line];
    std::map<Slope, WallAutomorphism> factors;
    factors.emplace(Slope::zero(), l1.aut);
    factors.emplace(Slope::infinity(), l2.aut);
    for (size_t idx : rec.newborn) {
      const auto& born = diagram.lines[idx];
      const auto nloc = quadrant_coords(exp2(born.alpha.a, born.alpha.b), l1.alpha, l2.alpha);
      if (!nloc) {
        ok = false;
        if (why) why->push_back("collision " + std::to_string(c) + ": newborn covector outside the angle");
        continue;
      }
      factors.emplace(Slope::of(nloc->first, nloc->second), born.aut);
    }
    const auto lhs = ordered_compose(factors, l1.aut.context(), order);
    const auto rhs = compose(l1.aut, l2.aut);
    if (!(lhs == rhs)) {
      ok = false;
      if (why)
        why->push_back("collision " + std::to_string(c) +
                       ": ordered wall product does not match the incoming product");
    }
  }
  return ok;
}

}  // namespace qtate::scatter
