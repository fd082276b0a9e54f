#include "qtate/k3.hpp"

#include <sstream>

#include "qtate/spectra.hpp"

namespace qtate::k3 {

namespace {

TwistedElement mono(const K3Context& ctx, int a, int b, const Scalar& c,
                    std::optional<long> trunc = std::nullopt) {
  return TwistedElement::monomial(ctx.twist, ctx.q, Domain::torus, {a, b}, c, trunc);
}

TwistedElement one_el(const K3Context& ctx) {
  return TwistedElement::unit(ctx.twist, ctx.q, Domain::torus);
}

// m(gamma)^{-1} = q^{B(gamma,gamma)} m(-gamma).
TwistedElement mono_inverse(const K3Context& ctx, int a, int b) {
  const Exponent g{a, b};
  const long w = ctx.twist.apply(g, g);
  return mono(ctx, -a, -b, ctx.q.pow(w));
}

mpq_class qmax(const mpq_class& a, const mpq_class& b) { return a < b ? b : a; }

mpq_class eval_at(const TwistedElement& f, const mpq_class& x, const mpq_class& y) {
  const std::vector<mpq_class> pt{x, y};
  const LogNorm n = spectra::monomial_eval(f, pt);
  return n.value();
}

}  // namespace

Convention selected_convention() {
  // The unique orientation set under which all three charts verify: the torus
  // relation must read xi eta = q eta xi, alpha gamma = q gamma alpha stays as
  // printed, and the beta-gamma relation flips to gamma beta = q beta gamma.
  return Convention{true, true, false};
}

K3Context::K3Context(Scalar q_in, bool xi_eta_q_in)
    : q(std::move(q_in)), twist(2), xi_eta_q(xi_eta_q_in) {
  // Ordered basis m(i,j) = xi^i eta^j; the single lower entry fixes the
  // commutation orientation.
  twist.entries[1][0] = xi_eta_q ? -1 : 1;
  if (q.lognorm() != LogNorm(0)) throw precondition_error("K3Context: |q| = 1 required");
}

Chart make_chart(int index, const K3Context& ctx, const mpq_class& eps) {
  if (!(eps > 0 && eps < 1)) throw precondition_error("Chart: eps must satisfy 0 < eps < 1");
  const Scalar one = Scalar::one(ctx.q.precision());
  const TwistedElement xi = mono(ctx, 1, 0, one);
  const TwistedElement eta = mono(ctx, 0, 1, one);
  const TwistedElement one_plus_eta = one_el(ctx) + eta;
  switch (index) {
    case 1:
      // g1 = (xi^{-1}, xi (1 + eta), eta^{-1})
      return Chart{1, eps, mono_inverse(ctx, 1, 0), xi * one_plus_eta, mono_inverse(ctx, 0, 1)};
    case 2:
      // g2 = ((1 + eta) xi^{-1}, xi, eta^{-1})
      return Chart{2, eps, one_plus_eta * mono_inverse(ctx, 1, 0), xi, mono_inverse(ctx, 0, 1)};
    case 3:
      // g3 = ((1 + eta)(xi eta)^{-1}, xi eta, eta^{-1})
      return Chart{3, eps, one_plus_eta * mono_inverse(ctx, 1, 1), xi * eta,
                   mono_inverse(ctx, 0, 1)};
    default:
      throw precondition_error("Chart: index must be 1, 2 or 3");
  }
}

std::array<TwistedElement, 4> relation_residuals(const Chart& chart, const Presentation& pres,
                                                 const K3Context& ctx,
                                                 std::optional<long> truncation) {
  const Scalar& q = ctx.q;
  auto trunced = [&](const TwistedElement& e) { return e.with_truncation(truncation); };
  const TwistedElement a = trunced(chart.a);
  const TwistedElement b = trunced(chart.b);
  const TwistedElement c = trunced(chart.c);
  const TwistedElement one = trunced(one_el(ctx));

  const TwistedElement r1 = pres.ac_printed ? (a * c) - (c * a).scaled(q)
                                            : (c * a) - (a * c).scaled(q);
  const TwistedElement r2 = pres.bc_printed ? (b * c) - (c * b).scaled(q)
                                            : (c * b) - (b * c).scaled(q);
  const TwistedElement r3 =
      (b * a) - (a * b).scaled(q) - one.scaled(Scalar::one(q.precision()) - q);
  const TwistedElement r4 = ((a * b) - one) * c - one;
  return {r1, r2, r3, r4};
}

std::vector<Convention> consistent_conventions(const Scalar& q) {
  std::vector<Convention> winners;
  for (bool xi_eta : {true, false}) {
    const K3Context ctx(q, xi_eta);
    for (bool ac : {true, false}) {
      for (bool bc : {true, false}) {
        const Presentation pres{q, ac, bc};
        bool all_zero = true;
        for (int i = 1; i <= 3; ++i) {
          for (const auto& r : relation_residuals(make_chart(i, ctx), pres, ctx))
            if (!r.is_zero()) all_zero = false;
        }
        if (all_zero) winners.push_back(Convention{xi_eta, ac, bc});
      }
    }
  }
  return winners;
}

bool region_contains(int index, const mpq_class& x, const mpq_class& y, const mpq_class& eps) {
  switch (index) {
    case 1: {
      const mpq_class ay = y < 0 ? mpq_class(-y) : y;
      return x < eps * ay;
    }
    case 2:
      // U2' = { x > 0, y < eps/(1+eps) x }
      return x > 0 && y * (1 + eps) < eps * x;
    case 3:
      return x > 0 && y > 0;
    default:
      throw precondition_error("region_contains: index must be 1, 2 or 3");
  }
}

std::array<mpq_class, 3> map_f(const Chart& chart, const mpq_class& x, const mpq_class& y) {
  if (!region_contains(chart.index, x, y, chart.eps))
    throw precondition_error("map_f: point outside the chart region");
  const mpq_class na = eval_at(chart.a, x, y);
  const mpq_class nb = eval_at(chart.b, x, y);
  const mpq_class nc = eval_at(chart.c, x, y);
  return {qmax(0, na), qmax(0, nb), nc};
}

std::array<mpq_class, 3> embed_j(const mpq_class& x, const mpq_class& y) {
  if (x <= 0) return {-x, qmax(x + y, 0), -y};
  return {mpq_class(0), x + qmax(y, 0), -y};
}

std::array<mpq_class, 2> invert_j(const std::array<mpq_class, 3>& v) {
  std::array<mpq_class, 2> p;
  if (v[0] > 0) {
    p = {-v[0], -v[2]};
  } else {
    p = {v[1] - qmax(-v[2], 0), -v[2]};
  }
  if (embed_j(p[0], p[1]) != v)
    throw precondition_error("invert_j: value outside the image of j");
  return p;
}

std::array<mpq_class, 2> chart_projection(int index, const mpq_class& x, const mpq_class& y) {
  switch (index) {
    case 1:
    case 3:
      return {x, y};
    case 2:
      if (y < 0) return {x, y};
      return {x - y, y};
    default:
      throw precondition_error("chart_projection: index must be 1, 2 or 3");
  }
}

std::array<mpq_class, 2> project_pi(const Chart& chart, const mpq_class& x, const mpq_class& y) {
  return invert_j(map_f(chart, x, y));
}

SweepReport compatibility_sweep(const Chart& chart, const K3Context& ctx, int grid_n) {
  (void)ctx;
  SweepReport report;
  const long n = grid_n;
  for (long ix = -2 * n; ix <= 2 * n; ++ix) {
    for (long iy = -2 * n; iy <= 2 * n; ++iy) {
      mpq_class x(ix, n), y(iy, n);
      x.canonicalize();
      y.canonicalize();
      if (!region_contains(chart.index, x, y, chart.eps)) continue;
      ++report.total;
      const auto pi = chart_projection(chart.index, x, y);
      if (pi[0] <= 0) ++report.branch_x_neg;
      if (pi[0] >= 0) ++report.branch_x_pos;
      if (chart.index == 2 && y >= 0) ++report.branch_pi2_high;
      const auto lhs = embed_j(pi[0], pi[1]);
      const auto rhs = map_f(chart, x, y);
      if (lhs != rhs) {
        std::ostringstream msg;
        msg << "chart " << chart.index << " at (" << x.get_str() << ", " << y.get_str()
            << "): j(pi) = (" << lhs[0].get_str() << "," << lhs[1].get_str() << ","
            << lhs[2].get_str() << ") vs f = (" << rhs[0].get_str() << "," << rhs[1].get_str()
            << "," << rhs[2].get_str() << ")";
        report.failures.push_back(msg.str());
      }
    }
  }
  return report;
}

GlueReport glue_automorphism_check(int overlap, long order, const K3Context& ctx) {
  if (overlap != 12 && overlap != 13)
    throw precondition_error("glue_automorphism_check: overlap must be 12 or 13");
  GlueReport report;
  const Scalar one = Scalar::one(ctx.q.precision());
  const TwistedElement eta = mono(ctx, 0, 1, one);
  const TwistedElement xi = mono(ctx, 1, 0, one);

  // phi(xi, eta) = (xi (1 + eta), eta) on U1 n U2; (xi (1 + 1/eta), eta) on U1 n U3.
  const TwistedElement correction =
      overlap == 12 ? eta : mono_inverse(ctx, 0, 1);
  const TwistedElement phi_xi = xi * (one_el(ctx) + correction);
  const TwistedElement phi_eta = eta;

  // Exact q-commutation preservation: phi(xi) phi(eta) = q^{Bt} phi(eta) phi(xi).
  const Exponent e1{1, 0}, e2{0, 1};
  const long w = ctx.twist.commutator(e1, e2);
  report.commutation_ok =
      (phi_xi * phi_eta) == (phi_eta * phi_xi).scaled(ctx.q.pow(w));

  // Invertibility of 1 + correction at sampled points of the overlap: the
  // geometric series certifies when the correction's stalk norm is negative.
  const std::vector<std::array<mpq_class, 2>> samples =
      overlap == 12 ? std::vector<std::array<mpq_class, 2>>{{mpq_class(1, 4), mpq_class(-1)},
                                                            {mpq_class(1, 2), mpq_class(-2)},
                                                            {mpq_class(1, 8), mpq_class(-3)}}
                    : std::vector<std::array<mpq_class, 2>>{{mpq_class(1, 4), mpq_class(1)},
                                                            {mpq_class(1, 2), mpq_class(2)},
                                                            {mpq_class(1, 8), mpq_class(3)}};
  for (const auto& [x, y] : samples) {
    ++report.invertibility_samples;
    const bool in_u1 = region_contains(1, x, y, mpq_class(1, 2));
    const bool in_other = region_contains(overlap == 12 ? 2 : 3, x, y, mpq_class(1, 2));
    if (!in_u1 || !in_other) {
      report.failures.push_back("sample point not in the overlap");
      continue;
    }
    const mpq_class corr_norm = eval_at(correction, x, y);
    if (!(corr_norm < 0)) {
      report.failures.push_back("correction is not small at the sample point");
      continue;
    }
    // Partial geometric series: the residual after `order` terms has stalk
    // norm (order + 1) * corr_norm, strictly below every partial sum term.
    TwistedElement series = one_el(ctx);
    TwistedElement pw = one_el(ctx);
    for (long k = 1; k <= order; ++k) {
      pw = pw * (-correction);
      series = series + pw;
    }
    const TwistedElement residual =
        (one_el(ctx) + correction) * series - one_el(ctx);
    const LogNorm rn = spectra::monomial_eval(residual, std::vector<mpq_class>{x, y});
    const mpq_class certified_bound = corr_norm * (order + 1);
    if (!(rn.is_bottom() || rn <= LogNorm(certified_bound)))
      report.failures.push_back("series residual exceeds the certified bound");
  }

  // Identification roundtrip on U2 n U3: (xi2, eta2) = (xi3 eta3, eta3).
  const TwistedElement xi3 = xi * eta;        // image of xi2
  const TwistedElement eta3 = eta;            // image of eta2
  const TwistedElement xi_back = xi3 * mono_inverse(ctx, 0, 1);
  report.roundtrip_ok = (xi_back == xi) && (eta3 == eta);
  return report;
}

}  // namespace qtate::k3
