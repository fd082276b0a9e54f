#include "qtate/spectra.hpp"

#include <functional>
#include <sstream>

#include "qtate/kernels.hpp"

namespace qtate::spectra {

namespace {

mpq_class binomial(long n, long k) {
  // C(n, k) for any integer n, k >= 0 (generalized when n < 0).
  mpz_class num(1), den(1);
  for (long j = 0; j < k; ++j) {
    num *= mpz_class(n - j);
    den *= mpz_class(j + 1);
  }
  mpq_class r(num, den);
  r.canonicalize();
  return r;
}

void require_dim(const TwistedElement& f, size_t d, const char* who) {
  if (static_cast<size_t>(f.dim()) != d)
    throw precondition_error(std::string(who) + ": dimension mismatch");
}

mpq_class dot(std::span<const int> e, std::span<const mpq_class> x) {
  mpq_class s(0);
  for (size_t i = 0; i < x.size(); ++i) s += e[i] * x[i];
  return s;
}

// Per-slot expansion of (t_i + a_i)^{lambda_i} in powers of t_i:
// pairs (n_i, coefficient) with coefficient = C(lambda_i, m) a_i^m, m = lambda_i - n_i.
// Negative lambda_i runs the geometric series truncated at m <= tail.
std::vector<std::pair<int, Scalar>> slot_expansion(int lambda, const Scalar& a, long tail) {
  std::vector<std::pair<int, Scalar>> out;
  if (a.is_zero()) {
    out.emplace_back(lambda, Scalar::one(a.precision()));
    return out;
  }
  const long mmax = lambda >= 0 ? lambda : tail;
  for (long m = 0; m <= mmax; ++m) {
    Scalar c = Scalar(binomial(lambda, m), a.precision()) * a.pow(m);
    if (!c.is_zero()) out.emplace_back(static_cast<int>(lambda - m), std::move(c));
  }
  return out;
}

using BTerms = std::map<Exponent, Scalar>;

void accumulate(BTerms& acc, const Exponent& e, const Scalar& c) {
  auto it = acc.find(e);
  if (it == acc.end()) {
    acc.emplace(e, c);
  } else {
    it->second = it->second + c;
  }
}

// Expands every ordered monomial of f through the per-slot lists and collects
// the ordered shifted-variable coefficients b_n. Requires f in the ordered basis.
BTerms collect_shifted_coefficients(const TwistedElement& f, std::span<const Scalar> a,
                                    long tail) {
  BTerms b;
  const size_t d = a.size();
  for (const auto& [lambda, c] : f.terms()) {
    std::vector<std::vector<std::pair<int, Scalar>>> slots;
    slots.reserve(d);
    for (size_t i = 0; i < d; ++i) slots.push_back(slot_expansion(lambda[i], a[i], tail));
    Exponent n(d, 0);
    std::function<void(size_t, const Scalar&)> rec = [&](size_t lvl, const Scalar& acc) {
      if (acc.is_zero()) return;
      if (lvl == d) {
        accumulate(b, n, acc);
        return;
      }
      for (const auto& [ni, ci] : slots[lvl]) {
        n[lvl] = ni;
        rec(lvl + 1, acc * ci);
      }
    };
    rec(0, c);
  }
  return b;
}

LogNorm max_over(const BTerms& b, std::span<const mpq_class> rho) {
  LogNorm best = LogNorm::bottom();
  for (const auto& [n, c] : b) best = max(best, c.lognorm() + LogNorm(dot(n, rho)));
  return best;
}

}  // namespace

SpectrumPoint SpectrumPoint::monomial(std::vector<mpq_class> x) {
  SpectrumPoint p;
  p.kind_ = Kind::monomial;
  for (auto& v : x) v.canonicalize();
  p.x_ = std::move(x);
  return p;
}

static void validate_shifted(const std::vector<Scalar>& a, const std::vector<mpq_class>& rho,
                             const std::optional<std::vector<mpq_class>>& ambient, bool strict) {
  if (a.size() != rho.size())
    throw precondition_error("SpectrumPoint: center/radius dimension mismatch");
  for (size_t i = 0; i < a.size(); ++i) {
    const LogNorm na = a[i].lognorm();
    const LogNorm bound{rho[i]};
    if (strict ? !(na < bound) : !(na <= bound))
      throw precondition_error(strict ? "SpectrumPoint: requires lognorm(a_i) < rho_i strictly"
                                      : "SpectrumPoint: requires lognorm(a_i) <= rho_i");
  }
  if (ambient) {
    if (ambient->size() != rho.size())
      throw precondition_error("SpectrumPoint: ambient radius dimension mismatch");
    for (size_t i = 0; i < rho.size(); ++i)
      if (!(rho[i] < (*ambient)[i]))
        throw precondition_error("SpectrumPoint: requires rho_i < ambient radius r_i");
  }
}

SpectrumPoint SpectrumPoint::shifted_polydisc(std::vector<Scalar> a, std::vector<mpq_class> rho,
                                              std::optional<std::vector<mpq_class>> ambient) {
  for (auto& v : rho) v.canonicalize();
  validate_shifted(a, rho, ambient, /*strict=*/false);
  SpectrumPoint p;
  p.kind_ = Kind::shifted_polydisc;
  p.a_ = std::move(a);
  p.rho_ = std::move(rho);
  p.ambient_ = std::move(ambient);
  return p;
}

SpectrumPoint SpectrumPoint::shifted_torus(std::vector<Scalar> a, std::vector<mpq_class> rho,
                                           long tail_order,
                                           std::optional<std::vector<mpq_class>> ambient) {
  if (tail_order < 1) throw precondition_error("SpectrumPoint: tail order must be >= 1");
  for (auto& v : rho) v.canonicalize();
  validate_shifted(a, rho, ambient, /*strict=*/true);
  SpectrumPoint p;
  p.kind_ = Kind::shifted_torus;
  p.a_ = std::move(a);
  p.rho_ = std::move(rho);
  p.ambient_ = std::move(ambient);
  p.tail_order_ = tail_order;
  return p;
}

int SpectrumPoint::dim() const {
  return static_cast<int>(kind_ == Kind::monomial ? x_.size() : rho_.size());
}

SpectrumPoint SpectrumPoint::with_tail_order(long m) const {
  if (kind_ != Kind::shifted_torus)
    throw precondition_error("SpectrumPoint: tail order applies to shifted torus points");
  return shifted_torus(a_, rho_, m, ambient_);
}

LogNorm monomial_eval(const TwistedElement& f, std::span<const mpq_class> x) {
  require_dim(f, x.size(), "monomial_eval");
  return kernels::max_norm_serial(f.terms(), x);
}

LogNorm shifted_eval_polydisc(const TwistedElement& f, const SpectrumPoint& p) {
  if (p.kind() != SpectrumPoint::Kind::shifted_polydisc)
    throw precondition_error("shifted_eval_polydisc: wrong point kind");
  require_dim(f, p.rho().size(), "shifted_eval_polydisc");
  if (f.domain() != Domain::polydisc)
    throw precondition_error("shifted_eval_polydisc: element must be a polydisc polynomial");
  const Scalar one_minus_q = Scalar::one(f.q().precision()) - f.q();
  if (!(one_minus_q.lognorm() < LogNorm(0)))
    throw precondition_error("shifted_eval_polydisc: requires |1 - q| < 1");
  const TwistedElement g = f.rebase(f.twist().ordered_form());
  const BTerms b = collect_shifted_coefficients(g, p.center(), 0);
  return max_over(b, p.rho());
}

TorusEval shifted_eval_torus(const TwistedElement& f, const SpectrumPoint& p) {
  if (p.kind() != SpectrumPoint::Kind::shifted_torus)
    throw precondition_error("shifted_eval_torus: wrong point kind");
  require_dim(f, p.rho().size(), "shifted_eval_torus");
  const Scalar one_minus_q = Scalar::one(f.q().precision()) - f.q();
  if (!(one_minus_q.lognorm() < LogNorm(0)))
    throw precondition_error("shifted_eval_torus: requires |1 - q| < 1");
  const TwistedElement g = f.rebase(f.twist().ordered_form());
  const BTerms b = collect_shifted_coefficients(g, p.center(), p.tail_order());
  TorusEval out;
  out.value = max_over(b, p.rho());

  // Upper envelope of f's own terms; every discarded tail term sits at least
  // (M+1)*delta below it, delta = min over active slots of rho_i - lognorm(a_i).
  LogNorm envelope = LogNorm::bottom();
  for (const auto& [lambda, c] : g.terms())
    envelope = max(envelope, c.lognorm() + LogNorm(dot(lambda, p.rho())));

  bool truncates = false;
  for (const auto& [lambda, c] : g.terms())
    for (size_t i = 0; i < p.center().size(); ++i)
      if (lambda[i] < 0 && !p.center()[i].is_zero()) truncates = true;

  if (!truncates || envelope.is_bottom()) {
    out.tail_bound = LogNorm::bottom();
    out.certified = true;
    return out;
  }

  bool have_delta = false;
  mpq_class delta(0);
  for (size_t i = 0; i < p.center().size(); ++i) {
    if (p.center()[i].is_zero()) continue;
    const mpq_class di = p.rho()[i] - p.center()[i].lognorm().value();
    if (!have_delta || di < delta) delta = di;
    have_delta = true;
  }
  if (!(delta > 0))
    throw precondition_error("shifted_eval_torus: tail decay delta must be positive");
  mpq_class drop = delta * (p.tail_order() + 1);
  out.tail_bound = LogNorm(envelope.value() - drop);
  out.certified = out.tail_bound < out.value;
  return out;
}

LogNorm point_eval(const TwistedElement& f, const SpectrumPoint& p) {
  switch (p.kind()) {
    case SpectrumPoint::Kind::monomial:
      return monomial_eval(f, p.x());
    case SpectrumPoint::Kind::shifted_polydisc:
      return shifted_eval_polydisc(f, p);
    case SpectrumPoint::Kind::shifted_torus: {
      const TorusEval e = shifted_eval_torus(f, p);
      if (!e.certified)
        throw precondition_error("point_eval: tail order too small to certify the torus value");
      return e.value;
    }
  }
  throw precondition_error("point_eval: unknown kind");
}

CheckReport check_point_multiplicative(
    const SpectrumPoint& p, std::span<const std::pair<TwistedElement, TwistedElement>> pairs) {
  CheckReport report;
  for (const auto& [f, g] : pairs) {
    ++report.total;
    try {
      const LogNorm nf = point_eval(f, p);
      const LogNorm ng = point_eval(g, p);
      const LogNorm nfg = point_eval(f * g, p);
      if (nfg != nf + ng) {
        std::ostringstream msg;
        msg << "pair " << report.total << ": nu(fg) = " << nfg.str()
            << " but nu(f)+nu(g) = " << (nf + ng).str();
        report.failures.push_back(msg.str());
      }
    } catch (const precondition_error& e) {
      report.failures.push_back("pair evaluation failed: " + std::string(e.what()));
    }
  }
  return report;
}

BoundedReport check_submultiplicative_bounded(
    const std::function<LogNorm(const TwistedElement&)>& candidate,
    const TwistedElement& one, std::span<const TwistedElement> samples,
    std::span<const std::pair<TwistedElement, TwistedElement>> pairs,
    const std::function<LogNorm(const TwistedElement&)>& ambient) {
  BoundedReport out;
  auto& report = out.checks;

  ++report.total;
  if (candidate(one) != LogNorm(0)) report.failures.push_back("|1| = 1 fails");

  for (const auto& [f, g] : pairs) {
    ++report.total;
    if (!(candidate(f * g) <= candidate(f) + candidate(g)))
      report.failures.push_back("submultiplicativity fails on a sample pair");
  }

  bool have_c = false;
  mpq_class log_c(0);
  for (const auto& f : samples) {
    ++report.total;
    const LogNorm cn = candidate(f);
    const LogNorm an = ambient(f);
    if (cn.is_bottom()) continue;
    if (an.is_bottom()) {
      report.failures.push_back(
          "boundedness fails: ambient norm vanishes where candidate does not");
      continue;
    }
    const mpq_class gap = cn.value() - an.value();
    if (!have_c || gap > log_c) log_c = gap;
    have_c = true;
  }
  out.log_c = have_c ? std::optional<mpq_class>(log_c) : std::optional<mpq_class>(mpq_class(0));
  return out;
}

std::vector<mpq_class> skeleton_retract(const SpectrumPoint& p, int dim) {
  if (p.dim() != dim) throw precondition_error("skeleton_retract: dimension mismatch");
  if (p.kind() == SpectrumPoint::Kind::monomial) return p.x();
  // Each generator T_i evaluates to max(lognorm(a_i), rho_i) = rho_i.
  return p.rho();
}

SpectrumPoint skeleton_embed(std::vector<mpq_class> x) {
  return SpectrumPoint::monomial(std::move(x));
}

}  // namespace qtate::spectra
