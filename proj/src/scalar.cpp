#include "qtate/scalar.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

namespace qtate {

int default_precision() {
  static const int n = [] {
    if (const char* env = std::getenv("QTATE_PRECISION")) {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1 && v <= 4096) return static_cast<int>(v);
    }
    return 16;
  }();
  return n;
}

const mpq_class& LogNorm::value() const {
  if (bottom_) throw precondition_error("LogNorm: value() on bottom");
  return v_;
}

LogNorm LogNorm::operator+(const LogNorm& o) const {
  if (bottom_ || o.bottom_) return bottom();
  return LogNorm(v_ + o.v_);
}

LogNorm LogNorm::operator-() const {
  if (bottom_) throw precondition_error("LogNorm: negation of bottom");
  return LogNorm(-v_);
}

bool LogNorm::operator==(const LogNorm& o) const {
  if (bottom_ != o.bottom_) return false;
  return bottom_ || v_ == o.v_;
}

bool LogNorm::operator<(const LogNorm& o) const {
  if (bottom_) return !o.bottom_;
  if (o.bottom_) return false;
  return v_ < o.v_;
}

std::string LogNorm::str() const {
  if (bottom_) return "-inf";
  return v_.get_str();
}

LogNorm max(const LogNorm& a, const LogNorm& b) { return a < b ? b : a; }

Scalar::Scalar(const mpq_class& c, int precision) : precision_(precision) {
  mpq_class v = c;
  v.canonicalize();
  if (v != 0) terms_.emplace_back(0, std::move(v));
  normalize();
}

Scalar Scalar::t_power(long k, int precision) {
  Scalar s(0, precision);
  if (k < precision) s.terms_.emplace_back(k, mpq_class(1));
  return s;
}

Scalar Scalar::from_terms(std::vector<Term> terms, int precision) {
  Scalar s(0, precision);
  for (auto& [e, c] : terms) c.canonicalize();
  s.terms_ = std::move(terms);
  std::sort(s.terms_.begin(), s.terms_.end(),
            [](const Term& a, const Term& b) { return a.first < b.first; });
  for (size_t i = 1; i < s.terms_.size(); ++i) {
    if (s.terms_[i].first == s.terms_[i - 1].first)
      throw precondition_error("Scalar: duplicate exponent in term list");
  }
  s.normalize();
  return s;
}

void Scalar::normalize() {
  std::vector<Term> kept;
  kept.reserve(terms_.size());
  for (auto& [e, c] : terms_) {
    if (e < precision_ && c != 0) kept.emplace_back(e, std::move(c));
  }
  terms_ = std::move(kept);
}

std::optional<long> Scalar::val() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.front().first;
}

LogNorm Scalar::lognorm() const {
  auto v = val();
  if (!v) return LogNorm::bottom();
  return LogNorm(mpq_class(-*v));
}

mpq_class Scalar::coeff(long exp) const {
  for (const auto& [e, c] : terms_)
    if (e == exp) return c;
  return mpq_class(0);
}

Scalar Scalar::operator+(const Scalar& o) const {
  Scalar r(0, std::min(precision_, o.precision_));
  r.terms_.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j >= o.terms_.size() || (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
      r.terms_.push_back(terms_[i++]);
    } else if (i >= terms_.size() || o.terms_[j].first < terms_[i].first) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      mpq_class c = terms_[i].second + o.terms_[j].second;
      if (c != 0) r.terms_.emplace_back(terms_[i].first, std::move(c));
      ++i, ++j;
    }
  }
  r.normalize();
  return r;
}

Scalar Scalar::operator-() const {
  Scalar r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

Scalar Scalar::operator-(const Scalar& o) const { return *this + (-o); }

Scalar Scalar::operator*(const Scalar& o) const {
  // a = A + O(t^Na), b = B + O(t^Nb): the product is known modulo
  // t^{min(Na + val b, Nb + val a)}. Coincides with min(Na, Nb) for
  // valuation-zero operands and keeps the window route-independent.
  const long va = terms_.empty() ? precision_ : terms_.front().first;
  const long vb = o.terms_.empty() ? o.precision_ : o.terms_.front().first;
  const long np = std::min<long>(precision_ + vb, o.precision_ + va);
  Scalar r(0, static_cast<int>(np));
  if (terms_.empty() || o.terms_.empty()) return r;
  std::map<long, mpq_class> acc;
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      const long e = ea + eb;
      if (e >= r.precision_) continue;
      acc[e] += ca * cb;
    }
  }
  for (auto& [e, c] : acc)
    if (c != 0) r.terms_.emplace_back(e, std::move(c));
  return r;
}

Scalar Scalar::inv() const {
  auto v = val();
  if (!v) throw precondition_error("Scalar: inverse of zero (zero modulo t^N)");
  const long shift = *v;
  const int out_precision = static_cast<int>(precision_ - 2 * shift);
  // a = c0 t^shift (1 + w), val(w) >= 1; invert the unit by the geometric series.
  const mpq_class c0 = terms_.front().second;
  const int unit_precision = static_cast<int>(precision_ - shift);
  Scalar w(0, unit_precision);
  for (size_t i = 1; i < terms_.size(); ++i)
    w.terms_.emplace_back(terms_[i].first - shift, terms_[i].second / c0);
  w.normalize();

  Scalar acc = Scalar::one(unit_precision);
  Scalar pw = Scalar::one(unit_precision);
  for (int k = 1; k < unit_precision && !pw.is_zero(); ++k) {
    pw = pw * w;
    acc = acc + (k % 2 ? -pw : pw);
  }
  Scalar r(0, out_precision);
  for (const auto& [e, c] : acc.terms_) r.terms_.emplace_back(e - shift, c / c0);
  r.normalize();
  return r;
}

Scalar Scalar::pow(long k) const {
  if (k < 0) return inv().pow(-k);
  Scalar r = Scalar::one(precision_);
  Scalar base = *this;
  long e = k;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

Scalar Scalar::truncated(int new_precision) const {
  Scalar r = *this;
  r.precision_ = new_precision;
  r.normalize();
  return r;
}

mpq_class Scalar::at_t_zero() const {
  if (auto v = val(); v && *v < 0)
    throw precondition_error("Scalar: t = 0 specialization of a value with a pole");
  return coeff(0);
}

bool Scalar::operator==(const Scalar& o) const {
  const int common = std::min(precision_, o.precision_);
  if (precision_ == o.precision_) return terms_ == o.terms_;
  return truncated(common).terms_ == o.truncated(common).terms_;
}

std::string Scalar::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    mpq_class a = c;
    if (first) {
      if (a < 0) {
        out << "-";
        a = -a;
      }
    } else {
      out << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    const bool unit_coeff = (a == 1 && e != 0);
    if (!unit_coeff) out << a.get_str();
    if (e != 0) {
      if (!unit_coeff) out << "*";
      out << "t";
      if (e != 1) out << "^" << e;
    }
  }
  return out.str();
}

}  // namespace qtate
