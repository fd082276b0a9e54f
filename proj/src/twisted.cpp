#include "qtate/twisted.hpp"

#include <algorithm>
#include <sstream>

#include "qtate/kernels.hpp"

namespace qtate {

TwistForm::TwistForm(int d, std::vector<std::vector<long>> e) : dim(d), entries(std::move(e)) {
  if (static_cast<int>(entries.size()) != d)
    throw precondition_error("TwistForm: matrix has wrong row count");
  for (const auto& row : entries)
    if (static_cast<int>(row.size()) != d)
      throw precondition_error("TwistForm: matrix has wrong column count");
}

TwistForm TwistForm::skew(int d, long upper) {
  TwistForm b(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      b.entries[i][j] = upper;
      b.entries[j][i] = -upper;
    }
  return b;
}

TwistForm TwistForm::ordered(int d, long upper) {
  TwistForm b(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) b.entries[j][i] = -upper;
  return b;
}

long TwistForm::apply(std::span<const int> lambda, std::span<const int> mu) const {
  long acc = 0;
  for (int i = 0; i < dim; ++i) {
    if (lambda[i] == 0) continue;
    for (int j = 0; j < dim; ++j) {
      if (mu[j] == 0 || entries[i][j] == 0) continue;
      acc += entries[i][j] * lambda[i] * mu[j];
    }
  }
  return acc;
}

long TwistForm::commutator(std::span<const int> lambda, std::span<const int> mu) const {
  return apply(lambda, mu) - apply(mu, lambda);
}

std::vector<std::vector<long>> TwistForm::commutator_matrix() const {
  std::vector<std::vector<long>> m(dim, std::vector<long>(dim, 0));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m[i][j] = entries[i][j] - entries[j][i];
  return m;
}

TwistForm TwistForm::ordered_form() const {
  const auto bt = commutator_matrix();
  TwistForm b(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < i; ++j) b.entries[i][j] = bt[i][j];
  return b;
}

bool TwistForm::same_commutator(const TwistForm& o) const {
  return dim == o.dim && commutator_matrix() == o.commutator_matrix();
}

long degree_abs(std::span<const int> e) {
  long d = 0;
  for (int v : e) d += v < 0 ? -v : v;
  return d;
}

TwistedElement::TwistedElement(TwistForm twist, Scalar q, Domain domain,
                               std::optional<long> truncation)
    : twist_(std::move(twist)), q_(std::move(q)), domain_(domain), truncation_(truncation) {
  if (q_.lognorm() != LogNorm(0))
    throw precondition_error("TwistedElement: q must satisfy |q| = 1 (lognorm 0)");
}

TwistedElement TwistedElement::monomial(const TwistForm& twist, const Scalar& q, Domain domain,
                                        Exponent e, Scalar coeff, std::optional<long> truncation) {
  TwistedElement out(twist, q, domain, truncation);
  if (static_cast<int>(e.size()) != twist.dim)
    throw precondition_error("TwistedElement: exponent dimension mismatch");
  if (domain == Domain::polydisc)
    for (int v : e)
      if (v < 0) throw precondition_error("TwistedElement: negative exponent on a polydisc");
  if (!coeff.is_zero() && (!truncation || degree_abs(e) <= *truncation))
    out.terms_.emplace(std::move(e), std::move(coeff));
  return out;
}

TwistedElement TwistedElement::unit(const TwistForm& twist, const Scalar& q, Domain domain,
                                    std::optional<long> truncation) {
  return monomial(twist, q, domain, Exponent(static_cast<size_t>(twist.dim), 0),
                  Scalar::one(q.precision()), truncation);
}

Scalar TwistedElement::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Scalar::zero(q_.precision()) : it->second;
}

bool TwistedElement::compatible_with(const TwistedElement& o) const {
  return twist_ == o.twist_ && q_ == o.q_ && domain_ == o.domain_;
}

static std::optional<long> min_truncation(std::optional<long> a, std::optional<long> b) {
  if (!a) return b;
  if (!b) return a;
  return std::min(*a, *b);
}

TwistedElement TwistedElement::operator+(const TwistedElement& o) const {
  if (!compatible_with(o)) throw precondition_error("TwistedElement: twist/q/domain mismatch");
  TwistedElement out(twist_, q_, domain_, min_truncation(truncation_, o.truncation_));
  out.terms_ = terms_;
  for (const auto& [e, c] : o.terms_) {
    auto it = out.terms_.find(e);
    if (it == out.terms_.end()) {
      out.terms_.emplace(e, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) out.terms_.erase(it);
    }
  }
  return out.truncated_to(out.truncation_);
}

TwistedElement TwistedElement::operator-() const {
  TwistedElement out = *this;
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

TwistedElement TwistedElement::operator-(const TwistedElement& o) const { return *this + (-o); }

TwistedElement TwistedElement::scaled(const Scalar& c) const {
  TwistedElement out(twist_, q_, domain_, truncation_);
  if (c.is_zero()) return out;
  for (const auto& [e, v] : terms_) {
    Scalar w = v * c;
    if (!w.is_zero()) out.terms_.emplace(e, std::move(w));
  }
  return out;
}

TwistedElement TwistedElement::mul_serial(const TwistedElement& o) const {
  if (!compatible_with(o)) throw precondition_error("TwistedElement: twist/q/domain mismatch");
  TwistedElement out(twist_, q_, domain_, min_truncation(truncation_, o.truncation_));
  out.terms_ =
      kernels::multiply_serial(terms_, o.terms_, twist_, q_, kernels::MulOptions{.degree_bound = out.truncation_, .min_exp_sum = {}});
  return out;
}

TwistedElement TwistedElement::mul_parallel(const TwistedElement& o) const {
  if (!compatible_with(o)) throw precondition_error("TwistedElement: twist/q/domain mismatch");
  TwistedElement out(twist_, q_, domain_, min_truncation(truncation_, o.truncation_));
  out.terms_ =
      kernels::multiply_parallel(terms_, o.terms_, twist_, q_, kernels::MulOptions{.degree_bound = out.truncation_, .min_exp_sum = {}});
  return out;
}

TwistedElement TwistedElement::operator*(const TwistedElement& o) const {
  if (terms_.size() * o.terms_.size() >= kernels::parallel_threshold) return mul_parallel(o);
  return mul_serial(o);
}

TwistedElement TwistedElement::rebase(const TwistForm& new_twist) const {
  if (!twist_.same_commutator(new_twist))
    throw precondition_error("rebase: commutation forms differ");
  TwistedElement out(new_twist, q_, domain_, truncation_);
  for (const auto& [e, c] : terms_) {
    // c(lambda) solving c(l+m)-c(l)-c(m) = S(l,m) for the symmetric S = B' - B.
    long corr = 0;
    for (int i = 0; i < twist_.dim; ++i) {
      const long sii = new_twist.entries[i][i] - twist_.entries[i][i];
      corr += sii * (static_cast<long>(e[i]) * (e[i] - 1)) / 2;
      for (int j = i + 1; j < twist_.dim; ++j) {
        const long sij = new_twist.entries[i][j] - twist_.entries[i][j];
        corr += sij * static_cast<long>(e[i]) * e[j];
      }
    }
    out.terms_.emplace(e, c * q_.pow(corr));
  }
  return out;
}

LogNorm TwistedElement::gauss_norm(std::span<const mpq_class> rho) const {
  if (static_cast<int>(rho.size()) != twist_.dim)
    throw precondition_error("gauss_norm: log-radius dimension mismatch");
  return kernels::max_norm_serial(terms_, rho);
}

TwistedElement TwistedElement::truncated_to(std::optional<long> bound) const {
  if (!bound) return *this;
  TwistedElement out(twist_, q_, domain_, truncation_);
  for (const auto& [e, c] : terms_)
    if (degree_abs(e) <= *bound) out.terms_.emplace(e, c);
  return out;
}

TwistedElement TwistedElement::with_truncation(std::optional<long> bound) const {
  TwistedElement out = truncated_to(bound);
  out.truncation_ = bound;
  return out;
}

bool TwistedElement::operator==(const TwistedElement& o) const {
  return twist_ == o.twist_ && q_ == o.q_ && domain_ == o.domain_ && terms_ == o.terms_;
}

std::string TwistedElement::str(std::span<const std::string> names) const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    const std::string cs = c.str();
    if (cs.find_first_of("+- ") != std::string::npos)
      out << "(" << cs << ")";
    else
      out << cs;
    out << "*m(";
    for (size_t i = 0; i < e.size(); ++i) out << (i ? "," : "") << e[i];
    out << ")";
    (void)names;
  }
  return out.str();
}

TwistedBuilder::TwistedBuilder(TwistedElement prototype) : out_(std::move(prototype)) {
  out_.terms_.clear();
}

void TwistedBuilder::add(Exponent e, const Scalar& c) {
  if (c.is_zero()) return;
  if (out_.truncation_ && degree_abs(e) > *out_.truncation_) return;
  auto it = out_.terms_.find(e);
  if (it == out_.terms_.end()) {
    out_.terms_.emplace(std::move(e), c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) out_.terms_.erase(it);
  }
}

void TwistedBuilder::add(const TwistedElement& e) {
  for (const auto& [exp, c] : e.terms()) add(exp, c);
}

void TwistedBuilder::add_scaled(const TwistedElement& e, const Scalar& c) {
  for (const auto& [exp, cv] : e.terms()) add(exp, cv * c);
}

TwistedElement TwistedBuilder::build() && { return std::move(out_); }

FreeElement FreeElement::word(int alphabet, Word w, Scalar coeff) {
  FreeElement out(alphabet);
  for (uint8_t letter : w)
    if (static_cast<int>(letter) >= alphabet)
      throw precondition_error("FreeElement: letter outside alphabet");
  if (!coeff.is_zero()) out.terms_.emplace(std::move(w), std::move(coeff));
  return out;
}

FreeElement FreeElement::operator+(const FreeElement& o) const {
  if (alphabet_ != o.alphabet_) throw precondition_error("FreeElement: alphabet mismatch");
  FreeElement out = *this;
  for (const auto& [w, c] : o.terms_) {
    auto it = out.terms_.find(w);
    if (it == out.terms_.end()) {
      out.terms_.emplace(w, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) out.terms_.erase(it);
    }
  }
  return out;
}

FreeElement FreeElement::operator-(const FreeElement& o) const {
  FreeElement neg = o;
  for (auto& [w, c] : neg.terms_) c = -c;
  return *this + neg;
}

FreeElement FreeElement::operator*(const FreeElement& o) const {
  if (alphabet_ != o.alphabet_) throw precondition_error("FreeElement: alphabet mismatch");
  FreeElement out(alphabet_);
  for (const auto& [wa, ca] : terms_) {
    for (const auto& [wb, cb] : o.terms_) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      Scalar c = ca * cb;
      auto it = out.terms_.find(w);
      if (it == out.terms_.end()) {
        out.terms_.emplace(std::move(w), std::move(c));
      } else {
        it->second = it->second + c;
        if (it->second.is_zero()) out.terms_.erase(it);
      }
    }
  }
  return out;
}

LogNorm FreeElement::gauss_norm(std::span<const mpq_class> log_radii) const {
  if (static_cast<int>(log_radii.size()) != alphabet_)
    throw precondition_error("FreeElement: radius dimension mismatch");
  LogNorm best = LogNorm::bottom();
  for (const auto& [w, c] : terms_) {
    mpq_class dot(0);
    for (uint8_t letter : w) dot += log_radii[letter];
    best = max(best, c.lognorm() + LogNorm(dot));
  }
  return best;
}

}  // namespace qtate
