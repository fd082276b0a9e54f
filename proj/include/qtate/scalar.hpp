#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qtate {

/// Thrown when an operation's stated precondition fails (CLI maps this to exit 3).
class precondition_error : public std::invalid_argument {
 public:
  explicit precondition_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Default t-adic precision; QTATE_PRECISION overrides it for the process.
int default_precision();

/// log|x| as an exact rational, with a bottom element representing |0| = 0.
/// Bottom is absorbing under addition and minimal under comparison.
class LogNorm {
 public:
  LogNorm() : bottom_(true) {}
  LogNorm(mpq_class v) : bottom_(false), v_(std::move(v)) { v_.canonicalize(); }
  LogNorm(long v) : bottom_(false), v_(v) {}

  static LogNorm bottom() { return LogNorm(); }

  bool is_bottom() const { return bottom_; }
  const mpq_class& value() const;

  LogNorm operator+(const LogNorm& o) const;
  LogNorm operator-() const;

  bool operator==(const LogNorm& o) const;
  bool operator!=(const LogNorm& o) const { return !(*this == o); }
  bool operator<(const LogNorm& o) const;
  bool operator<=(const LogNorm& o) const { return *this < o || *this == o; }
  bool operator>(const LogNorm& o) const { return o < *this; }
  bool operator>=(const LogNorm& o) const { return o <= *this; }

  /// "-inf" for bottom, canonical "p/q" otherwise.
  std::string str() const;

 private:
  bool bottom_;
  mpq_class v_;
};

LogNorm max(const LogNorm& a, const LogNorm& b);

/// Element of K = Q((t)) truncated at t-adic precision N: a finite set of
/// (exponent, rational) terms, all exponents < N, arithmetic modulo t^N.
/// Values are immutable; every operation returns a fresh Scalar.
class Scalar {
 public:
  using Term = std::pair<long, mpq_class>;

  Scalar() : precision_(default_precision()) {}
  explicit Scalar(const mpq_class& c, int precision = default_precision());
  Scalar(long c, int precision = default_precision()) : Scalar(mpq_class(c), precision) {}

  /// t^k (zero if k >= precision).
  static Scalar t_power(long k, int precision = default_precision());
  /// Builds from (exponent, coefficient) pairs; drops zeros and exponents >= precision.
  static Scalar from_terms(std::vector<Term> terms, int precision = default_precision());
  static Scalar zero(int precision = default_precision()) { return Scalar(0, precision); }
  static Scalar one(int precision = default_precision()) { return Scalar(1, precision); }

  int precision() const { return precision_; }
  const std::vector<Term>& terms() const { return terms_; }

  /// True iff the value is zero modulo t^N.
  bool is_zero() const { return terms_.empty(); }
  /// Least exponent with nonzero coefficient; nullopt for zero mod t^N
  /// (reported as +infinity at the API boundary).
  std::optional<long> val() const;
  /// -val; bottom for zero.
  LogNorm lognorm() const;

  mpq_class coeff(long exp) const;

  Scalar operator+(const Scalar& o) const;
  Scalar operator-(const Scalar& o) const;
  Scalar operator-() const;
  Scalar operator*(const Scalar& o) const;

  /// Multiplicative inverse via the geometric series. Requires nonzero mod t^N.
  /// Result precision is N - 2*val(a): inverting shifts the window of known
  /// coefficients, so callers see the documented pessimistic loss.
  Scalar inv() const;

  /// Integer power; negative exponents go through inv().
  Scalar pow(long k) const;

  /// Same value re-truncated to a (usually lower) precision.
  Scalar truncated(int new_precision) const;

  /// The coefficient of t^0 after checking no negative exponents survive;
  /// used for q = 1 specialization (t = 0).
  mpq_class at_t_zero() const;

  /// Value equality on the shared window: both sides truncated to the common
  /// precision and compared term by term.
  bool operator==(const Scalar& o) const;
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  /// Human-readable rendering, e.g. "1 - t^2" or "0".
  std::string str() const;

 private:
  void normalize();

  std::vector<Term> terms_;  // ascending exponent, nonzero coefficients
  int precision_;
};

inline Scalar operator*(const mpq_class& c, const Scalar& s) { return Scalar(c, s.precision()) * s; }

}  // namespace qtate
