#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qtate/scalar.hpp"

namespace qtate {

using Exponent = std::vector<int>;

/// Integer bilinear form B on Z^d governing monomial products,
/// m(lambda) * m(mu) = q^{B(lambda,mu)} m(lambda+mu).
/// The induced commutation form is Bt(lambda,mu) = B(lambda,mu) - B(mu,lambda);
/// two forms with the same Bt present the same algebra in different bases.
struct TwistForm {
  int dim = 0;
  std::vector<std::vector<long>> entries;  // dim x dim

  TwistForm() = default;
  explicit TwistForm(int d) : dim(d), entries(d, std::vector<long>(d, 0)) {}
  TwistForm(int d, std::vector<std::vector<long>> e);

  /// Skew form with B_ij = s_ij for i < j, B_ji = -s_ij (simply-laced when all 1).
  static TwistForm skew(int d, long upper = 1);
  /// Ordered-monomial form for pairwise relations T_i T_j = q^{c_ij} T_j T_i (i < j):
  /// strictly lower triangular with B_ji = -c_ij.
  static TwistForm ordered(int d, long upper = 1);

  long apply(std::span<const int> lambda, std::span<const int> mu) const;
  /// Commutation exponent Bt(lambda, mu).
  long commutator(std::span<const int> lambda, std::span<const int> mu) const;
  std::vector<std::vector<long>> commutator_matrix() const;
  /// The strictly-lower-triangular form with the same commutation data;
  /// its basis monomials are the ordered monomials T_1^{l1}...T_d^{ld}.
  TwistForm ordered_form() const;
  bool same_commutator(const TwistForm& o) const;

  bool operator==(const TwistForm& o) const { return dim == o.dim && entries == o.entries; }
};

enum class Domain { polydisc, torus };

long degree_abs(std::span<const int> e);

/// Finitely supported K-combination of twisted monomials m(lambda), lambda in Z^d,
/// with the product extended bilinearly from the twist rule. Immutable value type.
class TwistedElement {
 public:
  using Terms = std::map<Exponent, Scalar>;

  TwistedElement(TwistForm twist, Scalar q, Domain domain,
                 std::optional<long> truncation = std::nullopt);

  static TwistedElement monomial(const TwistForm& twist, const Scalar& q, Domain domain,
                                 Exponent e, Scalar coeff,
                                 std::optional<long> truncation = std::nullopt);
  static TwistedElement unit(const TwistForm& twist, const Scalar& q, Domain domain,
                             std::optional<long> truncation = std::nullopt);

  const TwistForm& twist() const { return twist_; }
  const Scalar& q() const { return q_; }
  Domain domain() const { return domain_; }
  std::optional<long> truncation() const { return truncation_; }
  const Terms& terms() const { return terms_; }
  int dim() const { return twist_.dim; }
  bool is_zero() const { return terms_.empty(); }
  size_t support_size() const { return terms_.size(); }

  Scalar coeff(const Exponent& e) const;

  TwistedElement operator+(const TwistedElement& o) const;
  TwistedElement operator-(const TwistedElement& o) const;
  TwistedElement operator-() const;
  TwistedElement operator*(const TwistedElement& o) const;
  TwistedElement scaled(const Scalar& c) const;

  /// Serial reference product kept alongside the OpenMP kernel; both must
  /// agree exactly (exact arithmetic), which the kernel tests assert.
  TwistedElement mul_serial(const TwistedElement& o) const;
  TwistedElement mul_parallel(const TwistedElement& o) const;

  /// q^{B'(lambda,lambda)-corrected} change of twist basis; requires that B and B'
  /// induce the same commutation form. Algebra isomorphism preserving Gauss norms.
  TwistedElement rebase(const TwistForm& new_twist) const;

  /// max over support of lognorm(coeff) + <lambda, rho> with rho the log-radii.
  LogNorm gauss_norm(std::span<const mpq_class> rho) const;

  /// Drops terms of |lambda|_1-degree above the bound.
  TwistedElement truncated_to(std::optional<long> bound) const;
  TwistedElement with_truncation(std::optional<long> bound) const;

  bool operator==(const TwistedElement& o) const;
  bool operator!=(const TwistedElement& o) const { return !(*this == o); }

  /// True when twist, q and domain all agree (the mul precondition).
  bool compatible_with(const TwistedElement& o) const;

  std::string str(std::span<const std::string> names = {}) const;

 private:
  friend class TwistedBuilder;
  TwistForm twist_;
  Scalar q_;
  Domain domain_;
  std::optional<long> truncation_;
  Terms terms_;
};

/// Accumulator used by element-producing algorithms; sums coefficients per
/// exponent and validates domain/truncation once at the end.
class TwistedBuilder {
 public:
  explicit TwistedBuilder(TwistedElement prototype);
  void add(Exponent e, const Scalar& c);
  void add(const TwistedElement& e);
  void add_scaled(const TwistedElement& e, const Scalar& c);
  TwistedElement build() &&;

 private:
  TwistedElement out_;
};

/// Element of the free (path) algebra on letters {0,...,n-1}: finitely supported
/// map from words to K, concatenation-convolution product.
class FreeElement {
 public:
  using Word = std::vector<uint8_t>;
  using Terms = std::map<Word, Scalar>;

  explicit FreeElement(int alphabet) : alphabet_(alphabet) {}
  static FreeElement word(int alphabet, Word w, Scalar coeff);
  static FreeElement unit(int alphabet) { return word(alphabet, {}, Scalar(1)); }

  int alphabet() const { return alphabet_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  FreeElement operator+(const FreeElement& o) const;
  FreeElement operator-(const FreeElement& o) const;
  FreeElement operator*(const FreeElement& o) const;

  LogNorm gauss_norm(std::span<const mpq_class> log_radii) const;

 private:
  int alphabet_;
  Terms terms_;
};

}  // namespace qtate
