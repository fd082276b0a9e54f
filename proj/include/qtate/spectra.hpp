#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qtate/twisted.hpp"

namespace qtate::spectra {

/// Descriptor of a candidate Berkovich-spectrum point.
///
/// Monomial points carry weights x in Q^d and evaluate elements by
/// max(lognorm(coeff) + <lambda, x>). Shifted points carry a center a in K^d
/// and log-radii rho; polydisc points require lognorm(a_i) <= rho_i, torus
/// points require strict inequality so the geometric tail decays and a finite
/// truncation order certifies the value.
class SpectrumPoint {
 public:
  enum class Kind { monomial, shifted_polydisc, shifted_torus };

  static SpectrumPoint monomial(std::vector<mpq_class> x);
  static SpectrumPoint shifted_polydisc(std::vector<Scalar> a, std::vector<mpq_class> rho,
                                        std::optional<std::vector<mpq_class>> ambient = {});
  static SpectrumPoint shifted_torus(std::vector<Scalar> a, std::vector<mpq_class> rho,
                                     long tail_order,
                                     std::optional<std::vector<mpq_class>> ambient = {});

  Kind kind() const { return kind_; }
  int dim() const;
  const std::vector<mpq_class>& x() const { return x_; }
  const std::vector<Scalar>& center() const { return a_; }
  const std::vector<mpq_class>& rho() const { return rho_; }
  const std::optional<std::vector<mpq_class>>& ambient() const { return ambient_; }
  long tail_order() const { return tail_order_; }

  SpectrumPoint with_tail_order(long m) const;

 private:
  SpectrumPoint() = default;
  Kind kind_ = Kind::monomial;
  std::vector<mpq_class> x_;
  std::vector<Scalar> a_;
  std::vector<mpq_class> rho_;
  std::optional<std::vector<mpq_class>> ambient_;
  long tail_order_ = 0;
};

/// max over the support of lognorm(coeff) + <lambda, x>; multiplicative.
LogNorm monomial_eval(const TwistedElement& f, std::span<const mpq_class> x);

/// Shifted-center evaluation: rewrites f in ordered monomials of the shifted
/// variables t_i = T_i - a_i by per-slot binomial expansion (a_i is central,
/// slots stay in order) and returns max_n lognorm(b_n) + <n, rho>.
/// Exact; requires a polydisc element and |1 - q| < 1.
LogNorm shifted_eval_polydisc(const TwistedElement& f, const SpectrumPoint& p);

struct TorusEval {
  LogNorm value;       // max over the truncated expansion
  LogNorm tail_bound;  // sound upper bound for every discarded term
  bool certified;      // value > tail_bound, so the value is exact
};

/// Shifted-center evaluation on Laurent elements: negative powers expand by
/// (t_i + a_i)^{-1} = t_i^{-1} sum (-1)^m a_i^m t_i^{-m}, truncated at the
/// point's tail order M. The returned bound is sound: every discarded term
/// has lognorm <= tail_bound.
TorusEval shifted_eval_torus(const TwistedElement& f, const SpectrumPoint& p);

/// Dispatches on the point kind; torus evaluations must certify.
LogNorm point_eval(const TwistedElement& f, const SpectrumPoint& p);

struct CheckReport {
  size_t total = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// nu(fg) = nu(f) + nu(g) on each sample pair (exact for monomial/polydisc
/// points, certified for torus points).
CheckReport check_point_multiplicative(
    const SpectrumPoint& p, std::span<const std::pair<TwistedElement, TwistedElement>> pairs);

/// Finite-sample semi-decision of the submultiplicative/bounded-seminorm
/// conditions: nu(ab) <= nu(a)+nu(b), nu(1) = 0, and nu <= log C + ambient.
/// Reports the smallest admissible log C over the sample.
struct BoundedReport {
  CheckReport checks;
  std::optional<mpq_class> log_c;  // nullopt when no finite C fits the sample
};
BoundedReport check_submultiplicative_bounded(
    const std::function<LogNorm(const TwistedElement&)>& candidate,
    const TwistedElement& one, std::span<const TwistedElement> samples,
    std::span<const std::pair<TwistedElement, TwistedElement>> pairs,
    const std::function<LogNorm(const TwistedElement&)>& ambient);

/// pi_can: evaluates each generator at the point, giving the skeleton
/// coordinates (log|z_1|, ..., log|z_d|).
std::vector<mpq_class> skeleton_retract(const SpectrumPoint& p, int dim);
SpectrumPoint skeleton_embed(std::vector<mpq_class> x);

}  // namespace qtate::spectra
