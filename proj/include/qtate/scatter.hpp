#pragma once

#include <map>
#include <optional>
#include <vector>

#include "qtate/twisted.hpp"

namespace qtate::scatter {

/// Integer covector a dx + b dy; R_mu is the monomial xi^a eta^b.
struct Covector {
  long a = 0;
  long b = 0;

  Covector() = default;
  Covector(long a_, long b_);
  long wedge(const Covector& o) const { return a * o.b - b * o.a; }
  bool operator==(const Covector& o) const { return a == o.a && b == o.b; }
  Covector primitive() const;
};

/// Slope n2/n1 in [0, +inf]_Q of a correction monomial R_{a1}^{-n1} R_{a2}^{-n2};
/// infinity is {1, 0}.
struct Slope {
  long num = 0;
  long den = 1;

  static Slope of(long n1, long n2);
  static Slope zero() { return {0, 1}; }
  static Slope infinity() { return {1, 0}; }
  bool is_zero() const { return num == 0; }
  bool is_infinite() const { return den == 0; }
  bool operator==(const Slope& o) const { return num == o.num && den == o.den; }
  bool operator<(const Slope& o) const { return num * o.den < o.num * den; }
  std::string str() const;
};

/// Quantum-torus context for the wall-crossing machinery: two invertible
/// variables with eta xi = q xi eta.
struct ScatterContext {
  TwistForm twist;
  Scalar q;

  explicit ScatterContext(Scalar q_in);
  bool operator==(const ScatterContext& o) const { return twist == o.twist && q == o.q; }
};

/// Closed angle V at a base point spanned by two covectors with a1 ^ a2 > 0;
/// carries the coefficient bound log|c| <= <n1 a1 + n2 a2, base>.
struct AngleRegion {
  std::vector<mpq_class> base;  // (x0, y0)
  Covector a1, a2;

  AngleRegion(std::vector<mpq_class> base_in, Covector a1_in, Covector a2_in);
  static AngleRegion standard();
  /// The bound a correction coefficient at quadrant coordinates (n1, n2) must obey.
  mpq_class coefficient_bound(long n1, long n2) const;
};

/// Automorphism of the quantum torus given by its generator images,
/// unipotent with corrections in the negative quadrant, truncated at total
/// order D in (xi^{-1}, eta^{-1}).
class WallAutomorphism {
 public:
  static WallAutomorphism identity(const ScatterContext& ctx, long order);
  /// Validates unipotence, quadrant support, the order bound, commutation
  /// preservation mod order D, and slope-ray membership when tagged.
  static WallAutomorphism from_images(ScatterContext ctx, TwistedElement xi_image,
                                      TwistedElement eta_image, long order,
                                      std::optional<Slope> slope = std::nullopt);

  const ScatterContext& context() const { return ctx_; }
  const TwistedElement& xi_image() const { return xi_; }
  const TwistedElement& eta_image() const { return eta_; }
  long order() const { return order_; }
  const std::optional<Slope>& slope_tag() const { return slope_; }
  bool is_identity() const;

  /// Substitution homomorphism: each monomial maps to the normal-ordered
  /// product of image powers, truncated at order D relative to the monomial.
  TwistedElement apply(const TwistedElement& f) const;

  /// Exact check that the images satisfy eta xi = q xi eta mod order D.
  bool preserves_commutation() const;
  /// True when every correction lies on the tagged ray.
  bool slope_supported() const;
  /// log|c| <= <n1 a1 + n2 a2, base> for every correction coefficient.
  bool satisfies_bound(const AngleRegion& v) const;

  bool operator==(const WallAutomorphism& o) const;

 private:
  friend WallAutomorphism compose(const WallAutomorphism&, const WallAutomorphism&);
  friend WallAutomorphism invert(const WallAutomorphism&);
  friend WallAutomorphism transport(const WallAutomorphism&, const Scalar&);
  friend std::map<Slope, WallAutomorphism> factorize(const WallAutomorphism&,
                                                     const WallAutomorphism&, long,
                                                     const AngleRegion&);
  WallAutomorphism(ScatterContext ctx, TwistedElement xi, TwistedElement eta, long order,
                   std::optional<Slope> slope)
      : ctx_(std::move(ctx)), xi_(std::move(xi)), eta_(std::move(eta)), order_(order),
        slope_(slope) {}

  ScatterContext ctx_;
  TwistedElement xi_, eta_;
  long order_;
  std::optional<Slope> slope_;
};

/// Wall attached to covector alpha with function f = 1 + corrections, the
/// corrections a series in R_alpha^{-1}: z^g -> z^g f^{g ^ alpha}. For q != 1
/// this is an automorphism only when alpha is an axis direction; the
/// constructor rejects images that break the commutation relation.
WallAutomorphism wall_aut(const Covector& alpha, const TwistedElement& corrections,
                          const ScatterContext& ctx, long order);

/// Conjugation constructor for q != 1: Ad_{1 + corrections}, an automorphism
/// for every ray (degenerates to the identity at q = 1).
WallAutomorphism wall_conjugation(const Covector& alpha, const TwistedElement& corrections,
                                  const ScatterContext& ctx, long order);

/// phi after psi (psi applied first), truncated at the common order.
WallAutomorphism compose(const WallAutomorphism& phi, const WallAutomorphism& psi);

/// Order-by-order inverse: compose(phi, invert(phi)) = id mod order D + 1.
WallAutomorphism invert(const WallAutomorphism& phi);

/// Conjugation by eta -> C eta pulled back along a line segment; correction
/// coefficients at eta-depth m pick up C^m, so their lognorms strictly
/// decrease. Requires lognorm(C) < 0.
WallAutomorphism transport(const WallAutomorphism& phi, const Scalar& c);

/// Ordered slope factorization: returns the unique family (g_lambda) with
/// corrections on single rays such that composing in ascending slope order
/// (largest slope applied first) reproduces compose(ginf, g0) mod order D+1.
std::map<Slope, WallAutomorphism> factorize(const WallAutomorphism& g0,
                                            const WallAutomorphism& ginf, long order,
                                            const AngleRegion& v = AngleRegion::standard());

/// Composes a factor family in ascending slope order.
WallAutomorphism ordered_compose(const std::map<Slope, WallAutomorphism>& factors,
                                 const ScatterContext& ctx, long order);

/// A wall line in the chart: base point, primitive direction, covector,
/// attached automorphism.
struct Line {
  std::vector<mpq_class> base;  // rational point
  std::pair<long, long> dir;    // primitive integer direction
  Covector alpha;
  WallAutomorphism aut;
  bool composite = false;
};

struct CollisionRecord {
  std::vector<mpq_class> point;
  size_t first_line;   // index with local covector alpha1
  size_t second_line;  // index with local covector alpha2
  std::vector<size_t> newborn;
};

struct ScatteringDiagram {
  std::vector<Line> lines;
  std::vector<CollisionRecord> collisions;
};

/// Processes pairwise collisions in order of occurrence (tie-broken by the
/// lexicographic intersection point), running factorize at each vertex and
/// emitting composite lines with covector n1 a1 + n2 a2. Automorphisms are
/// carried along lines unchanged; corrections beyond the order bound drop.
ScatteringDiagram scatter_chart(const ScatteringDiagram& initial, long order);

/// Around each recorded collision: ordered product of the stored factors
/// (parents at the edge slopes, newborns in between) equals ginf o g0.
bool chart_consistent(const ScatteringDiagram& diagram, long order,
                      std::vector<std::string>* why = nullptr);

}  // namespace qtate::scatter
