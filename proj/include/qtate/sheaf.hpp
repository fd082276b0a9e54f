#pragma once

#include <optional>
#include <vector>

#include "qtate/twisted.hpp"

namespace qtate::sheaf {

/// Rational polytope-with-rays: the convex hull of the vertices plus the cone
/// spanned by the recession rays. Stands in for the open subsets of R^n that
/// sections are declared on.
struct Polytope {
  int dim = 0;
  std::vector<std::vector<mpq_class>> vertices;
  std::vector<std::vector<long>> rays;

  Polytope(int d, std::vector<std::vector<mpq_class>> verts,
           std::vector<std::vector<long>> rays_in = {});
};

/// Element (A, lambda) of SL(n,Z) x (K^x)^n acting on sections and on the base.
struct TransitionData {
  std::vector<std::vector<long>> A;       // det = 1
  std::vector<Scalar> lambda;             // nonzero entries of (K^x)^n

  TransitionData(std::vector<std::vector<long>> a, std::vector<Scalar> l);
  int dim() const { return static_cast<int>(A.size()); }
  std::vector<long> val_vector() const;
};

/// Which matrix acts on monomial exponents. Exponents are covectors, so the
/// default transforms them by the inverse transpose; the alternative applies
/// A literally. Both choices pair with the matching point map below so that
/// the norm equivariance identity holds exactly.
enum class ExponentAction { covector, matrix };

std::vector<std::vector<long>> exponent_matrix(const TransitionData& g, ExponentAction action);

/// z^I -> (prod_i lambda_i^{K_i}) q^{corr(I)} z^K with K the transformed
/// exponent; corr is the quadratic correction making the map an algebra
/// homomorphism (it needs the commutation form to be preserved, automatic
/// for n = 2). The q-power has norm one, so stalk norms never see it.
TwistedElement transform_section(const TransitionData& g, const TwistedElement& f,
                                 ExponentAction action = ExponentAction::covector);

/// The point map paired with transform_section: x -> Lx + (val lambda_1, ...,
/// val lambda_n), L the inverse transpose of the exponent matrix. Satisfies
/// stalk_lognorm(transform_section(g,f), transform_point(g,x)) = stalk_lognorm(f,x).
std::vector<mpq_class> transform_point(const TransitionData& g, std::span<const mpq_class> x,
                                       ExponentAction action = ExponentAction::covector);

Polytope transform_polytope(const TransitionData& g, const Polytope& u,
                            ExponentAction action = ExponentAction::covector);

/// Composite data with S_{g1} o S_{g2} = S_{composite}; evaluated on generator
/// images, so it needs the algebra's twist and q (the central q-powers depend
/// on them).
TransitionData compose(const TransitionData& g1, const TransitionData& g2,
                       const TwistForm& twist, const Scalar& q,
                       ExponentAction action = ExponentAction::covector);
TransitionData inverse(const TransitionData& g, const TwistForm& twist, const Scalar& q,
                       ExponentAction action = ExponentAction::covector);

/// True iff sup over U of lognorm(coeff) + <I, x> is finite for every support
/// exponent I; for finite sums this reduces to I . ray <= 0 on every ray.
bool converges_on(const TwistedElement& f, const Polytope& u);

/// The convergence functional at a single point (monomial evaluation).
LogNorm stalk_lognorm(const TwistedElement& f, std::span<const mpq_class> x);

/// A section with its declared domain; the factory enforces convergence.
struct SheafSection {
  TwistedElement element;
  Polytope domain;
};
SheafSection make_section(TwistedElement element, Polytope domain);

// Small exact integer-matrix helpers shared with tests.
long det(const std::vector<std::vector<long>>& m);
std::vector<std::vector<long>> transpose(const std::vector<std::vector<long>>& m);
std::vector<std::vector<long>> unimodular_inverse(const std::vector<std::vector<long>>& m);
std::vector<std::vector<long>> matmul(const std::vector<std::vector<long>>& a,
                                      const std::vector<std::vector<long>>& b);

}  // namespace qtate::sheaf
