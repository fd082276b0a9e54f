#pragma once

#include <array>
#include <optional>
#include <vector>

#include "qtate/twisted.hpp"

namespace qtate::k3 {

/// Which way the q-commutation relations are oriented. The printed relations
/// do not verify as stated under every orientation; the unique set passing
/// the chart-homomorphism oracle is hard-coded in selected_convention().
struct Convention {
  bool xi_eta_q;    // true: xi eta = q eta xi; false: eta xi = q xi eta
  bool ac_printed;  // true: alpha gamma = q gamma alpha; false: flipped
  bool bc_printed;  // true: beta gamma = q gamma beta; false: flipped
  bool operator==(const Convention& o) const {
    return xi_eta_q == o.xi_eta_q && ac_printed == o.ac_printed && bc_printed == o.bc_printed;
  }
};

/// The oracle-selected orientation set.
Convention selected_convention();

/// Quantum-torus context for the chart coordinates (xi_i, eta_i).
struct K3Context {
  Scalar q;
  TwistForm twist;
  bool xi_eta_q;

  explicit K3Context(Scalar q_in, bool xi_eta_q_in = selected_convention().xi_eta_q);
};

/// Presentation of A_q(S): generators alpha, beta, gamma with
///   alpha gamma = q gamma alpha   (orientation per convention)
///   beta gamma  = q gamma beta    (orientation per convention)
///   beta alpha - q alpha beta = 1 - q
///   (alpha beta - 1) gamma = 1.
/// At q = 1 this degenerates to the commutative surface (alpha beta - 1) gamma = 1.
struct Presentation {
  Scalar q;
  bool ac_printed;
  bool bc_printed;
};

/// One affine chart of the local model: region in the base plus the three
/// generator images (A_i, B_i, C_i) inside the quantum torus.
struct Chart {
  int index;      // 1, 2, 3
  mpq_class eps;  // the chart inequalities' 0 < eps < 1, fixed to 1/2
  TwistedElement a, b, c;
};

Chart make_chart(int index, const K3Context& ctx, const mpq_class& eps = mpq_class(1, 2));

/// Substitutes the chart images into the four relations; a chart is a
/// homomorphism iff all four residuals are exactly zero.
std::array<TwistedElement, 4> relation_residuals(const Chart& chart, const Presentation& pres,
                                                 const K3Context& ctx,
                                                 std::optional<long> truncation = std::nullopt);

/// Runs the 2x2x2 orientation oracle at the given q; returns every set under
/// which all three charts verify.
std::vector<Convention> consistent_conventions(const Scalar& q);

/// Membership in the chart regions (chart 2 uses the shrunk region U2').
bool region_contains(int index, const mpq_class& x, const mpq_class& y,
                     const mpq_class& eps = mpq_class(1, 2));

/// f(alpha, beta, gamma) = (max(0, log|alpha|), max(0, log|beta|), log|gamma|)
/// at the monomial point (x, y) of the chart (which must contain it).
std::array<mpq_class, 3> map_f(const Chart& chart, const mpq_class& x, const mpq_class& y);

/// The piecewise-linear embedding j of the base plane into R^3.
std::array<mpq_class, 3> embed_j(const mpq_class& x, const mpq_class& y);

/// Inverts j on its image; throws when the value is not in the image.
std::array<mpq_class, 2> invert_j(const std::array<mpq_class, 3>& v);

/// The chart projections pi_i (identity for i = 1, 3; two branches for i = 2).
std::array<mpq_class, 2> chart_projection(int index, const mpq_class& x, const mpq_class& y);

/// j^{-1} o f through the chart's generator images.
std::array<mpq_class, 2> project_pi(const Chart& chart, const mpq_class& x, const mpq_class& y);

struct SweepReport {
  size_t total = 0;
  size_t branch_x_neg = 0;   // grid points hitting the x <= 0 branch of j
  size_t branch_x_pos = 0;   // and the x >= 0 branch
  size_t branch_pi2_high = 0;  // points on the |eta| >= 1 branch of pi_2
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

/// Checks j(pi_i(x, y)) = f(g_i) exactly on a rational grid inside the region;
/// grid_n controls the grid density.
SweepReport compatibility_sweep(const Chart& chart, const K3Context& ctx, int grid_n = 8);

struct GlueReport {
  bool commutation_ok = false;
  bool roundtrip_ok = false;
  size_t invertibility_samples = 0;
  std::vector<std::string> failures;
  bool passed() const {
    return commutation_ok && roundtrip_ok && failures.empty();
  }
};

/// Verifies the gluing automorphism phi on U1 n U2 (overlap = 12) or U1 n U3
/// (overlap = 13): exact q-commutation preservation, certified invertibility
/// of the correction unit at sampled points of the overlap, and the
/// three-chart identification roundtrip on U2 n U3.
GlueReport glue_automorphism_check(int overlap, long order, const K3Context& ctx);

}  // namespace qtate::k3
