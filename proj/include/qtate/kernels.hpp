#pragma once

#include <optional>

#include "qtate/twisted.hpp"

namespace qtate::kernels {

/// Term-level product options. degree_bound drops output monomials with
/// |lambda|_1 above the bound; min_exp_sum drops monomials whose coordinate
/// sum falls below the given value (the anchored-order truncation used by the
/// wall-crossing code, where order = anchor_sum - exponent_sum).
struct MulOptions {
  std::optional<long> degree_bound;
  std::optional<long> min_exp_sum;
};

/// Serial reference convolution of two term maps under the twist rule.
TwistedElement::Terms multiply_serial(const TwistedElement::Terms& f,
                                      const TwistedElement::Terms& g, const TwistForm& twist,
                                      const Scalar& q, const MulOptions& opts = {});

/// OpenMP kernel: partitions the left support across threads with per-thread
/// accumulation and a deterministic in-order merge. Exact arithmetic makes the
/// result identical to the serial kernel.
TwistedElement::Terms multiply_parallel(const TwistedElement::Terms& f,
                                        const TwistedElement::Terms& g, const TwistForm& twist,
                                        const Scalar& q, const MulOptions& opts = {});

/// Serial max-reduction of lognorm(coeff) + <lambda, rho> over the support.
LogNorm max_norm_serial(const TwistedElement::Terms& f, std::span<const mpq_class> rho);

/// OpenMP max-reduction; max is order-insensitive so the result is exact.
LogNorm max_norm_parallel(const TwistedElement::Terms& f, std::span<const mpq_class> rho);

/// Support-size product above which TwistedElement::operator* picks the
/// parallel kernel.
inline constexpr size_t parallel_threshold = 1u << 14;

}  // namespace qtate::kernels
