#pragma once

#include <span>
#include <vector>

#include "swor/random.hpp"
#include "swor/stable_math.hpp"

namespace swor {

/// Gumbel(phi) conditioned to be at most t_max.
struct TruncatedGumbelParams {
  LogValue phi = 0.0;
  double t_max = kInf;
};

/// CDF of the truncated Gumbel: exp(exp(phi - T) - exp(phi - min(g, T))).
double trunc_cdf(const TruncatedGumbelParams& params, double g);

/// Inverse CDF: phi - log(exp(phi - T) - log u), for u in (0, 1].
double trunc_inv_cdf(const TruncatedGumbelParams& params, double u);

/// Monotone transform sending a set of Gumbel keys to a set whose maximum is
/// exactly t_max: each key g maps to -log(exp(-t_max) - exp(-Z) + exp(-g))
/// with Z = max(keys). Computed through log1mexp/log1pexp so it stays finite
/// where the direct exponential form over- or underflows. The argmax entry is
/// short-circuited to t_max, so the output maximum equals t_max bit-for-bit.
std::vector<double> shift_to_max(std::span<const double> keys, double t_max);

/// Draws one Gumbel(phi) per child (consuming one uniform each, also for
/// phi = -inf) and shifts the set so its maximum equals parent_key. Non-argmax
/// children are marginally TruncatedGumbel(phi_i, parent_key); the argmax
/// child equals parent_key.
std::vector<double> sample_children_conditional(RandomStream& stream,
                                                std::span<const LogValue> child_phis,
                                                double parent_key);

}  // namespace swor
