#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "swor/random.hpp"
#include "swor/stable_math.hpp"

namespace swor {

/// A category together with its perturbed log-probability phi + Gumbel(0).
struct PerturbedKey {
  std::size_t index = 0;
  LogValue phi = kNegInf;
  double key = kNegInf;
};

/// Gumbel(phi) variate from a single uniform: phi - log(-log u).
/// Computed as phi + noise so that a fixed uniform gives the same noise for
/// every location.
double gumbel_from_uniform(double u, LogValue phi);

/// Draws one Gumbel(phi) variate. Always consumes exactly one uniform, also
/// for phi = -inf (which returns -inf); this keeps streams aligned when some
/// categories are masked.
double sample_gumbel(RandomStream& stream, LogValue phi);

/// Standard Gumbel CDF with location phi: exp(-exp(phi - g)).
inline double gumbel_cdf(LogValue phi, double g) {
  if (phi == kNegInf) return 1.0;
  return std::exp(-std::exp(phi - g));
}

/// Indices of the k largest values in decreasing value order; ties go to the
/// smaller index.
std::vector<std::size_t> argtop_k(std::span<const double> values, std::size_t k);

/// Perturbs every phi with one uniform each, in index order.
std::vector<PerturbedKey> perturb(std::span<const LogValue> phis, RandomStream& stream);

/// Gumbel-Max: index distributed Categorical(softmax(phis)).
std::size_t gumbel_max(std::span<const LogValue> phis, RandomStream& stream);

/// Gumbel-Top-k: ordered sample of k distinct categories without replacement
/// (sequential renormalized draws in distribution).
std::vector<std::size_t> gumbel_top_k(std::span<const LogValue> phis, std::size_t k,
                                      RandomStream& stream);

}  // namespace swor
