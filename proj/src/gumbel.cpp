#include "swor/gumbel.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace swor {

double gumbel_from_uniform(double u, LogValue phi) {
  if (!(u > 0.0) || !(u < 1.0)) {
    throw std::domain_error("gumbel_from_uniform: u must be in (0, 1)");
  }
  const double noise = -std::log(-std::log(u));
  return phi + noise;  // -inf + finite stays -inf
}

double sample_gumbel(RandomStream& stream, LogValue phi) {
  return gumbel_from_uniform(stream.uniform(), phi);
}

std::vector<std::size_t> argtop_k(std::span<const double> values, std::size_t k) {
  if (k < 1 || k > values.size()) {
    throw std::domain_error("argtop_k: k must be in [1, n]");
  }
  std::vector<std::size_t> idx(values.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  // stable sort keeps the smaller index first among equal values
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  idx.resize(k);
  return idx;
}

std::vector<PerturbedKey> perturb(std::span<const LogValue> phis, RandomStream& stream) {
  std::vector<PerturbedKey> keys(phis.size());
  for (std::size_t i = 0; i < phis.size(); ++i) {
    keys[i] = PerturbedKey{i, phis[i], sample_gumbel(stream, phis[i])};
  }
  return keys;
}

namespace {

std::size_t count_finite(std::span<const LogValue> phis) {
  std::size_t n = 0;
  for (double p : phis) {
    if (p != kNegInf) ++n;
  }
  return n;
}

}  // namespace

std::size_t gumbel_max(std::span<const LogValue> phis, RandomStream& stream) {
  if (count_finite(phis) == 0) {
    throw std::domain_error("gumbel_max: no category has finite log-probability");
  }
  const auto keys = perturb(phis, stream);
  std::size_t best = 0;
  double best_key = kNegInf;
  for (const auto& pk : keys) {
    if (pk.key > best_key) {
      best_key = pk.key;
      best = pk.index;
    }
  }
  return best;
}

std::vector<std::size_t> gumbel_top_k(std::span<const LogValue> phis, std::size_t k,
                                      RandomStream& stream) {
  if (k < 1 || k > count_finite(phis)) {
    throw std::domain_error("gumbel_top_k: k exceeds the number of admissible categories");
  }
  const auto perturbed = perturb(phis, stream);
  std::vector<double> keys(perturbed.size());
  for (std::size_t i = 0; i < perturbed.size(); ++i) keys[i] = perturbed[i].key;
  return argtop_k(keys, k);
}

}  // namespace swor
