#include "swor/truncated_gumbel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "swor/gumbel.hpp"

namespace swor {

double trunc_cdf(const TruncatedGumbelParams& params, double g) {
  if (std::isnan(g) || std::isnan(params.phi) || std::isnan(params.t_max)) {
    throw std::domain_error("trunc_cdf: NaN argument");
  }
  if (params.phi == kNegInf) return 1.0;  // degenerate: all mass at -inf
  if (g == kNegInf) return 0.0;
  const double capped = std::min(g, params.t_max);
  return std::exp(std::exp(params.phi - params.t_max) - std::exp(params.phi - capped));
}

double trunc_inv_cdf(const TruncatedGumbelParams& params, double u) {
  if (!(u > 0.0) || !(u <= 1.0)) {
    throw std::domain_error("trunc_inv_cdf: u must be in (0, 1]");
  }
  if (params.phi == kNegInf) return kNegInf;
  if (u == 1.0) return params.t_max;
  return params.phi - std::log(std::exp(params.phi - params.t_max) - std::log(u));
}

std::vector<double> shift_to_max(std::span<const double> keys, double t_max) {
  if (keys.empty()) throw std::domain_error("shift_to_max: empty key set");
  if (!std::isfinite(t_max)) throw std::domain_error("shift_to_max: t_max must be finite");

  std::size_t argmax = 0;
  double z = kNegInf;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (std::isnan(keys[i])) throw std::domain_error("shift_to_max: NaN key");
    if (keys[i] > z) {
      z = keys[i];
      argmax = i;
    }
  }
  if (z == kNegInf) throw std::domain_error("shift_to_max: all keys are -inf");

  std::vector<double> out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i == argmax) {
      out[i] = t_max;
    } else if (keys[i] == kNegInf) {
      out[i] = kNegInf;
    } else if (keys[i] == z) {
      out[i] = t_max;  // exact tie with the maximum
    } else {
      const double v = t_max - keys[i] + log1mexp(keys[i] - z);
      out[i] = t_max - std::max(0.0, v) - log1pexp(-std::abs(v));
    }
  }
  return out;
}

std::vector<double> sample_children_conditional(RandomStream& stream,
                                                std::span<const LogValue> child_phis,
                                                double parent_key) {
  if (child_phis.empty()) {
    throw std::domain_error("sample_children_conditional: no children");
  }
  bool any_finite = false;
  for (double p : child_phis) {
    if (p != kNegInf) any_finite = true;
  }
  if (!any_finite) {
    throw std::domain_error("sample_children_conditional: all children have zero probability");
  }
  std::vector<double> keys(child_phis.size());
  for (std::size_t i = 0; i < child_phis.size(); ++i) {
    keys[i] = sample_gumbel(stream, child_phis[i]);
  }
  return shift_to_max(keys, parent_key);
}

}  // namespace swor
