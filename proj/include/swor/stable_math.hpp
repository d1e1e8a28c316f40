#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace swor {

// Log-domain value in nats. -inf encodes log(0); NaN never escapes a public
// operation. All probability arithmetic in this library happens in log domain;
// linear-domain probabilities appear only at I/O boundaries.
using LogValue = double;

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLog2 = 0.6931471805599453;

/// log(1 - exp(a)) for a <= 0. Branches at -log 2: expm1 above, log1p below.
/// Returns -inf at a = 0.
inline double log1mexp(double a) {
  if (std::isnan(a) || a > 0.0) {
    throw std::domain_error("log1mexp: argument must be <= 0");
  }
  if (a == 0.0) return kNegInf;
  if (a > -kLog2) return std::log(-std::expm1(a));
  return std::log1p(-std::exp(a));
}

/// log(1 + exp(a)); branch at 18, above which log1p(exp(a)) loses the tail.
inline double log1pexp(double a) {
  if (std::isnan(a)) throw std::domain_error("log1pexp: NaN argument");
  if (a < 18.0) return std::log1p(std::exp(a));
  return a + std::exp(-a);
}

/// Max-shifted log of the sum of exponentials. -inf entries contribute
/// nothing; an all-(-inf) input yields -inf.
inline LogValue logsumexp(std::span<const LogValue> values) {
  if (values.empty()) throw std::domain_error("logsumexp: empty input");
  double m = kNegInf;
  for (double v : values) {
    if (std::isnan(v)) throw std::domain_error("logsumexp: NaN input");
    m = std::max(m, v);
  }
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : values) {
    if (v != kNegInf) s += std::exp(v - m);
  }
  return m + std::log(s);
}

inline LogValue logsumexp(const std::vector<LogValue>& values) {
  return logsumexp(std::span<const LogValue>(values));
}

}  // namespace swor
