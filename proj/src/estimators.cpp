#include "swor/estimators.hpp"

#include <cmath>
#include <stdexcept>

namespace swor {

std::string method_name(EstimatorMethod m) {
  switch (m) {
    case EstimatorMethod::kMonteCarlo: return "mc";
    case EstimatorMethod::kSbsRaw: return "sbs";
    case EstimatorMethod::kSbsNormalized: return "sbs-norm";
    case EstimatorMethod::kBsBound: return "bs";
    case EstimatorMethod::kBsNormalized: return "bs-norm";
  }
  return "?";
}

double mc_estimate(const Functional& f, std::span<const Sequence> samples) {
  if (samples.empty()) throw std::domain_error("mc_estimate: no samples");
  double sum = 0.0;
  for (const Sequence& s : samples) sum += f(s);
  return sum / static_cast<double>(samples.size());
}

double log_q(LogValue phi, double a) {
  if (std::isnan(phi) || std::isnan(a)) throw std::domain_error("log_q: NaN argument");
  if (a == kNegInf) return 0.0;   // every key beats the threshold
  if (phi == kNegInf) return kNegInf;
  const double w = phi - a;
  if (w < -10.0) {
    const double z = std::exp(w);
    return w - z / 2.0 + z * z / 24.0 - z * z * z * z / 2880.0;
  }
  return log1mexp(-std::exp(w));
}

double log_importance_weight(LogValue phi, double kappa) {
  if (std::isnan(phi) || std::isnan(kappa)) {
    throw std::domain_error("log_importance_weight: NaN argument");
  }
  if (kappa == kNegInf) return phi;  // q = 1
  if (phi == kNegInf) return kNegInf;
  const double w = phi - kappa;
  if (w < -10.0) {
    const double z = std::exp(w);
    return kappa + z / 2.0 - z * z / 24.0 + z * z * z * z / 2880.0;
  }
  return phi - log_q(phi, kappa);
}

namespace {

double require_kappa(const SworSample& sample, const char* who) {
  if (!sample.kappa.has_value()) {
    throw std::invalid_argument(std::string(who) + ": sample carries no kappa threshold");
  }
  if (sample.entries.empty()) {
    throw std::domain_error(std::string(who) + ": empty sample");
  }
  return *sample.kappa;
}

}  // namespace

double weight_sum(const SworSample& sample) {
  const double kappa = require_kappa(sample, "weight_sum");
  double w = 0.0;
  for (const BeamEntry& e : sample.entries) {
    w += std::exp(log_importance_weight(e.phi, kappa));
  }
  return w;
}

double priority_estimate(const Functional& f, const SworSample& sample) {
  const double kappa = require_kappa(sample, "priority_estimate");
  double sum = 0.0;
  for (const BeamEntry& e : sample.entries) {
    sum += std::exp(log_importance_weight(e.phi, kappa)) * f(e.seq);
  }
  return sum;
}

double normalized_estimate(const Functional& f, const SworSample& sample) {
  const double kappa = require_kappa(sample, "normalized_estimate");
  double num = 0.0;
  double den = 0.0;
  for (const BeamEntry& e : sample.entries) {
    const double w = std::exp(log_importance_weight(e.phi, kappa));
    num += w * f(e.seq);
    den += w;
  }
  if (den == 0.0) throw std::domain_error("normalized_estimate: degenerate sample, W(S) = 0");
  return num / den;
}

double bs_bound(const Functional& f, std::span<const BeamEntry> beam, bool normalized) {
  double sum = 0.0;
  double mass = 0.0;
  for (const BeamEntry& e : beam) {
    const double p = std::exp(e.phi);
    sum += p * f(e.seq);
    mass += p;
  }
  if (!normalized) return sum;
  if (mass == 0.0) throw std::domain_error("bs_bound: beam carries no probability mass");
  return sum / mass;
}

Functional entropy_functional(const SequenceModel& model) {
  return [&model](const Sequence& seq) { return -seq_logprob(model, seq); };
}

}  // namespace swor
