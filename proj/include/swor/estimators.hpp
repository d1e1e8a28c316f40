#pragma once

#include <functional>
#include <span>
#include <string>

#include "swor/search.hpp"
#include "swor/seqmodel.hpp"

namespace swor {

/// Pure, finite-valued function of a complete sequence.
using Functional = std::function<double(const Sequence&)>;

enum class EstimatorMethod { kMonteCarlo, kSbsRaw, kSbsNormalized, kBsBound, kBsNormalized };

std::string method_name(EstimatorMethod m);

/// One estimator output row.
struct EstimateReport {
  EstimatorMethod method = EstimatorMethod::kMonteCarlo;
  int k = 0;
  double temperature = 1.0;
  int replicate = 0;
  double value = 0.0;
  double weight_sum = 0.0;  // W(S) where applicable, else 0
};

/// Plain Monte Carlo mean of f over samples drawn with replacement.
double mc_estimate(const Functional& f, std::span<const Sequence> samples);

/// log P(G_phi > a) = log(1 - exp(-exp(phi - a))), the log inclusion
/// probability under threshold a. Below phi - a = -10 the direct form loses
/// all digits, so the small-z series of log(1 - exp(-z)) takes over.
double log_q(LogValue phi, double a);

/// log(p / q) for the priority-sampling weight: phi - log_q(phi, kappa),
/// with the series route kappa + z/2 - z^2/24 + z^4/2880 (z = exp(phi-kappa))
/// below the phi - kappa = -10 cutoff.
double log_importance_weight(LogValue phi, double kappa);

/// W(S) = sum of importance weights exp(log_importance_weight(phi_i, kappa)).
double weight_sum(const SworSample& sample);

/// Priority-sampling estimator: sum over retained entries of
/// (p_i / q_i) f(y_i) with the sample's empirical threshold kappa. Unbiased.
double priority_estimate(const Functional& f, const SworSample& sample);

/// Self-normalized variant: priority_estimate / W(S). Biased but consistent;
/// exact for constant functionals.
double normalized_estimate(const Functional& f, const SworSample& sample);

/// Deterministic beam sum: sum p_i f(y_i) over the beam; a lower bound of the
/// expectation for f >= 0. With `normalized`, divides by the beam mass.
double bs_bound(const Functional& f, std::span<const BeamEntry> beam, bool normalized);

/// f(y) = -log p(y); its expectation is the model entropy. The model must
/// outlive the returned functional.
Functional entropy_functional(const SequenceModel& model);

}  // namespace swor
