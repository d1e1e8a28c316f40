#pragma once

#include <optional>
#include <vector>

#include "swor/random.hpp"
#include "swor/seqmodel.hpp"
#include "swor/stable_math.hpp"

namespace swor {

/// Partial or complete sequence on a beam: its total log-probability phi and
/// its perturbed key (phi plus propagated Gumbel noise).
struct BeamEntry {
  Sequence seq;
  LogValue phi = 0.0;
  double key = 0.0;

  double noise() const { return key - phi; }
};

/// Ordered sample of complete sequences without replacement.
struct SworSample {
  std::vector<BeamEntry> entries;  // without-replacement draw order
  std::optional<double> kappa;     // empirical threshold, when defined
  long long evaluations = 0;       // model step() calls
  long long draws = 0;             // with-replacement draws (rejection only)
  bool exhausted = false;          // model ran out of complete sequences
};

/// Diagnostics collected per expansion during stochastic beam search.
struct SbsStats {
  double max_coupling_gap = 0.0;    // max |max(child keys) - parent key|
  double max_child_excess = kNegInf;  // max (child key - parent key)
  long long expansions = 0;
};

/// Budget exhausted before the requested sample was complete; carries the
/// partial sample gathered so far.
class BudgetError : public std::runtime_error {
 public:
  BudgetError(const std::string& what, SworSample partial_sample)
      : std::runtime_error(what), partial(std::move(partial_sample)) {}
  SworSample partial;
};

/// Deterministic limited-width breadth-first search; keeps the k partial
/// sequences of highest phi at every step. Entries carry key = phi.
std::vector<BeamEntry> beam_search(const SequenceModel& model, std::size_t k);

/// Beam search over perturbed log-probabilities: the root key is drawn
/// Gumbel(0), and each beam entry is expanded by sampling child Gumbel keys
/// conditioned on their maximum equaling the parent key; the top k expansions
/// by key survive. The result is an ordered sample of k complete sequences
/// without replacement whose keys follow the unconditional joint Gumbel law,
/// as the importance-weighted estimators require. Completed sequences hold
/// their slot with a frozen key until the whole beam is complete. If the
/// model has fewer than k complete sequences, all of them are returned and
/// `exhausted` is set.
SworSample stochastic_beam_search(const SequenceModel& model, std::size_t k,
                                  RandomStream& stream, SbsStats* stats = nullptr);

/// Stochastic beam search in estimator mode: beam width k, keep k - 1
/// entries, kappa = the k-th key. If the model is exhausted first, every
/// sequence is kept and kappa = -inf (the whole domain was sampled).
SworSample sbs_estimator_sample(const SequenceModel& model, std::size_t k,
                                RandomStream& stream);

/// One sequence drawn token-by-token from the step conditionals
/// (sampling with replacement).
BeamEntry ancestral_sample(const SequenceModel& model, RandomStream& stream);

/// Draws with replacement until k distinct sequences appear, in
/// first-appearance order. `evaluations` counts every step() call including
/// rejected duplicates; kappa is left undefined. Throws BudgetError carrying
/// the partial sample when max_draws is exhausted.
SworSample rejection_swor(const SequenceModel& model, std::size_t k, RandomStream& stream,
                          long long max_draws);

/// Stepwise baseline that replaces the top-k selection with a fresh
/// without-replacement draw from the renormalized expansion probabilities at
/// every level. Biased: it forgets the noise that selected a partial
/// sequence, so low-probability prefixes must win repeatedly to survive.
SworSample naive_stepwise_swor(const SequenceModel& model, std::size_t k,
                               RandomStream& stream);

}  // namespace swor
