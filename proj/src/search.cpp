#include "swor/search.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "swor/gumbel.hpp"
#include "swor/truncated_gumbel.hpp"

namespace swor {

namespace {

bool entry_complete(const SequenceModel& model, const BeamEntry& e) {
  return is_complete(model, e.seq);
}

// key descending, sequence lexicographic ascending on ties
bool key_order(const BeamEntry& a, const BeamEntry& b) {
  if (a.key != b.key) return a.key > b.key;
  return a.seq < b.seq;
}

// phi descending, sequence lexicographic ascending on ties
bool phi_order(const BeamEntry& a, const BeamEntry& b) {
  if (a.phi != b.phi) return a.phi > b.phi;
  return a.seq < b.seq;
}

void keep_top(std::vector<BeamEntry>& candidates, std::size_t k,
              bool (*order)(const BeamEntry&, const BeamEntry&)) {
  std::sort(candidates.begin(), candidates.end(), order);
  if (candidates.size() > k) candidates.resize(k);
}

}  // namespace

std::vector<BeamEntry> beam_search(const SequenceModel& model, std::size_t k) {
  if (k < 1) throw std::domain_error("beam_search: k must be >= 1");
  std::vector<BeamEntry> beam{BeamEntry{Sequence{}, 0.0, 0.0}};
  for (int t = 0; t < model.max_len() + 1; ++t) {
    bool all_complete = true;
    for (const auto& e : beam) {
      if (!entry_complete(model, e)) all_complete = false;
    }
    if (all_complete) break;

    std::vector<BeamEntry> candidates;
    for (const auto& e : beam) {
      if (entry_complete(model, e)) {
        candidates.push_back(e);
        continue;
      }
      const std::vector<LogValue> logp = model.step(e.seq);
      for (std::size_t v = 0; v < logp.size(); ++v) {
        if (logp[v] == kNegInf) continue;
        BeamEntry child;
        child.seq = e.seq;
        child.seq.tokens.push_back(static_cast<Token>(v));
        child.phi = e.phi + logp[v];
        child.key = child.phi;
        candidates.push_back(std::move(child));
      }
    }
    keep_top(candidates, k, phi_order);
    beam = std::move(candidates);
  }
  return beam;
}

SworSample stochastic_beam_search(const SequenceModel& model, std::size_t k,
                                  RandomStream& stream, SbsStats* stats) {
  if (k < 1) throw std::domain_error("stochastic_beam_search: k must be >= 1");
  SworSample result;
  // The root key is a real Gumbel(0) draw, not a constant. Pinning it would
  // condition the maximum of all leaf keys, which leaves the sampled
  // sequences' law intact (max and argmax are independent) but distorts the
  // key values that the priority-sampling threshold kappa and the inclusion
  // probabilities q are computed from, making the estimators biased.
  std::vector<BeamEntry> beam{BeamEntry{Sequence{}, 0.0, sample_gumbel(stream, 0.0)}};
  for (int t = 0; t < model.max_len() + 1; ++t) {
    bool all_complete = true;
    for (const auto& e : beam) {
      if (!entry_complete(model, e)) all_complete = false;
    }
    if (all_complete) break;

    std::vector<BeamEntry> candidates;
    for (const auto& e : beam) {
      if (entry_complete(model, e)) {
        candidates.push_back(e);  // frozen key, not expanded
        continue;
      }
      const std::vector<LogValue> logp = model.step(e.seq);
      ++result.evaluations;
      std::vector<LogValue> child_phis(logp.size());
      for (std::size_t v = 0; v < logp.size(); ++v) {
        child_phis[v] = logp[v] == kNegInf ? kNegInf : e.phi + logp[v];
      }
      const std::vector<double> keys =
          sample_children_conditional(stream, child_phis, e.key);
      if (stats) {
        double max_child = kNegInf;
        for (double key : keys) max_child = std::max(max_child, key);
        stats->max_coupling_gap =
            std::max(stats->max_coupling_gap, std::abs(max_child - e.key));
        for (double key : keys) {
          if (key != kNegInf) {
            stats->max_child_excess = std::max(stats->max_child_excess, key - e.key);
          }
        }
        ++stats->expansions;
      }
      for (std::size_t v = 0; v < logp.size(); ++v) {
        if (child_phis[v] == kNegInf || keys[v] == kNegInf) continue;
        BeamEntry child;
        child.seq = e.seq;
        child.seq.tokens.push_back(static_cast<Token>(v));
        child.phi = child_phis[v];
        child.key = keys[v];
        candidates.push_back(std::move(child));
      }
    }
    keep_top(candidates, k, key_order);
    beam = std::move(candidates);
  }
  result.entries = std::move(beam);
  result.exhausted = result.entries.size() < k;
  return result;
}

SworSample sbs_estimator_sample(const SequenceModel& model, std::size_t k,
                                RandomStream& stream) {
  if (k < 2) throw std::domain_error("sbs_estimator_sample: beam width must be >= 2");
  SworSample sample = stochastic_beam_search(model, k, stream);
  if (sample.exhausted) {
    sample.kappa = kNegInf;  // whole domain sampled: inclusion was certain
    return sample;
  }
  sample.kappa = sample.entries.back().key;
  sample.entries.pop_back();
  return sample;
}

namespace {

BeamEntry ancestral_sample_counted(const SequenceModel& model, RandomStream& stream,
                                   long long& evaluations) {
  BeamEntry entry{Sequence{}, 0.0, 0.0};
  while (!is_complete(model, entry.seq)) {
    const std::vector<LogValue> logp = model.step(entry.seq);
    ++evaluations;
    const std::size_t pick = gumbel_max(logp, stream);
    entry.phi += logp[pick];
    entry.seq.tokens.push_back(static_cast<Token>(pick));
  }
  entry.key = entry.phi;
  return entry;
}

}  // namespace

BeamEntry ancestral_sample(const SequenceModel& model, RandomStream& stream) {
  long long evaluations = 0;
  return ancestral_sample_counted(model, stream, evaluations);
}

SworSample rejection_swor(const SequenceModel& model, std::size_t k, RandomStream& stream,
                          long long max_draws) {
  if (k < 1) throw std::domain_error("rejection_swor: k must be >= 1");
  SworSample result;
  std::set<Sequence> seen;
  while (result.entries.size() < k) {
    if (result.draws >= max_draws) {
      throw BudgetError("rejection_swor: draw budget exhausted", std::move(result));
    }
    BeamEntry e = ancestral_sample_counted(model, stream, result.evaluations);
    ++result.draws;
    if (seen.insert(e.seq).second) {
      result.entries.push_back(std::move(e));
    }
  }
  return result;
}

SworSample naive_stepwise_swor(const SequenceModel& model, std::size_t k,
                               RandomStream& stream) {
  if (k < 1) throw std::domain_error("naive_stepwise_swor: k must be >= 1");
  SworSample result;
  std::vector<BeamEntry> beam{BeamEntry{Sequence{}, 0.0, 0.0}};
  for (int t = 0; t < model.max_len() + 1; ++t) {
    bool all_complete = true;
    for (const auto& e : beam) {
      if (!entry_complete(model, e)) all_complete = false;
    }
    if (all_complete) break;

    std::vector<BeamEntry> expansions;
    for (const auto& e : beam) {
      if (entry_complete(model, e)) {
        expansions.push_back(e);
        continue;
      }
      const std::vector<LogValue> logp = model.step(e.seq);
      ++result.evaluations;
      for (std::size_t v = 0; v < logp.size(); ++v) {
        if (logp[v] == kNegInf) continue;
        BeamEntry child;
        child.seq = e.seq;
        child.seq.tokens.push_back(static_cast<Token>(v));
        child.phi = e.phi + logp[v];
        expansions.push_back(std::move(child));
      }
    }

    // Fresh without-replacement draw from the renormalized expansion mass.
    std::vector<LogValue> phis(expansions.size());
    for (std::size_t i = 0; i < expansions.size(); ++i) phis[i] = expansions[i].phi;
    const std::size_t take = std::min(k, expansions.size());
    const std::vector<PerturbedKey> perturbed = perturb(phis, stream);
    std::vector<double> keys(perturbed.size());
    for (std::size_t i = 0; i < keys.size(); ++i) keys[i] = perturbed[i].key;
    const std::vector<std::size_t> picked = argtop_k(keys, take);

    std::vector<BeamEntry> next;
    next.reserve(take);
    for (std::size_t idx : picked) {
      BeamEntry e = std::move(expansions[idx]);
      e.key = keys[idx];
      next.push_back(std::move(e));
    }
    beam = std::move(next);
  }
  result.entries = std::move(beam);
  result.exhausted = result.entries.size() < k;
  return result;
}

}  // namespace swor
