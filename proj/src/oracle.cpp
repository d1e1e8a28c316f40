#include "swor/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "swor/gumbel.hpp"

namespace swor {

LeafTable::LeafTable(std::vector<Sequence> seqs, std::vector<LogValue> phis)
    : seqs_(std::move(seqs)), phis_(std::move(phis)) {
  if (seqs_.size() != phis_.size()) {
    throw std::domain_error("LeafTable: sequence/phi size mismatch");
  }
  for (std::size_t i = 0; i < seqs_.size(); ++i) {
    if (!index_.emplace(seqs_[i], i).second) {
      throw std::domain_error("LeafTable: duplicate sequence");
    }
  }
}

std::vector<double> LeafTable::probs() const {
  std::vector<double> p(phis_.size());
  for (std::size_t i = 0; i < phis_.size(); ++i) p[i] = std::exp(phis_[i]);
  return p;
}

std::optional<std::size_t> LeafTable::index_of(const Sequence& seq) const {
  auto it = index_.find(seq);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

namespace {

void enumerate_rec(const SequenceModel& model, Sequence& prefix, LogValue phi,
                   std::size_t max_total, std::vector<Sequence>& seqs,
                   std::vector<LogValue>& phis) {
  if (is_complete(model, prefix)) {
    if (seqs.size() >= max_total) {
      throw std::domain_error("enumerate_leaves: budget exceeded");
    }
    seqs.push_back(prefix);
    phis.push_back(phi);
    return;
  }
  const std::vector<LogValue> logp = model.step(prefix);
  for (std::size_t v = 0; v < logp.size(); ++v) {
    if (logp[v] == kNegInf) continue;
    prefix.tokens.push_back(static_cast<Token>(v));
    enumerate_rec(model, prefix, phi + logp[v], max_total, seqs, phis);
    prefix.tokens.pop_back();
  }
}

}  // namespace

LeafTable enumerate_leaves(const SequenceModel& model, std::size_t max_total) {
  std::vector<Sequence> seqs;
  std::vector<LogValue> phis;
  Sequence prefix;
  enumerate_rec(model, prefix, 0.0, max_total, seqs, phis);
  return LeafTable(std::move(seqs), std::move(phis));
}

double exact_swor_prob(const LeafTable& table, std::span<const std::size_t> ordered) {
  std::set<std::size_t> seen;
  for (std::size_t idx : ordered) {
    if (idx >= table.size()) throw std::domain_error("exact_swor_prob: index out of range");
    if (!seen.insert(idx).second) {
      throw std::domain_error("exact_swor_prob: duplicate index");
    }
  }
  const std::vector<double> p = table.probs();
  double remaining = 0.0;
  for (double pi : p) remaining += pi;
  double prob = 1.0;
  for (std::size_t idx : ordered) {
    prob *= p[idx] / remaining;
    remaining -= p[idx];
  }
  return prob;
}

double exact_expectation(const Functional& f, const LeafTable& table) {
  double sum = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    sum += std::exp(table.phis()[i]) * f(table.seqs()[i]);
  }
  return sum;
}

double tv_distance(std::span<const long long> counts, std::span<const double> probs) {
  if (counts.size() != probs.size()) {
    throw std::domain_error("tv_distance: outcome spaces differ");
  }
  long long total = 0;
  for (long long c : counts) {
    if (c < 0) throw std::domain_error("tv_distance: negative count");
    total += c;
  }
  if (total == 0) throw std::domain_error("tv_distance: no observations");
  double tv = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    tv += std::abs(static_cast<double>(counts[i]) / static_cast<double>(total) - probs[i]);
  }
  return tv / 2.0;
}

std::pair<double, int> chi_square_stat(std::span<const long long> counts,
                                       std::span<const double> probs) {
  if (counts.size() != probs.size()) {
    throw std::domain_error("chi_square_stat: outcome spaces differ");
  }
  long long total = 0;
  for (long long c : counts) total += c;
  if (total <= 0) throw std::domain_error("chi_square_stat: no observations");
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (!(probs[i] > 0.0)) {
      throw std::domain_error("chi_square_stat: zero expected cell");
    }
    const double expected = static_cast<double>(total) * probs[i];
    const double diff = static_cast<double>(counts[i]) - expected;
    stat += diff * diff / expected;
  }
  return {stat, static_cast<int>(counts.size()) - 1};
}

std::vector<double> sample_leaf_keys(const LeafTable& table, RandomStream& stream) {
  std::vector<double> keys(table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    keys[i] = sample_gumbel(stream, table.phis()[i]);
  }
  return keys;
}

std::vector<PrefixMass> prefix_table(const LeafTable& table) {
  std::map<Sequence, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& tokens = table.seqs()[i].tokens;
    for (std::size_t len = 0; len < tokens.size(); ++len) {
      Sequence prefix(std::vector<Token>(tokens.begin(),
                                         tokens.begin() + static_cast<std::ptrdiff_t>(len)));
      groups[std::move(prefix)].push_back(i);
    }
  }
  std::vector<PrefixMass> result;
  result.reserve(groups.size());
  for (auto& [prefix, leaves] : groups) {
    std::vector<LogValue> phis;
    phis.reserve(leaves.size());
    for (std::size_t i : leaves) phis.push_back(table.phis()[i]);
    PrefixMass pm;
    pm.prefix = prefix;
    pm.phi = logsumexp(phis);
    pm.leaves = std::move(leaves);
    result.push_back(std::move(pm));
  }
  return result;
}

}  // namespace swor
