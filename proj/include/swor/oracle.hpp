#pragma once

#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "swor/estimators.hpp"
#include "swor/random.hpp"
#include "swor/seqmodel.hpp"

namespace swor {

/// Exhaustive table of every complete sequence of a small model with its
/// log-probability, in depth-first (lexicographic) order.
class LeafTable {
 public:
  LeafTable(std::vector<Sequence> seqs, std::vector<LogValue> phis);

  std::size_t size() const { return seqs_.size(); }
  const std::vector<Sequence>& seqs() const { return seqs_; }
  const std::vector<LogValue>& phis() const { return phis_; }
  std::vector<double> probs() const;
  std::optional<std::size_t> index_of(const Sequence& seq) const;

 private:
  std::vector<Sequence> seqs_;
  std::vector<LogValue> phis_;
  std::map<Sequence, std::size_t> index_;
};

/// Enumerates all complete sequences by depth-first expansion. Throws
/// BudgetError-like domain error if the model has more than max_total.
LeafTable enumerate_leaves(const SequenceModel& model, std::size_t max_total = 1000000);

/// Exact probability of drawing the given ordered leaf indices without
/// replacement: the product of sequentially renormalized probabilities.
double exact_swor_prob(const LeafTable& table, std::span<const std::size_t> ordered);

/// Exact expectation of f under the table distribution.
double exact_expectation(const Functional& f, const LeafTable& table);

/// Half the L1 distance between empirical frequencies and exact
/// probabilities over the same outcome space.
double tv_distance(std::span<const long long> counts, std::span<const double> probs);

/// Pearson statistic sum (observed - expected)^2 / expected and its degrees
/// of freedom (cells - 1). Every exact probability must be positive.
std::pair<double, int> chi_square_stat(std::span<const long long> counts,
                                       std::span<const double> probs);

/// One bottom-up reference draw: independent Gumbel(phi_i) keys for every
/// leaf, flat, consuming one uniform per leaf in table order. Internal-node
/// keys are maxima over descendant leaves; taking them from these draws is
/// the coupling the top-down sampler must match in distribution.
std::vector<double> sample_leaf_keys(const LeafTable& table, RandomStream& stream);

/// Distinct proper prefixes of the table's sequences with their total
/// log-probability mass and the leaf indices below them.
struct PrefixMass {
  Sequence prefix;
  LogValue phi = 0.0;
  std::vector<std::size_t> leaves;
};
std::vector<PrefixMass> prefix_table(const LeafTable& table);

}  // namespace swor
