#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "swor/stable_math.hpp"

namespace swor {

using Token = std::int32_t;

/// Ordered token sequence. Complete iff it ends in the model's EOS token or
/// has reached the model's maximum length; EOS appears at most once, always
/// in final position.
struct Sequence {
  std::vector<Token> tokens;

  Sequence() = default;
  explicit Sequence(std::vector<Token> t) : tokens(std::move(t)) {}

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  auto operator<=>(const Sequence&) const = default;
};

/// Malformed model file (tree or serialized Markov model).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Locally normalized factorized distribution over sequences: step() returns
/// the conditional log-probabilities of the next token given a prefix, one
/// entry per vocabulary id. step() is a pure function of the prefix and is
/// never called on a complete sequence. Models are immutable after
/// construction and safe for concurrent reads.
class SequenceModel {
 public:
  virtual ~SequenceModel() = default;
  virtual int vocab_size() const = 0;
  virtual int max_len() const = 0;
  virtual Token eos() const = 0;
  virtual std::vector<LogValue> step(const Sequence& prefix) const = 0;
};

bool is_complete(const SequenceModel& model, const Sequence& seq);

/// Total log-probability of a (partial or complete) sequence: the sum of the
/// conditional log-probabilities along its prefix chain. Empty sequence has
/// log-probability 0.
LogValue seq_logprob(const SequenceModel& model, const Sequence& seq);

/// Finite tree distribution given by per-edge conditional probabilities.
/// Nodes with no outgoing edges terminate through a reserved EOS token with
/// conditional probability 1, so every root-to-leaf path becomes a complete
/// sequence ending in EOS.
class ExplicitTreeModel : public SequenceModel {
 public:
  struct Edge {
    int parent = 0;
    int child = 0;
    Token token = 0;
    double prob = 0.0;
  };

  static ExplicitTreeModel from_edges(const std::vector<Edge>& edges);

  int vocab_size() const override { return vocab_size_; }
  int max_len() const override { return max_len_; }
  Token eos() const override { return eos_; }
  std::vector<LogValue> step(const Sequence& prefix) const override;

  int node_count() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    // token -> (child node id, conditional log-probability)
    std::map<Token, std::pair<int, double>> out;
  };

  ExplicitTreeModel() = default;
  int walk(const Sequence& prefix) const;  // node id reached by the prefix

  std::vector<Node> nodes_;
  int vocab_size_ = 0;
  int max_len_ = 0;
  Token eos_ = 0;
};

/// Parses the edge-list tree format: one `parent child token prob` line per
/// edge, `#` comments, root id 0.
ExplicitTreeModel parse_tree_model(std::istream& in);
ExplicitTreeModel load_tree_model(const std::string& path);

/// Character-level Markov chain with additive smoothing, trained by counting.
/// The conditional for a prefix uses its last min(order, length) tokens as
/// context. EOS is never observed in a corpus, so it carries probability
/// alpha / (total + alpha * vocab) under smoothing; a reachable context with
/// no counts (possible only at the corpus tail) terminates with EOS
/// probability 1 when alpha = 0.
class MarkovTextModel : public SequenceModel {
 public:
  int vocab_size() const override { return static_cast<int>(alphabet_.size()) + 1; }
  int max_len() const override { return max_len_; }
  Token eos() const override { return static_cast<Token>(alphabet_.size()); }
  std::vector<LogValue> step(const Sequence& prefix) const override;

  int order() const { return order_; }
  double alpha() const { return alpha_; }
  const std::vector<char>& alphabet() const { return alphabet_; }

  /// Text of a sequence, EOS omitted.
  std::string decode(const Sequence& seq) const;

  void save(std::ostream& out) const;
  static MarkovTextModel load(std::istream& in);

  friend MarkovTextModel train_markov(const std::string& corpus, int order, double alpha,
                                      int max_len);

 private:
  MarkovTextModel() = default;

  int order_ = 1;
  double alpha_ = 0.0;
  int max_len_ = 32;
  std::vector<char> alphabet_;  // token id -> character, sorted
  // context length -> (context token string -> counts per alphabet id)
  std::vector<std::map<std::string, std::vector<long long>>> counts_;
};

MarkovTextModel train_markov(const std::string& corpus, int order, double alpha,
                             int max_len = 32);

/// Rescales every conditional by 1/t and renormalizes (softmax temperature).
std::shared_ptr<const SequenceModel> apply_temperature(
    std::shared_ptr<const SequenceModel> base, double t);

/// Loads a model file, sniffing the format (serialized Markov model or tree
/// edge list).
std::shared_ptr<const SequenceModel> load_model_file(const std::string& path);

}  // namespace swor
