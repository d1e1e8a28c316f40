#include "swor/seqmodel.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace swor {

bool is_complete(const SequenceModel& model, const Sequence& seq) {
  if (static_cast<int>(seq.size()) >= model.max_len()) return true;
  return !seq.empty() && seq.tokens.back() == model.eos();
}

LogValue seq_logprob(const SequenceModel& model, const Sequence& seq) {
  if (static_cast<int>(seq.size()) > model.max_len()) {
    throw std::domain_error("seq_logprob: sequence longer than model max length");
  }
  LogValue total = 0.0;
  Sequence prefix;
  prefix.tokens.reserve(seq.size());
  for (Token t : seq.tokens) {
    if (t < 0 || t >= model.vocab_size()) {
      throw std::domain_error("seq_logprob: token outside the vocabulary");
    }
    if (is_complete(model, prefix)) {
      throw std::domain_error("seq_logprob: token follows a complete sequence");
    }
    total += model.step(prefix)[static_cast<std::size_t>(t)];
    prefix.tokens.push_back(t);
  }
  return total;
}

// ---------------------------------------------------------------------------
// ExplicitTreeModel
// ---------------------------------------------------------------------------

ExplicitTreeModel ExplicitTreeModel::from_edges(const std::vector<Edge>& edges) {
  if (edges.empty()) throw FormatError("tree model: no edges");

  int max_id = 0;
  Token max_token = 0;
  for (const Edge& e : edges) {
    if (e.parent < 0 || e.child < 0) throw FormatError("tree model: negative node id");
    if (e.token < 0) throw FormatError("tree model: negative token id");
    if (!(e.prob >= 0.0) || !(e.prob <= 1.0)) {
      throw FormatError("tree model: conditional probability outside [0, 1]");
    }
    max_id = std::max({max_id, e.parent, e.child});
    max_token = std::max(max_token, e.token);
  }

  ExplicitTreeModel model;
  model.nodes_.resize(static_cast<std::size_t>(max_id) + 1);
  std::vector<int> parent_of(model.nodes_.size(), -1);
  for (const Edge& e : edges) {
    if (e.child == 0) throw FormatError("tree model: root 0 cannot be a child");
    if (parent_of[static_cast<std::size_t>(e.child)] != -1) {
      throw FormatError("tree model: duplicate child id (node has two parents)");
    }
    parent_of[static_cast<std::size_t>(e.child)] = e.parent;
    auto& out = model.nodes_[static_cast<std::size_t>(e.parent)].out;
    if (out.count(e.token) != 0) {
      throw FormatError("tree model: duplicate token on one parent");
    }
    out[e.token] = {e.child, e.prob > 0.0 ? std::log(e.prob) : kNegInf};
  }

  // Reachability from the root doubles as the cycle check: every node id must
  // be visited exactly once.
  std::vector<char> seen(model.nodes_.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int visited = 0;
  int depth_max = 0;
  std::vector<int> depth(model.nodes_.size(), 0);
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    ++visited;
    depth_max = std::max(depth_max, depth[static_cast<std::size_t>(id)]);
    for (const auto& [tok, edge] : model.nodes_[static_cast<std::size_t>(id)].out) {
      const int child = edge.first;
      if (seen[static_cast<std::size_t>(child)]) {
        throw FormatError("tree model: cycle detected");
      }
      seen[static_cast<std::size_t>(child)] = 1;
      depth[static_cast<std::size_t>(child)] = depth[static_cast<std::size_t>(id)] + 1;
      stack.push_back(child);
    }
  }
  if (visited != static_cast<int>(model.nodes_.size())) {
    throw FormatError("tree model: node unreachable from the root");
  }

  for (std::size_t id = 0; id < model.nodes_.size(); ++id) {
    const auto& out = model.nodes_[id].out;
    if (out.empty()) continue;  // leaf
    double sum = 0.0;
    for (const auto& [tok, edge] : out) sum += std::exp(edge.second);
    if (std::abs(sum - 1.0) > 1e-6) {
      throw FormatError("tree model: conditionals of a node do not sum to 1");
    }
  }

  model.eos_ = max_token + 1;
  model.vocab_size_ = max_token + 2;
  model.max_len_ = depth_max + 1;  // terminal EOS step
  return model;
}

int ExplicitTreeModel::walk(const Sequence& prefix) const {
  int id = 0;
  for (Token t : prefix.tokens) {
    const auto& out = nodes_[static_cast<std::size_t>(id)].out;
    auto it = out.find(t);
    if (it == out.end()) {
      throw std::domain_error("tree model: prefix not reachable");
    }
    id = it->second.first;
  }
  return id;
}

std::vector<LogValue> ExplicitTreeModel::step(const Sequence& prefix) const {
  const int id = walk(prefix);
  std::vector<LogValue> logp(static_cast<std::size_t>(vocab_size_), kNegInf);
  const auto& out = nodes_[static_cast<std::size_t>(id)].out;
  if (out.empty()) {
    logp[static_cast<std::size_t>(eos_)] = 0.0;  // leaf: terminate surely
    return logp;
  }
  for (const auto& [tok, edge] : out) {
    logp[static_cast<std::size_t>(tok)] = edge.second;
  }
  return logp;
}

ExplicitTreeModel parse_tree_model(std::istream& in) {
  std::vector<ExplicitTreeModel::Edge> edges;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    ExplicitTreeModel::Edge e;
    if (!(ls >> e.parent >> e.child >> e.token >> e.prob)) {
      throw FormatError("tree model: malformed edge at line " + std::to_string(lineno));
    }
    std::string rest;
    if (ls >> rest) {
      throw FormatError("tree model: trailing garbage at line " + std::to_string(lineno));
    }
    edges.push_back(e);
  }
  return ExplicitTreeModel::from_edges(edges);
}

ExplicitTreeModel load_tree_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open tree model file: " + path);
  return parse_tree_model(in);
}

// ---------------------------------------------------------------------------
// MarkovTextModel
// ---------------------------------------------------------------------------

MarkovTextModel train_markov(const std::string& corpus, int order, double alpha,
                             int max_len) {
  if (corpus.empty()) throw std::domain_error("train_markov: empty corpus");
  if (order < 1) throw std::domain_error("train_markov: order must be >= 1");
  if (!(alpha >= 0.0)) throw std::domain_error("train_markov: alpha must be >= 0");
  if (max_len < 1) throw std::domain_error("train_markov: max_len must be >= 1");

  MarkovTextModel model;
  model.order_ = order;
  model.alpha_ = alpha;
  model.max_len_ = max_len;

  std::set<char> chars(corpus.begin(), corpus.end());
  model.alphabet_.assign(chars.begin(), chars.end());
  if (model.alphabet_.size() > 200) {
    throw std::domain_error("train_markov: alphabet too large");
  }

  std::vector<Token> ids(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    ids[i] = static_cast<Token>(
        std::lower_bound(model.alphabet_.begin(), model.alphabet_.end(), corpus[i]) -
        model.alphabet_.begin());
  }

  model.counts_.resize(static_cast<std::size_t>(order) + 1);
  const std::size_t a = model.alphabet_.size();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::size_t len = std::min<std::size_t>(static_cast<std::size_t>(order), i);
    std::string ctx;
    for (std::size_t j = i - len; j < i; ++j) ctx.push_back(static_cast<char>(ids[j]));
    auto& row = model.counts_[len][ctx];
    if (row.empty()) row.assign(a, 0);
    ++row[static_cast<std::size_t>(ids[i])];
  }
  return model;
}

std::vector<LogValue> MarkovTextModel::step(const Sequence& prefix) const {
  const std::size_t a = alphabet_.size();
  const std::size_t v = a + 1;
  std::vector<LogValue> logp(v, kNegInf);

  const std::size_t len =
      std::min<std::size_t>(static_cast<std::size_t>(order_), prefix.size());
  std::string ctx;
  for (std::size_t j = prefix.size() - len; j < prefix.size(); ++j) {
    const Token t = prefix.tokens[j];
    if (t < 0 || t >= static_cast<Token>(a)) {
      throw std::domain_error("markov model: prefix token outside the alphabet");
    }
    ctx.push_back(static_cast<char>(t));
  }

  const auto& table = counts_[len];
  auto it = table.find(ctx);
  long long total = 0;
  const std::vector<long long>* row = nullptr;
  if (it != table.end()) {
    row = &it->second;
    for (long long c : *row) total += c;
  }

  if (total == 0 && alpha_ == 0.0) {
    logp[a] = 0.0;  // dead end: terminate surely
    return logp;
  }

  const double denom = static_cast<double>(total) + alpha_ * static_cast<double>(v);
  for (std::size_t i = 0; i < a; ++i) {
    const double num = (row ? static_cast<double>((*row)[i]) : 0.0) + alpha_;
    logp[i] = num > 0.0 ? std::log(num) - std::log(denom) : kNegInf;
  }
  logp[a] = alpha_ > 0.0 ? std::log(alpha_) - std::log(denom) : kNegInf;
  return logp;
}

std::string MarkovTextModel::decode(const Sequence& seq) const {
  std::string out;
  for (Token t : seq.tokens) {
    if (t == eos()) continue;
    if (t < 0 || t >= static_cast<Token>(alphabet_.size())) {
      throw std::domain_error("markov model: token outside the alphabet");
    }
    out.push_back(alphabet_[static_cast<std::size_t>(t)]);
  }
  return out;
}

namespace {

std::string format_hexfloat(double x) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof(buf), "%a", x);
  return std::string(buf, static_cast<std::size_t>(n));
}

}  // namespace

void MarkovTextModel::save(std::ostream& out) const {
  out << "markov 1\n";
  out << "order " << order_ << "\n";
  out << "alpha " << format_hexfloat(alpha_) << "\n";
  out << "maxlen " << max_len_ << "\n";
  out << "alphabet " << alphabet_.size();
  for (char c : alphabet_) out << ' ' << static_cast<int>(static_cast<unsigned char>(c));
  out << "\n";
  std::size_t rows = 0;
  for (const auto& table : counts_) rows += table.size();
  out << "rows " << rows << "\n";
  for (std::size_t len = 0; len < counts_.size(); ++len) {
    for (const auto& [ctx, row] : counts_[len]) {
      out << len;
      for (char c : ctx) out << ' ' << static_cast<int>(static_cast<unsigned char>(c));
      out << " :";
      for (long long c : row) out << ' ' << c;
      out << "\n";
    }
  }
}

MarkovTextModel MarkovTextModel::load(std::istream& in) {
  auto fail = [](const std::string& what) -> void {
    throw FormatError("markov model: " + what);
  };

  MarkovTextModel model;
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != "markov" || version != 1) fail("bad header");
  if (!(in >> tag >> model.order_) || tag != "order" || model.order_ < 1) fail("bad order");
  std::string alpha_text;
  if (!(in >> tag >> alpha_text) || tag != "alpha") fail("bad alpha");
  model.alpha_ = std::strtod(alpha_text.c_str(), nullptr);
  if (!(model.alpha_ >= 0.0)) fail("bad alpha value");
  if (!(in >> tag >> model.max_len_) || tag != "maxlen" || model.max_len_ < 1) {
    fail("bad maxlen");
  }
  std::size_t asize = 0;
  if (!(in >> tag >> asize) || tag != "alphabet") fail("bad alphabet header");
  model.alphabet_.resize(asize);
  for (auto& c : model.alphabet_) {
    int code = 0;
    if (!(in >> code) || code < 0 || code > 255) fail("bad alphabet code point");
    c = static_cast<char>(code);
  }
  std::size_t rows = 0;
  if (!(in >> tag >> rows) || tag != "rows") fail("bad rows header");
  model.counts_.resize(static_cast<std::size_t>(model.order_) + 1);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t len = 0;
    if (!(in >> len) || len > static_cast<std::size_t>(model.order_)) fail("bad row length");
    std::string ctx;
    for (std::size_t j = 0; j < len; ++j) {
      int code = 0;
      if (!(in >> code) || code < 0 || code >= static_cast<int>(asize)) fail("bad context id");
      ctx.push_back(static_cast<char>(code));
    }
    std::string sep;
    if (!(in >> sep) || sep != ":") fail("bad row separator");
    std::vector<long long> row(asize, 0);
    for (auto& c : row) {
      if (!(in >> c) || c < 0) fail("bad count");
    }
    if (!model.counts_[len].emplace(std::move(ctx), std::move(row)).second) {
      fail("duplicate context row");
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// Temperature wrapper
// ---------------------------------------------------------------------------

namespace {

class TemperatureModel : public SequenceModel {
 public:
  TemperatureModel(std::shared_ptr<const SequenceModel> base, double t)
      : base_(std::move(base)), inv_t_(1.0 / t) {}

  int vocab_size() const override { return base_->vocab_size(); }
  int max_len() const override { return base_->max_len(); }
  Token eos() const override { return base_->eos(); }

  std::vector<LogValue> step(const Sequence& prefix) const override {
    std::vector<LogValue> logp = base_->step(prefix);
    for (auto& v : logp) {
      if (v != kNegInf) v *= inv_t_;
    }
    const LogValue norm = logsumexp(logp);
    for (auto& v : logp) {
      if (v != kNegInf) v -= norm;
    }
    return logp;
  }

 private:
  std::shared_ptr<const SequenceModel> base_;
  double inv_t_;
};

}  // namespace

std::shared_ptr<const SequenceModel> apply_temperature(
    std::shared_ptr<const SequenceModel> base, double t) {
  if (!(t > 0.0)) throw std::domain_error("apply_temperature: t must be > 0");
  if (!base) throw std::domain_error("apply_temperature: null model");
  return std::make_shared<TemperatureModel>(std::move(base), t);
}

std::shared_ptr<const SequenceModel> load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open model file: " + path);
  std::string first_word;
  in >> first_word;
  in.seekg(0);
  if (first_word == "markov") {
    return std::make_shared<MarkovTextModel>(MarkovTextModel::load(in));
  }
  return std::make_shared<ExplicitTreeModel>(parse_tree_model(in));
}

}  // namespace swor
