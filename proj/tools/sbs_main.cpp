// Command-line front end: sampling without replacement from sequence models,
// expectation estimation, diversity sweeps, model training, and the built-in
// verification suites. Every command is deterministic in (config, seed).

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swor/estimators.hpp"
#include "swor/metrics.hpp"
#include "swor/replicate.hpp"
#include "swor/search.hpp"
#include "swor/verify.hpp"

using namespace swor;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitInputError = 2;

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';  // escape by doubling
    out += c;
  }
  out += "\"";
  return out;
}

std::string join_tokens(const Sequence& seq) {
  std::string out;
  for (std::size_t i = 0; i < seq.tokens.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(seq.tokens[i]);
  }
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  return parts;
}

std::vector<double> parse_doubles(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const std::string& part : split(s, ',')) {
    if (part.empty()) continue;
    std::size_t pos = 0;
    out.push_back(std::stod(part, &pos));
    if (pos != part.size()) throw std::invalid_argument(std::string("bad ") + what);
  }
  if (out.empty()) throw std::invalid_argument(std::string("empty ") + what);
  return out;
}

std::vector<std::size_t> parse_sizes(const std::string& s, const char* what) {
  std::vector<std::size_t> out;
  for (const std::string& part : split(s, ',')) {
    if (part.empty()) continue;
    const long long v = std::stoll(part);
    if (v < 1) throw std::invalid_argument(std::string("bad ") + what);
    out.push_back(static_cast<std::size_t>(v));
  }
  if (out.empty()) throw std::invalid_argument(std::string("empty ") + what);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SBS_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

// Sink that buffers everything and flushes to a file or stdout at the end, so
// partially failed commands never leave a half-written file behind.
class Output {
 public:
  explicit Output(std::string path) : path_(std::move(path)) {}

  template <typename T>
  Output& operator<<(const T& value) {
    buffer_ << value;
    return *this;
  }

  void flush() {
    if (path_.empty() || path_ == "-") {
      std::cout << buffer_.str();
      return;
    }
    std::ofstream out(path_, std::ios::binary);
    if (!out) throw FormatError("cannot write output file: " + path_);
    out << buffer_.str();
  }

 private:
  std::string path_;
  std::ostringstream buffer_;
};

struct ModelOptions {
  std::string model_path;
  std::string corpus_path;
  int order = 2;
  double alpha = 0.1;
  int max_len = 32;

  void attach(CLI::App* cmd) {
    cmd->add_option("--model", model_path, "model file (tree edge list or trained markov)");
    cmd->add_option("--corpus", corpus_path, "train a markov model from this text file");
    cmd->add_option("--order", order, "markov order (with --corpus)");
    cmd->add_option("--alpha", alpha, "additive smoothing (with --corpus)");
    cmd->add_option("--max-len", max_len, "maximum sequence length (with --corpus)");
  }

  struct Loaded {
    std::shared_ptr<const SequenceModel> base;
    const MarkovTextModel* markov = nullptr;  // for text decoding, when available
  };

  Loaded load() const {
    Loaded out;
    if (!model_path.empty()) {
      out.base = load_model_file(model_path);
    } else if (!corpus_path.empty()) {
      out.base = std::make_shared<MarkovTextModel>(
          train_markov(read_file(corpus_path), order, alpha, max_len));
    } else {
      throw std::invalid_argument("either --model or --corpus is required");
    }
    out.markov = dynamic_cast<const MarkovTextModel*>(out.base.get());
    return out;
  }
};

Sequence parse_reference(const std::string& text) {
  Sequence seq;
  for (const std::string& part : split(text, ' ')) {
    if (part.empty()) continue;
    seq.tokens.push_back(static_cast<Token>(std::stoi(part)));
  }
  if (seq.empty()) throw std::invalid_argument("empty --reference");
  return seq;
}

Sequence default_reference(const SequenceModel& model, std::size_t widest_k) {
  const auto beam = beam_search(model, std::max<std::size_t>(widest_k, 16));
  if (beam.empty()) throw std::invalid_argument("model has no complete sequences");
  return beam.front().seq;
}

void write_preamble(Output& out, const std::string& command, std::uint64_t seed) {
  out << "# generator=" << RandomStream::kGeneratorName << "\n";
  out << "# seed=" << seed << "\n";
  out << "# command=" << command << "\n";
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

/// Counts step() calls of the wrapped model; used to report evaluation cost
/// for the methods whose result type does not carry one.
class CountingModel : public SequenceModel {
 public:
  explicit CountingModel(std::shared_ptr<const SequenceModel> base)
      : base_(std::move(base)) {}
  int vocab_size() const override { return base_->vocab_size(); }
  int max_len() const override { return base_->max_len(); }
  Token eos() const override { return base_->eos(); }
  std::vector<LogValue> step(const Sequence& prefix) const override {
    ++calls_;
    return base_->step(prefix);
  }
  long long calls() const { return calls_; }

 private:
  std::shared_ptr<const SequenceModel> base_;
  mutable long long calls_ = 0;
};

int cmd_sample(const ModelOptions& mopt, const std::string& method, std::size_t k,
               double temperature, bool estimator_mode, long long max_draws,
               std::uint64_t seed, const std::string& out_path) {
  if (estimator_mode && method != "sbs") {
    throw std::invalid_argument("--estimator-mode requires --method sbs");
  }
  const auto loaded = mopt.load();
  const auto model = temperature == 1.0 ? loaded.base
                                        : apply_temperature(loaded.base, temperature);

  Output out(out_path);
  write_preamble(out, "sample method=" + method + " k=" + std::to_string(k) +
                          " temperature=" + fmt(temperature) +
                          " estimator-mode=" + (estimator_mode ? "1" : "0"),
                 seed);

  RandomStream stream(seed);
  std::vector<BeamEntry> entries;
  std::optional<double> kappa;
  long long evaluations = 0;

  if (method == "sbs") {
    if (estimator_mode) {
      const SworSample s = sbs_estimator_sample(*model, k, stream);
      entries = s.entries;
      kappa = s.kappa;
      evaluations = s.evaluations;
    } else {
      const SworSample s = stochastic_beam_search(*model, k, stream);
      entries = s.entries;
      evaluations = s.evaluations;
    }
  } else if (method == "bs") {
    const CountingModel counting(model);
    entries = beam_search(counting, k);
    evaluations = counting.calls();
  } else if (method == "sampling") {
    const CountingModel counting(model);
    for (std::size_t i = 0; i < k; ++i) {
      entries.push_back(ancestral_sample(counting, stream));
    }
    evaluations = counting.calls();
  } else if (method == "rejection") {
    const SworSample s = rejection_swor(*model, k, stream, max_draws);
    entries = s.entries;
    evaluations = s.evaluations;
    out << "# draws=" << s.draws << "\n";
  } else if (method == "naive") {
    const SworSample s = naive_stepwise_swor(*model, k, stream);
    entries = s.entries;
    evaluations = s.evaluations;
  } else {
    throw std::invalid_argument("unknown --method: " + method);
  }

  out << "# evaluations=" << evaluations << "\n";
  if (estimator_mode && kappa.has_value()) {
    out << "# kappa=" << fmt(*kappa) << "\n";
  }
  out << "rank,tokens,text,phi,key\n";
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const std::string text = loaded.markov ? loaded.markov->decode(e.seq) : "";
    out << (i + 1) << "," << csv_field(join_tokens(e.seq)) << "," << csv_field(text) << ","
        << fmt(e.phi) << "," << fmt(e.key) << "\n";
  }
  out.flush();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

double percentile(std::vector<double> xs, double q) {
  std::sort(xs.begin(), xs.end());
  const double h = (static_cast<double>(xs.size()) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= xs.size()) return xs.back();
  return xs[lo] + (h - static_cast<double>(lo)) * (xs[lo + 1] - xs[lo]);
}

int cmd_estimate(const ModelOptions& mopt, const std::string& functional_name,
                 const std::string& reference_text, const std::string& methods_text,
                 const std::string& k_text, const std::string& temps_text,
                 std::size_t replicates, std::uint64_t seed, bool serial,
                 const std::string& out_path) {
  const auto loaded = mopt.load();
  const auto methods = split(methods_text, ',');
  const auto ks = parse_sizes(k_text, "-k list");
  const auto temps = parse_doubles(temps_text, "--temperatures list");
  const ExecMode mode = serial ? ExecMode::kSerial : ExecMode::kParallel;

  if (replicates < 1) throw std::invalid_argument("--replicates must be >= 1");
  for (const auto& m : methods) {
    if (m != "mc" && m != "sbs" && m != "sbs-norm" && m != "bs" && m != "bs-norm") {
      throw std::invalid_argument("unknown method in --methods: " + m);
    }
  }
  if (functional_name != "entropy" && functional_name != "bleu") {
    throw std::invalid_argument("unknown --functional: " + functional_name);
  }

  std::optional<Sequence> reference;
  if (functional_name == "bleu") {
    reference = reference_text.empty()
                    ? default_reference(*loaded.base,
                                        *std::max_element(ks.begin(), ks.end()))
                    : parse_reference(reference_text);
  }

  Output out(out_path);
  write_preamble(out,
                 "estimate functional=" + functional_name + " replicates=" +
                     std::to_string(replicates),
                 seed);
  if (reference) out << "# reference=" << join_tokens(*reference) << "\n";
  out << "method,temperature,k,replicate,value,weight_sum\n";

  std::uint64_t cell_tag = 0;
  for (const std::string& method_name_str : methods) {
    const EstimatorMethod method = method_name_str == "mc" ? EstimatorMethod::kMonteCarlo
                                   : method_name_str == "sbs" ? EstimatorMethod::kSbsRaw
                                   : method_name_str == "sbs-norm"
                                       ? EstimatorMethod::kSbsNormalized
                                   : method_name_str == "bs" ? EstimatorMethod::kBsBound
                                                             : EstimatorMethod::kBsNormalized;
    for (double t : temps) {
      const auto model = t == 1.0 ? loaded.base : apply_temperature(loaded.base, t);
      const Token eos = model->eos();
      const Functional f =
          functional_name == "entropy"
              ? entropy_functional(*model)
              : Functional([&model, &reference, eos](const Sequence& y) {
                  return bleu(y, *reference, 4, eos);
                });
      for (std::size_t k : ks) {
        const std::uint64_t cell_seed = mix64(mix64(seed) ^ (++cell_tag));
        auto report = [&](int replicate, double value, double w) {
          return EstimateReport{method, static_cast<int>(k), t, replicate, value, w};
        };
        const bool has_weight = method == EstimatorMethod::kSbsRaw ||
                                method == EstimatorMethod::kSbsNormalized;

        std::vector<EstimateReport> rows;
        if (method == EstimatorMethod::kBsBound ||
            method == EstimatorMethod::kBsNormalized) {
          const auto beam = beam_search(*model, k);
          const double value =
              bs_bound(f, beam, method == EstimatorMethod::kBsNormalized);
          for (std::size_t r = 0; r < replicates; ++r) {
            rows.push_back(report(static_cast<int>(r), value, 0.0));
          }
        } else if (method == EstimatorMethod::kMonteCarlo) {
          const auto values = run_replicates(
              cell_seed, replicates,
              [&](std::size_t, RandomStream& stream) {
                std::vector<Sequence> sample;
                sample.reserve(k);
                for (std::size_t i = 0; i < k; ++i) {
                  sample.push_back(ancestral_sample(*model, stream).seq);
                }
                return mc_estimate(f, sample);
              },
              mode);
          for (std::size_t r = 0; r < values.size(); ++r) {
            rows.push_back(report(static_cast<int>(r), values[r], 0.0));
          }
        } else {
          if (k < 2) {
            throw std::invalid_argument(
                "sbs estimators need k >= 2 (k - 1 entries are kept)");
          }
          const auto values = run_replicates(
              cell_seed, replicates,
              [&](std::size_t, RandomStream& stream) {
                const SworSample s = sbs_estimator_sample(*model, k, stream);
                const double w = weight_sum(s);
                const double v = method == EstimatorMethod::kSbsRaw
                                     ? priority_estimate(f, s)
                                     : normalized_estimate(f, s);
                return std::pair<double, double>(v, w);
              },
              mode);
          for (std::size_t r = 0; r < values.size(); ++r) {
            rows.push_back(report(static_cast<int>(r), values[r].first, values[r].second));
          }
        }

        std::vector<double> values;
        values.reserve(rows.size());
        for (const EstimateReport& row : rows) {
          out << method_name(row.method) << "," << fmt(row.temperature) << "," << row.k
              << "," << row.replicate << "," << fmt(row.value) << ","
              << (has_weight ? fmt(row.weight_sum) : std::string()) << "\n";
          values.push_back(row.value);
        }
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        out << method_name_str << "," << fmt(t) << "," << k << ",mean," << fmt(mean)
            << ",\n";
        out << method_name_str << "," << fmt(t) << "," << k << ",p2.5,"
            << fmt(percentile(values, 0.025)) << ",\n";
        out << method_name_str << "," << fmt(t) << "," << k << ",p97.5,"
            << fmt(percentile(values, 0.975)) << ",\n";
      }
    }
  }
  out.flush();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// diversity
// ---------------------------------------------------------------------------

int cmd_diversity(const ModelOptions& mopt, const std::string& reference_text,
                  const std::string& methods_text, const std::string& k_text,
                  const std::string& temps_text, std::size_t replicates,
                  std::uint64_t seed, bool serial, const std::string& out_path) {
  const auto loaded = mopt.load();
  const auto methods = split(methods_text, ',');
  const auto ks = parse_sizes(k_text, "-k list");
  const auto temps = parse_doubles(temps_text, "--temperatures list");
  const ExecMode mode = serial ? ExecMode::kSerial : ExecMode::kParallel;

  if (replicates < 1) throw std::invalid_argument("--replicates must be >= 1");
  for (const auto& m : methods) {
    if (m != "bs" && m != "sampling" && m != "sbs" && m != "naive") {
      throw std::invalid_argument("unknown method in --methods: " + m);
    }
  }

  const Sequence reference =
      reference_text.empty()
          ? default_reference(*loaded.base, *std::max_element(ks.begin(), ks.end()))
          : parse_reference(reference_text);

  Output out(out_path);
  write_preamble(out, "diversity replicates=" + std::to_string(replicates), seed);
  out << "# reference=" << join_tokens(reference) << "\n";
  out << "method,param,k,replicate,min_bleu,mean_bleu,max_bleu,diversity\n";

  bool warned_orders = false;
  std::uint64_t cell_tag = 0;
  for (const std::string& method : methods) {
    for (double t : temps) {
      const auto model = t == 1.0 ? loaded.base : apply_temperature(loaded.base, t);
      const Token eos = model->eos();
      for (std::size_t k : ks) {
        const std::uint64_t cell_seed = mix64(mix64(seed) ^ (++cell_tag));
        struct Row {
          double min_bleu = 0.0, mean_bleu = 0.0, max_bleu = 0.0, diversity = 0.0;
          int orders = 4;
        };
        auto score = [&](const std::vector<Sequence>& seqs) {
          Row row;
          row.min_bleu = kInf;
          row.max_bleu = -kInf;
          double total = 0.0;
          for (const Sequence& s : seqs) {
            const double b = bleu(s, reference, 4, eos);
            row.min_bleu = std::min(row.min_bleu, b);
            row.max_bleu = std::max(row.max_bleu, b);
            total += b;
          }
          row.mean_bleu = total / static_cast<double>(seqs.size());
          const MeanDiversity d = mean_diversity(seqs, eos);
          row.diversity = d.value;
          row.orders = d.orders_used;
          return row;
        };

        std::vector<Row> rows;
        if (method == "bs") {
          const auto beam = beam_search(*model, k);
          std::vector<Sequence> seqs;
          for (const auto& e : beam) seqs.push_back(e.seq);
          rows.assign(replicates, score(seqs));
        } else {
          rows = run_replicates(
              cell_seed, replicates,
              [&](std::size_t, RandomStream& stream) {
                std::vector<Sequence> seqs;
                if (method == "sampling") {
                  for (std::size_t i = 0; i < k; ++i) {
                    seqs.push_back(ancestral_sample(*model, stream).seq);
                  }
                } else if (method == "sbs") {
                  for (const auto& e : stochastic_beam_search(*model, k, stream).entries) {
                    seqs.push_back(e.seq);
                  }
                } else {
                  for (const auto& e : naive_stepwise_swor(*model, k, stream).entries) {
                    seqs.push_back(e.seq);
                  }
                }
                return score(seqs);
              },
              mode);
        }

        Row mean;
        mean.min_bleu = mean.mean_bleu = mean.max_bleu = mean.diversity = 0.0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
          if (rows[r].orders < 4 && !warned_orders) {
            out << "# warning: some n-gram orders had no n-grams and were skipped\n";
            warned_orders = true;
          }
          out << method << "," << fmt(t) << "," << k << "," << r << ","
              << fmt(rows[r].min_bleu) << "," << fmt(rows[r].mean_bleu) << ","
              << fmt(rows[r].max_bleu) << "," << fmt(rows[r].diversity) << "\n";
          mean.min_bleu += rows[r].min_bleu;
          mean.mean_bleu += rows[r].mean_bleu;
          mean.max_bleu += rows[r].max_bleu;
          mean.diversity += rows[r].diversity;
        }
        const double n = static_cast<double>(rows.size());
        out << method << "," << fmt(t) << "," << k << ",mean," << fmt(mean.min_bleu / n)
            << "," << fmt(mean.mean_bleu / n) << "," << fmt(mean.max_bleu / n) << ","
            << fmt(mean.diversity / n) << "\n";
      }
    }
  }
  out.flush();
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const std::string& model_path, std::vector<std::string> suites,
               std::uint64_t seed, bool serial) {
  verify::Options opt;
  opt.seed = seed;
  opt.mode = serial ? ExecMode::kSerial : ExecMode::kParallel;
  if (!model_path.empty()) {
    opt.tree = std::make_shared<ExplicitTreeModel>(load_tree_model(model_path));
  }
  if (suites.empty()) suites = verify::suite_names();

  bool ok = true;
  for (const std::string& suite : suites) {
    for (const auto& r : verify::run_suite(suite, opt)) {
      std::cout << verify::format_result(r) << "\n";
      ok = ok && r.pass;
    }
  }
  std::cout << (ok ? "VERIFY PASS" : "VERIFY FAIL") << "\n";
  return ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// train-model
// ---------------------------------------------------------------------------

int cmd_train_model(const std::string& corpus_path, int order, double alpha, int max_len,
                    const std::string& out_path) {
  const MarkovTextModel model =
      train_markov(read_file(corpus_path), order, alpha, max_len);
  std::ostringstream buf;
  model.save(buf);
  Output out(out_path);
  out << buf.str();
  out.flush();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sampling sequences without replacement via stochastic beam search"};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  app.add_option("--seed", seed, "random seed (default: SBS_SEED env var or 1)");

  // sample
  auto* sample = app.add_subcommand("sample", "draw sequences from a model");
  ModelOptions sample_model;
  sample_model.attach(sample);
  std::string sample_method = "sbs";
  std::size_t sample_k = 4;
  double sample_temperature = 1.0;
  bool sample_estimator_mode = false;
  long long sample_max_draws = 100000;
  std::string sample_out;
  sample->add_option("--method", sample_method, "sbs|bs|sampling|rejection|naive");
  sample->add_option("-k,--k", sample_k, "sample/beam size");
  sample->add_option("--temperature", sample_temperature, "softmax temperature");
  sample->add_flag("--estimator-mode", sample_estimator_mode,
                   "keep k-1 entries and report kappa (sbs only)");
  sample->add_option("--max-draws", sample_max_draws, "rejection draw budget");
  sample->add_option("-o,--output", sample_out, "output file (default stdout)");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "replicate expectation estimators");
  ModelOptions est_model;
  est_model.attach(estimate);
  std::string est_functional = "entropy";
  std::string est_reference;
  std::string est_methods = "mc,sbs,sbs-norm,bs,bs-norm";
  std::string est_k = "4";
  std::string est_temps = "1";
  std::size_t est_replicates = 100;
  bool est_serial = false;
  std::string est_out;
  estimate->add_option("--functional", est_functional, "entropy|bleu");
  estimate->add_option("--reference", est_reference,
                       "reference token ids for bleu (default: wide-beam argmax)");
  estimate->add_option("--methods", est_methods, "comma list of mc,sbs,sbs-norm,bs,bs-norm");
  estimate->add_option("-k,--k", est_k, "comma list of sample sizes");
  estimate->add_option("--temperatures", est_temps, "comma list of temperatures");
  estimate->add_option("--replicates", est_replicates, "replicates per cell");
  estimate->add_flag("--serial", est_serial, "run replicates on the serial reference path");
  estimate->add_option("-o,--output", est_out, "output file (default stdout)");

  // diversity
  auto* diversity = app.add_subcommand("diversity", "bleu-versus-diversity sweeps");
  ModelOptions div_model;
  div_model.attach(diversity);
  std::string div_reference;
  std::string div_methods = "bs,sampling,sbs";
  std::string div_k = "5";
  std::string div_temps = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8";
  std::size_t div_replicates = 20;
  bool div_serial = false;
  std::string div_out;
  diversity->add_option("--reference", div_reference,
                        "reference token ids (default: wide-beam argmax)");
  diversity->add_option("--methods", div_methods, "comma list of bs,sampling,sbs,naive");
  diversity->add_option("-k,--k", div_k, "comma list of sample sizes");
  diversity->add_option("--temperatures", div_temps, "comma list of temperatures");
  diversity->add_option("--replicates", div_replicates, "replicates per cell");
  diversity->add_flag("--serial", div_serial, "run replicates on the serial reference path");
  diversity->add_option("-o,--output", div_out, "output file (default stdout)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "run the verification suites");
  std::string verify_model;
  std::vector<std::string> verify_suites;
  bool verify_serial = false;
  verify_cmd->add_option("--model", verify_model, "tree model file (default: built-in)");
  verify_cmd->add_option("--suite", verify_suites, "suite name (repeatable; default: all)");
  verify_cmd->add_flag("--serial", verify_serial, "run on the serial reference path");

  // train-model
  auto* train = app.add_subcommand("train-model", "train and serialize a markov model");
  std::string train_corpus;
  int train_order = 2;
  double train_alpha = 0.1;
  int train_max_len = 32;
  std::string train_out;
  train->add_option("--corpus", train_corpus, "training text file")->required();
  train->add_option("--order", train_order, "markov order");
  train->add_option("--alpha", train_alpha, "additive smoothing");
  train->add_option("--max-len", train_max_len, "maximum sequence length");
  train->add_option("-o,--output", train_out, "output model file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (sample->parsed()) {
      return cmd_sample(sample_model, sample_method, sample_k, sample_temperature,
                        sample_estimator_mode, sample_max_draws, seed, sample_out);
    }
    if (estimate->parsed()) {
      return cmd_estimate(est_model, est_functional, est_reference, est_methods, est_k,
                          est_temps, est_replicates, seed, est_serial, est_out);
    }
    if (diversity->parsed()) {
      return cmd_diversity(div_model, div_reference, div_methods, div_k, div_temps,
                           div_replicates, seed, div_serial, div_out);
    }
    if (verify_cmd->parsed()) {
      return cmd_verify(verify_model, verify_suites, seed, verify_serial);
    }
    if (train->parsed()) {
      return cmd_train_model(train_corpus, train_order, train_alpha, train_max_len,
                             train_out);
    }
  } catch (const BudgetError& e) {
    std::cerr << "error: " << e.what() << " (" << e.partial.entries.size()
              << " distinct sequences found)\n";
    return kExitFailure;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInputError;
}
