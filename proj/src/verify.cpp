#include "swor/verify.hpp"

#include <quadmath.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "swor/estimators.hpp"
#include "swor/gumbel.hpp"
#include "swor/metrics.hpp"
#include "swor/oracle.hpp"
#include "swor/search.hpp"
#include "swor/truncated_gumbel.hpp"

namespace swor::verify {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CheckResult check(std::string suite, std::string name, double measured, double threshold,
                  CheckResult::Cmp cmp, std::string note = "") {
  CheckResult r;
  r.suite = std::move(suite);
  r.name = std::move(name);
  r.measured = measured;
  r.threshold = threshold;
  r.cmp = cmp;
  switch (cmp) {
    case CheckResult::Cmp::kLess: r.pass = measured < threshold; break;
    case CheckResult::Cmp::kLessEq: r.pass = measured <= threshold; break;
    case CheckResult::Cmp::kGreater: r.pass = measured > threshold; break;
  }
  r.note = std::move(note);
  return r;
}

std::shared_ptr<const ExplicitTreeModel> pick_tree(const Options& opt) {
  return opt.tree ? opt.tree : demo_tree8();
}

// Flattened outcome space of ordered pairs of distinct leaves.
struct PairSpace {
  std::size_t n = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<double> probs;

  explicit PairSpace(const LeafTable& table) : n(table.size()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        pairs.emplace_back(i, j);
        const std::size_t ordered[2] = {i, j};
        probs.push_back(exact_swor_prob(table, ordered));
      }
    }
  }

  std::size_t cell(std::size_t i, std::size_t j) const {
    // pairs are emitted in (i, j) lexicographic order with the diagonal removed
    return i * (n - 1) + (j > i ? j - 1 : j);
  }
};

std::size_t leaf_of(const LeafTable& table, const Sequence& seq, const char* who) {
  const auto idx = table.index_of(seq);
  if (!idx) throw std::logic_error(std::string(who) + ": sequence missing from leaf table");
  return *idx;
}

double tv_between_counts(std::span<const long long> a, std::span<const long long> b) {
  if (a.size() != b.size()) throw std::domain_error("tv_between_counts: spaces differ");
  long long na = std::accumulate(a.begin(), a.end(), 0LL);
  long long nb = std::accumulate(b.begin(), b.end(), 0LL);
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    tv += std::abs(static_cast<double>(a[i]) / static_cast<double>(na) -
                   static_cast<double>(b[i]) / static_cast<double>(nb));
  }
  return tv / 2.0;
}

double sample_mean(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  const double mean = sample_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return ss / static_cast<double>(xs.size() - 1);
}

// Kolmogorov-Smirnov distance of sorted samples against a CDF.
template <typename Cdf>
double ks_distance(std::vector<double> samples, Cdf cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return d;
}

// Direct exponential form of the max-shift transform; test oracle only, valid
// when no intermediate exp() degenerates.
std::vector<double> shift_to_max_naive(std::span<const double> keys, double t_max) {
  double z = kNegInf;
  for (double k : keys) z = std::max(z, k);
  std::vector<double> out(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out[i] = -std::log(std::exp(-t_max) - std::exp(-z) + std::exp(-keys[i]));
  }
  return out;
}

// Lexicographic rank of a permutation of {0..n-1}.
std::size_t permutation_rank(std::span<const std::size_t> perm) {
  std::size_t rank = 0;
  const std::size_t n = perm.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t smaller = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (perm[j] < perm[i]) ++smaller;
    }
    std::size_t fact = 1;
    for (std::size_t m = 2; m <= n - 1 - i; ++m) fact *= m;
    rank += smaller * fact;
  }
  return rank;
}

constexpr double kEntropyDemo8 = 1.9172155185650603;  // -sum p ln p of the 8 leaves

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

std::vector<CheckResult> suite_swor_law(const Options& opt) {
  const auto start = Clock::now();
  const auto tree = pick_tree(opt);
  const LeafTable table = enumerate_leaves(*tree);
  const PairSpace space(table);
  const std::vector<LogValue> phis = table.phis();

  constexpr std::size_t kRuns = 200000;
  const auto counts = tally_outcomes(
      opt.seed + 101, kRuns, space.pairs.size(),
      [&](std::size_t, RandomStream& stream) {
        const auto picked = gumbel_top_k(phis, 2, stream);
        return space.cell(picked[0], picked[1]);
      },
      opt.mode);

  const double tv = tv_distance(counts, space.probs);
  std::vector<CheckResult> out;
  out.push_back(check("swor-law", "tv-flat-topk-vs-exact", tv, 0.01, CheckResult::Cmp::kLess,
                      "ordered pairs, k=2, N=2e5"));
  out.push_back(check("swor-law", "runtime-seconds", seconds_since(start), 10.0,
                      CheckResult::Cmp::kLess));
  return out;
}

struct SbsRunOutcome {
  std::size_t cell = 0;
  double coupling_gap = 0.0;
  double child_excess = kNegInf;
  long long evaluations = 0;
};

std::vector<CheckResult> suite_sbs_law(const Options& opt) {
  const auto start = Clock::now();
  const auto tree = pick_tree(opt);
  const LeafTable table = enumerate_leaves(*tree);
  const PairSpace space(table);
  const std::vector<LogValue> phis = table.phis();

  constexpr std::size_t kRuns = 200000;
  const auto runs = run_replicates(
      opt.seed + 102, kRuns,
      [&](std::size_t, RandomStream& stream) {
        SbsStats stats;
        const SworSample sample = stochastic_beam_search(*tree, 2, stream, &stats);
        SbsRunOutcome o;
        o.cell = space.cell(leaf_of(table, sample.entries.at(0).seq, "sbs-law"),
                            leaf_of(table, sample.entries.at(1).seq, "sbs-law"));
        o.coupling_gap = stats.max_coupling_gap;
        o.child_excess = stats.max_child_excess;
        o.evaluations = sample.evaluations;
        return o;
      },
      opt.mode);

  std::vector<long long> sbs_counts(space.pairs.size(), 0);
  double max_gap = 0.0;
  double max_excess = kNegInf;
  long long max_evals = 0;
  for (const auto& r : runs) {
    ++sbs_counts[r.cell];
    max_gap = std::max(max_gap, r.coupling_gap);
    max_excess = std::max(max_excess, r.child_excess);
    max_evals = std::max(max_evals, r.evaluations);
  }

  const auto flat_counts = tally_outcomes(
      opt.seed + 103, kRuns, space.pairs.size(),
      [&](std::size_t, RandomStream& stream) {
        const auto picked = gumbel_top_k(phis, 2, stream);
        return space.cell(picked[0], picked[1]);
      },
      opt.mode);

  std::vector<CheckResult> out;
  out.push_back(check("sbs-law", "tv-sbs-vs-exact", tv_distance(sbs_counts, space.probs),
                      0.01, CheckResult::Cmp::kLess, "ordered pairs, k=2, N=2e5"));
  out.push_back(check("sbs-law", "tv-sbs-vs-flat-topk",
                      tv_between_counts(sbs_counts, flat_counts), 0.01,
                      CheckResult::Cmp::kLess));
  out.push_back(check("sbs-law", "coupling-gap-max", max_gap, 1e-9,
                      CheckResult::Cmp::kLess, "|max child key - parent key| per expansion"));
  out.push_back(check("sbs-law", "child-key-excess-max", max_excess, 0.0,
                      CheckResult::Cmp::kLessEq, "child keys never exceed the parent key"));
  out.push_back(check("sbs-law", "evaluations-max",
                      static_cast<double>(max_evals),
                      static_cast<double>(2 * tree->max_len()), CheckResult::Cmp::kLessEq,
                      "model calls bounded by k * max_len"));
  out.push_back(check("sbs-law", "runtime-seconds", seconds_since(start), 60.0,
                      CheckResult::Cmp::kLess));
  return out;
}

std::vector<CheckResult> suite_ranking(const Options& opt) {
  const auto tree = demo_tree4();
  const LeafTable table = enumerate_leaves(*tree);
  const std::size_t n = table.size();

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<double> probs;
  std::vector<std::vector<std::size_t>> perms;
  do {
    perms.push_back(perm);
    probs.push_back(exact_swor_prob(table, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));

  constexpr std::size_t kRuns = 100000;
  const auto counts = tally_outcomes(
      opt.seed + 104, kRuns, probs.size(),
      [&](std::size_t, RandomStream& stream) {
        const SworSample sample = stochastic_beam_search(*tree, n, stream);
        std::vector<std::size_t> order;
        order.reserve(n);
        for (const auto& e : sample.entries) {
          order.push_back(leaf_of(table, e.seq, "ranking"));
        }
        if (order.size() != n) throw std::logic_error("ranking: incomplete permutation");
        return permutation_rank(order);
      },
      opt.mode);

  const auto [stat, dof] = chi_square_stat(counts, probs);
  std::vector<CheckResult> out;
  out.push_back(check("ranking", "chi-square-24-orderings", stat, 49.7282324664315,
                      CheckResult::Cmp::kLess,
                      "k = n = 4, N = 1e5, critical value at significance 1e-3, dof 23"));
  out.push_back(check("ranking", "chi-square-dof", static_cast<double>(dof), 23.0,
                      CheckResult::Cmp::kLessEq, "exact outcome count"));
  return out;
}

std::vector<CheckResult> suite_trunc_marginals(const Options& opt) {
  const std::vector<LogValue> phis{std::log(0.5), std::log(0.3), std::log(0.2)};
  const double parent_key = 0.3;
  constexpr std::size_t kRuns = 100000;

  const auto runs = run_replicates(
      opt.seed + 105, kRuns,
      [&](std::size_t, RandomStream& stream) {
        const auto keys = sample_children_conditional(stream, phis, parent_key);
        return std::array<double, 3>{keys[0], keys[1], keys[2]};
      },
      opt.mode);

  long long argmax_violations = 0;
  std::vector<std::vector<double>> conditional(phis.size());
  for (const auto& keys : runs) {
    int at_max = 0;
    for (std::size_t i = 0; i < phis.size(); ++i) {
      if (keys[i] == parent_key) {
        ++at_max;
      } else {
        conditional[i].push_back(keys[i]);
      }
    }
    if (at_max != 1) ++argmax_violations;
  }

  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < phis.size(); ++i) {
    const TruncatedGumbelParams params{phis[i], parent_key};
    const double d = ks_distance(conditional[i],
                                 [&](double g) { return trunc_cdf(params, g); });
    std::ostringstream name;
    name << "ks-child-" << i;
    std::ostringstream note;
    note << conditional[i].size() << " non-argmax samples";
    out.push_back(check("trunc-marginals", name.str(), d, 0.01, CheckResult::Cmp::kLess,
                        note.str()));
  }
  out.push_back(check("trunc-marginals", "argmax-bitexact-violations",
                      static_cast<double>(argmax_violations), 0.0,
                      CheckResult::Cmp::kLessEq,
                      "exactly one child key equals the parent key, bit-for-bit"));
  return out;
}

std::vector<CheckResult> suite_stability_shift(const Options& opt) {
  // Agreement sweep in the regime where the direct exponential form is itself
  // trustworthy: moderate magnitudes and a bounded t_max - max(keys) gap.
  RandomStream stream(opt.seed + 106);
  double max_diff = 0.0;
  for (int it = 0; it < 1000; ++it) {
    std::vector<double> keys(3);
    for (auto& k : keys) k = -30.0 + 60.0 * stream.uniform();
    const double z = *std::max_element(keys.begin(), keys.end());
    const double t_max = z + (stream.uniform() - 0.5) * 16.0;
    const auto stable = shift_to_max(keys, t_max);
    const auto naive = shift_to_max_naive(keys, t_max);
    for (std::size_t i = 0; i < keys.size(); ++i) {
      max_diff = std::max(max_diff, std::abs(stable[i] - naive[i]));
    }
  }

  // Pinned example at moderate magnitude.
  {
    const std::vector<double> keys{1.0, 0.0};
    const auto stable = shift_to_max(keys, 0.5);
    const auto naive = shift_to_max_naive(keys, 0.5);
    for (std::size_t i = 0; i < keys.size(); ++i) {
      max_diff = std::max(max_diff, std::abs(stable[i] - naive[i]));
    }
  }

  // Magnitude ~700: the direct form overflows, the stable route must not.
  const std::vector<double> big_keys{-700.0, -705.0, -715.0};
  const double big_t = -700.0;
  const auto stable_big = shift_to_max(big_keys, big_t);
  bool stable_finite = true;
  for (double v : stable_big) stable_finite = stable_finite && std::isfinite(v);
  const auto naive_big = shift_to_max_naive(big_keys, big_t);
  bool naive_broken = false;
  for (double v : naive_big) naive_broken = naive_broken || !std::isfinite(v);

  std::vector<CheckResult> out;
  out.push_back(check("stability-shift", "stable-vs-direct-max-abs-diff", max_diff, 1e-9,
                      CheckResult::Cmp::kLess, "1000 random triples, magnitudes <= 30"));
  out.push_back(check("stability-shift", "stable-finite-at-700",
                      stable_finite ? 0.0 : 1.0, 0.0, CheckResult::Cmp::kLessEq));
  out.push_back(check("stability-shift", "direct-form-overflows-at-700",
                      naive_broken ? 1.0 : 0.0, 0.0, CheckResult::Cmp::kGreater,
                      "demonstrates why the stable route exists"));
  return out;
}

// Reference for log(p/q) in quadruple precision, straight from the
// definition as kappa - log((1 - exp(-z))/z). The 80-bit long double cannot
// serve here: near the deep end z/2 ~ 2e-18 sits below its ulp around 1, so
// the oracle itself would quantize.
long double reference_log_importance_weight(double phi, double kappa) {
  const __float128 w = static_cast<__float128>(phi) - static_cast<__float128>(kappa);
  const __float128 z = expq(w);
  return static_cast<long double>(static_cast<__float128>(kappa) - logq(-expm1q(-z) / z));
}

std::vector<CheckResult> suite_stability_weights(const Options&) {
  double max_rel_err = 0.0;
  for (double kappa : {-5.0, 0.0, 3.7}) {
    for (int i = 0; i <= 300; ++i) {
      const double w = -40.0 + 0.1 * static_cast<double>(i);
      if (w > -10.0) break;
      const double phi = kappa + w;
      const double got = log_importance_weight(phi, kappa);
      const long double ref = reference_log_importance_weight(phi, kappa);
      const long double denom = std::max<long double>(fabsl(ref), 1e-300L);
      max_rel_err = std::max(
          max_rel_err, static_cast<double>(fabsl(static_cast<long double>(got) - ref) / denom));
    }
  }

  double max_jump = 0.0;
  for (double kappa : {-5.0, 0.0, 3.7}) {
    const double lo = log_importance_weight(kappa - 10.0 - 1e-9, kappa);
    const double hi = log_importance_weight(kappa - 10.0 + 1e-9, kappa);
    max_jump = std::max(max_jump, std::abs(hi - lo));
  }

  std::vector<CheckResult> out;
  out.push_back(check("stability-weights", "series-vs-extended-precision-rel-err",
                      max_rel_err, 1e-10, CheckResult::Cmp::kLess,
                      "phi - kappa in [-40, -10]"));
  out.push_back(check("stability-weights", "cutoff-continuity-jump", max_jump, 1e-9,
                      CheckResult::Cmp::kLess, "branch point at phi - kappa = -10"));
  return out;
}

std::vector<CheckResult> suite_unbiasedness(const Options& opt) {
  const auto start = Clock::now();
  const auto tree = pick_tree(opt);
  const LeafTable table = enumerate_leaves(*tree);
  const Functional entropy = entropy_functional(*tree);
  const double exact = exact_expectation(entropy, table);

  std::vector<CheckResult> out;
  if (!opt.tree) {
    out.push_back(check("unbiasedness", "oracle-entropy-vs-frozen",
                        std::abs(exact - kEntropyDemo8), 1e-12, CheckResult::Cmp::kLess,
                        "enumeration agrees with the precomputed constant"));
  }

  constexpr std::size_t kReplicates = 100000;
  for (std::size_t keep : {1, 2, 4, 7}) {
    const auto estimates = run_replicates(
        opt.seed + 110 + keep, kReplicates,
        [&](std::size_t, RandomStream& stream) {
          const SworSample sample = sbs_estimator_sample(*tree, keep + 1, stream);
          return priority_estimate(entropy, sample);
        },
        opt.mode);
    const double mean = sample_mean(estimates);
    const double se = std::sqrt(sample_variance(estimates) /
                                static_cast<double>(estimates.size()));
    std::ostringstream name;
    name << "entropy-mean-error-se-units-keep" << keep;
    std::ostringstream note;
    note << "mean " << mean << ", exact " << exact << ", se " << se;
    out.push_back(check("unbiasedness", name.str(), std::abs(mean - exact) / se, 4.0,
                        CheckResult::Cmp::kLess, note.str()));
  }
  out.push_back(check("unbiasedness", "runtime-seconds", seconds_since(start), 120.0,
                      CheckResult::Cmp::kLess));
  return out;
}

std::vector<CheckResult> suite_consistency(const Options& opt) {
  const auto tree = pick_tree(opt);
  const LeafTable table = enumerate_leaves(*tree);
  const Functional entropy = entropy_functional(*tree);
  const double exact = exact_expectation(entropy, table);
  const std::size_t n = table.size();

  double max_priority_err = 0.0;
  double max_normalized_err = 0.0;
  double max_const_err = 0.0;
  double max_unit_err = 0.0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    RandomStream stream = RandomStream::substream(opt.seed + 120, rep);
    const SworSample sample = sbs_estimator_sample(*tree, n + 1, stream);
    if (!sample.exhausted || sample.entries.size() != n) {
      throw std::logic_error("consistency: expected the whole domain to be sampled");
    }
    max_priority_err =
        std::max(max_priority_err, std::abs(priority_estimate(entropy, sample) - exact));
    max_normalized_err =
        std::max(max_normalized_err, std::abs(normalized_estimate(entropy, sample) - exact));
    const double c = 2.5;
    max_const_err = std::max(
        max_const_err,
        std::abs(normalized_estimate([c](const Sequence&) { return c; }, sample) - c));
    max_unit_err = std::max(
        max_unit_err,
        std::abs(normalized_estimate([](const Sequence&) { return 1.0; }, sample) - 1.0));
  }

  std::vector<CheckResult> out;
  out.push_back(check("consistency", "priority-exact-at-k-n", max_priority_err, 1e-9,
                      CheckResult::Cmp::kLess, "kappa = -inf, q = 1"));
  out.push_back(check("consistency", "normalized-exact-at-k-n", max_normalized_err, 1e-9,
                      CheckResult::Cmp::kLess));
  out.push_back(check("consistency", "normalized-constant-functional", max_const_err, 1e-9,
                      CheckResult::Cmp::kLess, "f = 2.5 recovered per draw"));
  out.push_back(check("consistency", "normalized-unit-functional-exact", max_unit_err, 0.0,
                      CheckResult::Cmp::kLessEq, "f = 1 recovered bit-exactly"));
  return out;
}

std::vector<CheckResult> suite_variance_reduction(const Options& opt) {
  const auto base = std::make_shared<MarkovTextModel>(
      train_markov(demo_corpus(), 2, 0.05, 16));
  const auto model = apply_temperature(base, 0.2);

  const std::vector<BeamEntry> wide = beam_search(*model, 16);
  const Sequence reference = wide.at(0).seq;
  const Token eos = model->eos();

  const Functional entropy = entropy_functional(*model);
  const Functional bleu_f = [&reference, eos](const Sequence& y) {
    return bleu(y, reference, 4, eos);
  };

  constexpr std::size_t kReplicates = 1000;
  std::vector<CheckResult> out;
  for (std::size_t k : {5, 20}) {
    struct Pair {
      double entropy = 0.0;
      double bleu = 0.0;
    };
    const auto mc = run_replicates(
        opt.seed + 230 + k, kReplicates,
        [&](std::size_t, RandomStream& stream) {
          std::vector<Sequence> seqs;
          seqs.reserve(k);
          for (std::size_t i = 0; i < k; ++i) {
            seqs.push_back(ancestral_sample(*model, stream).seq);
          }
          Pair p;
          p.entropy = mc_estimate(entropy, seqs);
          p.bleu = mc_estimate(bleu_f, seqs);
          return p;
        },
        opt.mode);
    const auto sbs = run_replicates(
        opt.seed + 260 + k, kReplicates,
        [&](std::size_t, RandomStream& stream) {
          const SworSample sample = sbs_estimator_sample(*model, k, stream);
          Pair p;
          p.entropy = normalized_estimate(entropy, sample);
          p.bleu = normalized_estimate(bleu_f, sample);
          return p;
        },
        opt.mode);

    auto variance_of = [](const auto& rows, auto proj) {
      std::vector<double> xs;
      xs.reserve(rows.size());
      for (const auto& r : rows) xs.push_back(proj(r));
      return sample_variance(xs);
    };
    const double var_mc_h = variance_of(mc, [](const Pair& p) { return p.entropy; });
    const double var_sbs_h = variance_of(sbs, [](const Pair& p) { return p.entropy; });
    const double var_mc_b = variance_of(mc, [](const Pair& p) { return p.bleu; });
    const double var_sbs_b = variance_of(sbs, [](const Pair& p) { return p.bleu; });

    std::ostringstream h_name, b_name, h_note, b_note;
    h_name << "entropy-variance-ratio-k" << k;
    b_name << "bleu-variance-ratio-k" << k;
    h_note << "var sbs-norm " << var_sbs_h << " vs mc " << var_mc_h;
    b_note << "var sbs-norm " << var_sbs_b << " vs mc " << var_mc_b;
    out.push_back(check("variance-reduction", h_name.str(), var_sbs_h / var_mc_h, 1.0,
                        CheckResult::Cmp::kLessEq, h_note.str()));
    out.push_back(check("variance-reduction", b_name.str(), var_sbs_b / var_mc_b, 1.0,
                        CheckResult::Cmp::kLessEq, b_note.str()));
  }
  return out;
}

std::vector<CheckResult> suite_naive_bias(const Options& opt) {
  const auto tree = pick_tree(opt);
  const LeafTable table = enumerate_leaves(*tree);
  const PairSpace space(table);

  constexpr std::size_t kRuns = 200000;
  const auto counts = tally_outcomes(
      opt.seed + 150, kRuns, space.pairs.size(),
      [&](std::size_t, RandomStream& stream) {
        const SworSample sample = naive_stepwise_swor(*tree, 2, stream);
        return space.cell(leaf_of(table, sample.entries.at(0).seq, "naive-bias"),
                          leaf_of(table, sample.entries.at(1).seq, "naive-bias"));
      },
      opt.mode);

  const double tv = tv_distance(counts, space.probs);
  return {check("naive-bias", "tv-naive-vs-exact", tv, 0.02, CheckResult::Cmp::kGreater,
                "stepwise resampling is biased; detecting it is the pass condition")};
}

std::vector<CheckResult> suite_cost(const Options& opt) {
  const auto tree = pick_tree(opt);
  constexpr std::size_t kSbsRuns = 1000;
  const auto evals = run_replicates(
      opt.seed + 160, kSbsRuns,
      [&](std::size_t, RandomStream& stream) {
        return stochastic_beam_search(*tree, 3, stream).evaluations;
      },
      opt.mode);
  const long long max_evals = *std::max_element(evals.begin(), evals.end());

  const auto two_leaf = two_leaf_tree(0.99);
  constexpr std::size_t kRejRuns = 10000;
  const auto draws = run_replicates(
      opt.seed + 161, kRejRuns,
      [&](std::size_t, RandomStream& stream) {
        return static_cast<double>(rejection_swor(*two_leaf, 2, stream, 1000000).draws);
      },
      opt.mode);
  const double mean_draws = sample_mean(draws);

  // Independent simulation oracle: direct categorical draws until both
  // categories appear.
  constexpr std::size_t kOracleRuns = 200000;
  const auto oracle_draws = run_replicates(
      opt.seed + 162, kOracleRuns,
      [&](std::size_t, RandomStream& stream) {
        bool seen0 = false;
        bool seen1 = false;
        long long n = 0;
        while (!(seen0 && seen1)) {
          ++n;
          (stream.uniform() < 0.99 ? seen0 : seen1) = true;
        }
        return static_cast<double>(n);
      },
      opt.mode);
  const double oracle_mean = sample_mean(oracle_draws);

  std::vector<CheckResult> out;
  out.push_back(check("cost", "sbs-evaluations-max",
                      static_cast<double>(max_evals),
                      static_cast<double>(3 * tree->max_len()), CheckResult::Cmp::kLessEq,
                      "every run within k * max_len"));
  std::ostringstream note;
  note << "mean draws " << mean_draws << ", simulation oracle " << oracle_mean;
  out.push_back(check("cost", "rejection-mean-draws-rel-dev",
                      std::abs(mean_draws - oracle_mean) / oracle_mean, 0.10,
                      CheckResult::Cmp::kLess, note.str()));
  return out;
}

std::vector<CheckResult> suite_beam_exactness(const Options& opt) {
  RandomStream stream(opt.seed + 170);
  long long mismatches = 0;
  double max_phi_diff = 0.0;
  for (int t = 0; t < 50; ++t) {
    // random tree: depth <= 3, branching 2..3, random conditionals
    std::vector<ExplicitTreeModel::Edge> edges;
    int next_id = 1;
    struct Frontier {
      int id;
      int depth;
    };
    std::vector<Frontier> frontier{{0, 0}};
    while (!frontier.empty()) {
      const Frontier node = frontier.back();
      frontier.pop_back();
      if (node.depth >= 3) continue;
      const bool expand = node.depth == 0 || stream.uniform() < 0.7;
      if (!expand) continue;
      const int fanout = 2 + (stream.uniform() < 0.5 ? 0 : 1);
      std::vector<double> weights(static_cast<std::size_t>(fanout));
      double total = 0.0;
      for (auto& w : weights) {
        w = 0.05 + stream.uniform();
        total += w;
      }
      for (int c = 0; c < fanout; ++c) {
        ExplicitTreeModel::Edge e;
        e.parent = node.id;
        e.child = next_id++;
        e.token = c;
        e.prob = weights[static_cast<std::size_t>(c)] / total;
        edges.push_back(e);
        frontier.push_back({e.child, node.depth + 1});
      }
    }
    const auto tree = ExplicitTreeModel::from_edges(edges);
    const LeafTable table = enumerate_leaves(tree);

    const auto beam = beam_search(tree, table.size());
    if (beam.size() != table.size()) {
      ++mismatches;
      continue;
    }
    std::vector<std::pair<double, Sequence>> expected;
    for (std::size_t i = 0; i < table.size(); ++i) {
      expected.emplace_back(table.phis()[i], table.seqs()[i]);
    }
    std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (std::size_t i = 0; i < beam.size(); ++i) {
      if (beam[i].seq != expected[i].second) {
        ++mismatches;
      } else {
        max_phi_diff = std::max(max_phi_diff, std::abs(beam[i].phi - expected[i].first));
      }
    }
  }
  std::vector<CheckResult> out;
  out.push_back(check("beam-exactness", "sequence-mismatches",
                      static_cast<double>(mismatches), 0.0, CheckResult::Cmp::kLessEq,
                      "50 random trees, beam width = leaf count"));
  out.push_back(check("beam-exactness", "phi-max-abs-diff", max_phi_diff, 1e-12,
                      CheckResult::Cmp::kLess));
  return out;
}

std::vector<CheckResult> suite_diversity_bounds(const Options& opt) {
  RandomStream stream(opt.seed + 180);
  long long violations = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = 2 + static_cast<std::size_t>(stream.uniform() * 7.0);
    std::vector<Sequence> sample;
    for (std::size_t s = 0; s < k; ++s) {
      // distinct tokens within a sequence, so every n-gram inside it is unique
      const int len = 4 + static_cast<int>(stream.uniform() * 9.0);
      std::vector<Token> pool(64);
      std::iota(pool.begin(), pool.end(), 0);
      for (int i = 0; i < len; ++i) {
        const auto j =
            i + static_cast<int>(stream.uniform() * static_cast<double>(64 - i));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
      }
      sample.emplace_back(std::vector<Token>(pool.begin(), pool.begin() + len));
    }
    for (int n = 1; n <= 4; ++n) {
      const double d = ngram_diversity(sample, n);
      if (d < 1.0 / static_cast<double>(k) || d > 1.0) ++violations;
    }
  }

  // k identical sequences: d_n = 1/k exactly
  long long identical_violations = 0;
  for (std::size_t k = 2; k <= 8; ++k) {
    const Sequence base(std::vector<Token>{3, 1, 4, 15, 9, 2, 6});
    std::vector<Sequence> copies(k, base);
    for (int n = 1; n <= 4; ++n) {
      if (ngram_diversity(copies, n) != 1.0 / static_cast<double>(k)) {
        ++identical_violations;
      }
    }
  }

  std::vector<CheckResult> out;
  out.push_back(check("diversity-bounds", "range-violations",
                      static_cast<double>(violations), 0.0, CheckResult::Cmp::kLessEq,
                      "1000 random sample sets, d_n in [1/k, 1]"));
  out.push_back(check("diversity-bounds", "identical-sequences-exact",
                      static_cast<double>(identical_violations), 0.0,
                      CheckResult::Cmp::kLessEq, "k copies give d_n = 1/k exactly"));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Demo models
// ---------------------------------------------------------------------------

std::shared_ptr<const ExplicitTreeModel> demo_tree8() {
  using Edge = ExplicitTreeModel::Edge;
  const std::vector<Edge> edges{
      {0, 1, 0, 3.0 / 5.0},  {0, 2, 1, 2.0 / 5.0},
      {1, 3, 0, 1.0 / 3.0},  {1, 4, 1, 2.0 / 3.0},
      {2, 5, 0, 3.0 / 4.0},  {2, 6, 1, 1.0 / 4.0},
      {3, 7, 0, 1.0 / 4.0},  {3, 8, 1, 3.0 / 4.0},
      {4, 9, 0, 3.0 / 8.0},  {4, 10, 1, 5.0 / 8.0},
      {5, 11, 0, 2.0 / 3.0}, {5, 12, 1, 1.0 / 3.0},
      {6, 13, 0, 1.0 / 2.0}, {6, 14, 1, 1.0 / 2.0},
  };
  return std::make_shared<ExplicitTreeModel>(ExplicitTreeModel::from_edges(edges));
}

std::shared_ptr<const ExplicitTreeModel> demo_tree4() {
  using Edge = ExplicitTreeModel::Edge;
  const std::vector<Edge> edges{
      {0, 1, 0, 0.7},       {0, 2, 1, 0.3},
      {1, 3, 0, 4.0 / 7.0}, {1, 4, 1, 3.0 / 7.0},
      {2, 5, 0, 2.0 / 3.0}, {2, 6, 1, 1.0 / 3.0},
  };
  return std::make_shared<ExplicitTreeModel>(ExplicitTreeModel::from_edges(edges));
}

std::shared_ptr<const ExplicitTreeModel> two_leaf_tree(double p0) {
  using Edge = ExplicitTreeModel::Edge;
  const std::vector<Edge> edges{{0, 1, 0, p0}, {0, 2, 1, 1.0 - p0}};
  return std::make_shared<ExplicitTreeModel>(ExplicitTreeModel::from_edges(edges));
}

const std::string& demo_corpus() {
  static const std::string corpus =
      "the cat sat on the mat and the dog sat on the log. "
      "the cat saw the dog and the dog saw the cat. "
      "a cat on a mat sat and sat. the dog ran to the log and sat on the log. "
      "the cat and the dog sat on the mat by the log.";
  return corpus;
}

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "swor-law",        "sbs-law",       "ranking",
      "trunc-marginals", "stability-shift", "stability-weights",
      "unbiasedness",    "consistency",   "variance-reduction",
      "naive-bias",      "cost",          "beam-exactness",
      "diversity-bounds",
  };
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const Options& opt) {
  if (suite == "swor-law") return suite_swor_law(opt);
  if (suite == "sbs-law") return suite_sbs_law(opt);
  if (suite == "ranking") return suite_ranking(opt);
  if (suite == "trunc-marginals") return suite_trunc_marginals(opt);
  if (suite == "stability-shift") return suite_stability_shift(opt);
  if (suite == "stability-weights") return suite_stability_weights(opt);
  if (suite == "unbiasedness") return suite_unbiasedness(opt);
  if (suite == "consistency") return suite_consistency(opt);
  if (suite == "variance-reduction") return suite_variance_reduction(opt);
  if (suite == "naive-bias") return suite_naive_bias(opt);
  if (suite == "cost") return suite_cost(opt);
  if (suite == "beam-exactness") return suite_beam_exactness(opt);
  if (suite == "diversity-bounds") return suite_diversity_bounds(opt);
  throw std::invalid_argument("unknown verify suite: " + suite);
}

std::vector<CheckResult> run_all(const Options& opt) {
  std::vector<CheckResult> all;
  for (const std::string& name : suite_names()) {
    auto results = run_suite(name, opt);
    all.insert(all.end(), results.begin(), results.end());
  }
  return all;
}

bool all_pass(const std::vector<CheckResult>& results) {
  for (const auto& r : results) {
    if (!r.pass) return false;
  }
  return true;
}

std::string format_result(const CheckResult& r) {
  std::ostringstream os;
  os << (r.pass ? "PASS" : "FAIL") << "  " << r.suite << "/" << r.name << "  measured="
     << r.measured;
  switch (r.cmp) {
    case CheckResult::Cmp::kLess: os << " < "; break;
    case CheckResult::Cmp::kLessEq: os << " <= "; break;
    case CheckResult::Cmp::kGreater: os << " > "; break;
  }
  os << r.threshold;
  if (!r.note.empty()) os << "  (" << r.note << ")";
  return os.str();
}

}  // namespace swor::verify
