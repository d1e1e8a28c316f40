#include "swor/metrics.hpp"

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace swor {

namespace {

std::span<const Token> content(const Sequence& seq, Token eos) {
  std::span<const Token> s(seq.tokens);
  if (eos >= 0 && !s.empty() && s.back() == eos) s = s.first(s.size() - 1);
  return s;
}

using Ngram = std::vector<Token>;

std::map<Ngram, long long> ngram_counts(std::span<const Token> tokens, int n) {
  std::map<Ngram, long long> counts;
  if (static_cast<int>(tokens.size()) < n) return counts;
  for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
    Ngram g(tokens.begin() + static_cast<std::ptrdiff_t>(i),
            tokens.begin() + static_cast<std::ptrdiff_t>(i) + n);
    ++counts[g];
  }
  return counts;
}

}  // namespace

double bleu(const Sequence& candidate, const Sequence& reference, int max_n, Token eos) {
  if (max_n < 1) throw std::domain_error("bleu: max_n must be >= 1");
  const auto cand = content(candidate, eos);
  const auto ref = content(reference, eos);
  if (ref.empty()) throw std::domain_error("bleu: empty reference");
  if (cand.empty()) return 0.0;

  double log_precision = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    const auto cand_counts = ngram_counts(cand, n);
    const auto ref_counts = ngram_counts(ref, n);
    long long match = 0;
    long long total = 0;
    for (const auto& [gram, c] : cand_counts) {
      total += c;
      auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) match += std::min(c, it->second);
    }
    if (n == 1) {
      if (match == 0) return 0.0;
      log_precision += std::log(static_cast<double>(match) / static_cast<double>(total));
    } else if (match == 0) {
      // add-one smoothing when the raw precision vanishes
      log_precision += std::log(1.0 / static_cast<double>(total + 1));
    } else {
      log_precision += std::log(static_cast<double>(match) / static_cast<double>(total));
    }
  }
  log_precision /= static_cast<double>(max_n);

  double brevity = 1.0;
  if (cand.size() < ref.size()) {
    brevity = std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(cand.size()));
  }
  return brevity * std::exp(log_precision);
}

double ngram_diversity(std::span<const Sequence> seqs, int n, Token eos) {
  if (n < 1) throw std::domain_error("ngram_diversity: n must be >= 1");
  std::set<Ngram> unique;
  long long total = 0;
  for (const Sequence& seq : seqs) {
    const auto tokens = content(seq, eos);
    if (static_cast<int>(tokens.size()) < n) continue;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
      unique.insert(Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                          tokens.begin() + static_cast<std::ptrdiff_t>(i) + n));
      ++total;
    }
  }
  if (total == 0) {
    throw std::domain_error("ngram_diversity: no n-grams of the requested order");
  }
  return static_cast<double>(unique.size()) / static_cast<double>(total);
}

MeanDiversity mean_diversity(std::span<const Sequence> seqs, Token eos) {
  MeanDiversity result;
  double sum = 0.0;
  for (int n = 1; n <= 4; ++n) {
    try {
      sum += ngram_diversity(seqs, n, eos);
      ++result.orders_used;
    } catch (const std::domain_error&) {
      // order skipped: no n-grams of this length
    }
  }
  if (result.orders_used == 0) {
    throw std::domain_error("mean_diversity: no n-grams at any order");
  }
  result.value = sum / static_cast<double>(result.orders_used);
  return result;
}

}  // namespace swor
