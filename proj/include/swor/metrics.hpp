#pragma once

#include <span>

#include "swor/seqmodel.hpp"

namespace swor {

/// Mean n-gram diversity over orders 1..4. Orders with no n-grams at all are
/// skipped; orders_used reports how many contributed.
struct MeanDiversity {
  double value = 0.0;
  int orders_used = 0;
};

/// Sentence-level BLEU of candidate against one reference: geometric mean of
/// clipped n-gram precisions for n = 1..max_n with brevity penalty. A
/// zero-match precision for n >= 2 gets add-one smoothing on numerator and
/// denominator. If `eos` is nonnegative, a trailing eos token is treated as a
/// terminator and excluded from the n-grams.
double bleu(const Sequence& candidate, const Sequence& reference, int max_n = 4,
            Token eos = -1);

/// Distinct n-grams pooled over the sequences, divided by the total n-gram
/// count.
double ngram_diversity(std::span<const Sequence> seqs, int n, Token eos = -1);

MeanDiversity mean_diversity(std::span<const Sequence> seqs, Token eos = -1);

}  // namespace swor
