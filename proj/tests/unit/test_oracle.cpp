#include "swor/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "swor/gumbel.hpp"
#include "swor/verify.hpp"

using namespace swor;

TEST_CASE("enumerate_leaves on the demo tree") {
  const auto tree = verify::demo_tree8();
  const LeafTable table = enumerate_leaves(*tree);
  REQUIRE(table.size() == 8);
  const std::vector<double> expected{0.05, 0.15, 0.15, 0.25, 0.20, 0.10, 0.05, 0.05};
  const auto probs = table.probs();
  double total = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(std::abs(probs[i] - expected[i]) < 1e-12);
    total += probs[i];
  }
  CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("enumerate_leaves respects the budget") {
  const auto tree = verify::demo_tree8();
  CHECK_THROWS_AS(enumerate_leaves(*tree, 4), std::domain_error);
}

TEST_CASE("markov leaves multiply out their step conditionals") {
  const auto m = train_markov("abab", 1, 0.5, 3);
  const LeafTable table = enumerate_leaves(m);
  double total = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(std::abs(table.phis()[i] - seq_logprob(m, table.seqs()[i])) < 1e-12);
    total += std::exp(table.phis()[i]);
  }
  CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("exact_swor_prob values") {
  const auto tree = verify::demo_tree8();
  const LeafTable table = enumerate_leaves(*tree);
  const std::size_t top[] = {3};  // leaf with probability 0.25
  CHECK(exact_swor_prob(table, top) == doctest::Approx(0.25).epsilon(1e-12));
  const std::size_t pair[] = {3, 4};
  CHECK(exact_swor_prob(table, pair) == doctest::Approx(1.0 / 15.0).epsilon(1e-12));
  const std::size_t dup[] = {3, 3};
  CHECK_THROWS_AS(exact_swor_prob(table, dup), std::domain_error);

  const auto two = verify::two_leaf_tree(0.5);
  const LeafTable pair_table = enumerate_leaves(*two);
  const std::size_t both[] = {0, 1};
  CHECK(exact_swor_prob(pair_table, both) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("exact_swor_prob sums to one over ordered tuples") {
  const auto tree = verify::demo_tree8();
  const LeafTable table = enumerate_leaves(*tree);
  const std::size_t n = table.size();
  for (std::size_t k = 1; k <= 4; ++k) {
    double total = 0.0;
    std::vector<std::size_t> tuple(k);
    // iterate all ordered k-tuples of distinct indices
    std::vector<std::size_t> counter(k, 0);
    while (true) {
      bool distinct = true;
      for (std::size_t a = 0; a < k && distinct; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
          if (counter[a] == counter[b]) {
            distinct = false;
            break;
          }
        }
      }
      if (distinct) total += exact_swor_prob(table, counter);
      std::size_t pos = 0;
      while (pos < k && ++counter[pos] == n) {
        counter[pos] = 0;
        ++pos;
      }
      if (pos == k) break;
    }
    CHECK(std::abs(total - 1.0) < 1e-9);
  }
}

TEST_CASE("exact_expectation basics") {
  const auto tree = verify::demo_tree8();
  const LeafTable table = enumerate_leaves(*tree);
  CHECK(exact_expectation([](const Sequence&) { return 3.25; }, table) ==
        doctest::Approx(3.25).epsilon(1e-12));
  const Sequence target = table.seqs()[3];
  CHECK(exact_expectation(
            [&](const Sequence& s) { return s == target ? 1.0 : 0.0; }, table) ==
        doctest::Approx(0.25).epsilon(1e-12));
  // entropy, frozen from the leaf probabilities
  CHECK(exact_expectation(
            [&](const Sequence& s) { return -seq_logprob(*tree, s); }, table) ==
        doctest::Approx(1.9172155185650603).epsilon(1e-12));
}

TEST_CASE("tv_distance hand values") {
  const std::vector<long long> counts{3, 1};
  const std::vector<double> half{0.5, 0.5};
  CHECK(tv_distance(counts, half) == doctest::Approx(0.25).epsilon(1e-15));
  const std::vector<long long> exact{1, 1};
  CHECK(tv_distance(exact, half) == 0.0);
  const std::vector<long long> disjoint{4, 0};
  const std::vector<double> other{0.0, 1.0};
  CHECK(tv_distance(disjoint, other) == 1.0);
  const std::vector<long long> short_counts{1};
  CHECK_THROWS_AS(tv_distance(short_counts, half), std::domain_error);
}

TEST_CASE("chi_square_stat hand values") {
  const std::vector<long long> counts{60, 40};
  const std::vector<double> half{0.5, 0.5};
  const auto [stat, dof] = chi_square_stat(counts, half);
  CHECK(stat == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(dof == 1);

  const std::vector<long long> prop{30, 30};
  CHECK(chi_square_stat(prop, half).first == 0.0);

  const std::vector<long long> single{10};
  const std::vector<double> sure{1.0};
  const auto [s1, d1] = chi_square_stat(single, sure);
  CHECK(s1 == 0.0);
  CHECK(d1 == 0);

  const std::vector<double> with_zero{1.0, 0.0};
  CHECK_THROWS_AS(chi_square_stat(counts, with_zero), std::domain_error);
}

TEST_CASE("bottom-up maxima of flat leaf keys follow the node-mass Gumbel law") {
  const auto tree = verify::demo_tree8();
  const LeafTable table = enumerate_leaves(*tree);
  const auto prefixes = prefix_table(table);

  constexpr int kRuns = 100000;
  std::vector<std::vector<double>> node_keys(prefixes.size());
  RandomStream stream(2024);
  for (int rep = 0; rep < kRuns; ++rep) {
    const auto leaf_keys = sample_leaf_keys(table, stream);
    for (std::size_t p = 0; p < prefixes.size(); ++p) {
      double m = kNegInf;
      for (std::size_t leaf : prefixes[p].leaves) m = std::max(m, leaf_keys[leaf]);
      node_keys[p].push_back(m);
    }
  }
  for (std::size_t p = 0; p < prefixes.size(); ++p) {
    std::sort(node_keys[p].begin(), node_keys[p].end());
    double d = 0.0;
    const double n = static_cast<double>(node_keys[p].size());
    for (std::size_t i = 0; i < node_keys[p].size(); ++i) {
      const double f = gumbel_cdf(prefixes[p].phi, node_keys[p][i]);
      d = std::max(d, std::abs(f - static_cast<double>(i) / n));
      d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    CHECK(d < 0.01);
  }
}
