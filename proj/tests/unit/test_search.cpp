#include "swor/search.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "doctest.h"
#include "swor/oracle.hpp"
#include "swor/replicate.hpp"
#include "swor/verify.hpp"

using namespace swor;

namespace {

std::shared_ptr<const ExplicitTreeModel> chain_model() {
  using Edge = ExplicitTreeModel::Edge;
  return std::make_shared<ExplicitTreeModel>(ExplicitTreeModel::from_edges(
      {Edge{0, 1, 0, 1.0}, Edge{1, 2, 0, 1.0}}));
}

}  // namespace

TEST_CASE("beam_search keeps the two heaviest leaves of the demo tree") {
  const auto tree = verify::demo_tree8();
  const auto beam = beam_search(*tree, 2);
  REQUIRE(beam.size() == 2);
  CHECK(std::exp(beam[0].phi) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(std::exp(beam[1].phi) == doctest::Approx(0.20).epsilon(1e-12));
}

TEST_CASE("beam_search with a wide beam returns everything, sorted") {
  const auto tree = verify::demo_tree8();
  const auto beam = beam_search(*tree, 50);
  const LeafTable table = enumerate_leaves(*tree);
  REQUIRE(beam.size() == table.size());
  for (std::size_t i = 1; i < beam.size(); ++i) {
    CHECK(beam[i - 1].phi >= beam[i].phi);
  }
  std::set<Sequence> seqs;
  for (const auto& e : beam) seqs.insert(e.seq);
  CHECK(seqs.size() == table.size());
}

TEST_CASE("beam_search is pure") {
  const auto tree = verify::demo_tree8();
  const auto a = beam_search(*tree, 3);
  const auto b = beam_search(*tree, 3);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].seq == b[i].seq);
    CHECK(a[i].phi == b[i].phi);
  }
}

TEST_CASE("beam_search on a single chain") {
  const auto chain = chain_model();
  const auto beam = beam_search(*chain, 1);
  REQUIRE(beam.size() == 1);
  CHECK(beam[0].phi == 0.0);
}

TEST_CASE("stochastic beam search structural postconditions") {
  const auto tree = verify::demo_tree8();
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    RandomStream stream = RandomStream::substream(555, seed);
    SbsStats stats;
    const SworSample sample = stochastic_beam_search(*tree, 3, stream, &stats);
    REQUIRE(sample.entries.size() == 3);
    CHECK(!sample.exhausted);
    CHECK(!sample.kappa.has_value());
    CHECK(sample.evaluations <= 3 * tree->max_len());
    std::set<Sequence> distinct;
    for (std::size_t i = 0; i < sample.entries.size(); ++i) {
      const auto& e = sample.entries[i];
      distinct.insert(e.seq);
      CHECK(std::abs(e.phi - seq_logprob(*tree, e.seq)) < 1e-9);
      CHECK(std::isfinite(e.noise()));
      if (i > 0) CHECK(sample.entries[i - 1].key > e.key);
    }
    CHECK(distinct.size() == 3);
    CHECK(stats.max_coupling_gap == 0.0);
    CHECK(stats.max_child_excess <= 0.0);
  }
}

TEST_CASE("stochastic beam search with the same seed reproduces itself") {
  const auto tree = verify::demo_tree8();
  RandomStream a(17);
  RandomStream b(17);
  const auto s1 = stochastic_beam_search(*tree, 4, a);
  const auto s2 = stochastic_beam_search(*tree, 4, b);
  REQUIRE(s1.entries.size() == s2.entries.size());
  for (std::size_t i = 0; i < s1.entries.size(); ++i) {
    CHECK(s1.entries[i].seq == s2.entries[i].seq);
    CHECK(s1.entries[i].key == s2.entries[i].key);
  }
}

TEST_CASE("stochastic beam search exhausts small models") {
  const auto tree = verify::demo_tree8();
  RandomStream stream(23);
  const auto sample = stochastic_beam_search(*tree, 12, stream);
  CHECK(sample.exhausted);
  CHECK(sample.entries.size() == 8);
}

TEST_CASE("sbs k=1 frequencies match the leaf distribution") {
  const auto tree = verify::demo_tree8();
  const LeafTable table = enumerate_leaves(*tree);
  constexpr std::size_t kRuns = 50000;
  const auto counts = tally_outcomes(
      888, kRuns, table.size(),
      [&](std::size_t, RandomStream& stream) {
        const auto sample = stochastic_beam_search(*tree, 1, stream);
        return *table.index_of(sample.entries.at(0).seq);
      });
  CHECK(tv_distance(counts, table.probs()) < 0.015);
}

TEST_CASE("sbs estimator mode applies the keep k-1 convention") {
  const auto tree = verify::demo_tree8();
  RandomStream a(31);
  RandomStream b(31);
  const auto full = stochastic_beam_search(*tree, 5, a);
  const auto est = sbs_estimator_sample(*tree, 5, b);
  REQUIRE(est.entries.size() == 4);
  REQUIRE(est.kappa.has_value());
  CHECK(*est.kappa == full.entries.back().key);
  for (std::size_t i = 0; i < est.entries.size(); ++i) {
    CHECK(est.entries[i].seq == full.entries[i].seq);
    CHECK(est.entries[i].key > *est.kappa);
  }
  CHECK_THROWS_AS(sbs_estimator_sample(*tree, 1, a), std::domain_error);
}

TEST_CASE("sbs estimator mode reports kappa = -inf when the domain is exhausted") {
  const auto tree = verify::demo_tree8();
  RandomStream stream(37);
  const auto est = sbs_estimator_sample(*tree, 9, stream);
  CHECK(est.exhausted);
  CHECK(est.entries.size() == 8);
  REQUIRE(est.kappa.has_value());
  CHECK(*est.kappa == kNegInf);
}

TEST_CASE("ancestral sampling") {
  SUBCASE("deterministic chain") {
    const auto chain = chain_model();
    RandomStream stream(3);
    const auto e = ancestral_sample(*chain, stream);
    CHECK(e.phi == 0.0);
    CHECK(e.seq.tokens.size() == 3);  // two chain tokens plus EOS
  }
  SUBCASE("phi bookkeeping matches seq_logprob") {
    const auto tree = verify::demo_tree8();
    RandomStream stream(5);
    for (int i = 0; i < 200; ++i) {
      const auto e = ancestral_sample(*tree, stream);
      CHECK(std::abs(e.phi - seq_logprob(*tree, e.seq)) < 1e-9);
    }
  }
  SUBCASE("frequencies match the leaf distribution") {
    const auto tree = verify::demo_tree8();
    const LeafTable table = enumerate_leaves(*tree);
    constexpr std::size_t kRuns = 50000;
    const auto counts = tally_outcomes(
        889, kRuns, table.size(),
        [&](std::size_t, RandomStream& stream) {
          return *table.index_of(ancestral_sample(*tree, stream).seq);
        });
    CHECK(tv_distance(counts, table.probs()) < 0.015);
  }
}

TEST_CASE("rejection sampling without replacement") {
  SUBCASE("single chain needs a single draw") {
    const auto chain = chain_model();
    RandomStream stream(8);
    const auto sample = rejection_swor(*chain, 1, stream, 100);
    CHECK(sample.draws == 1);
    CHECK(sample.entries.size() == 1);
    CHECK(!sample.kappa.has_value());
  }
  SUBCASE("budget error carries the partial sample") {
    const auto chain = chain_model();  // only one distinct sequence exists
    RandomStream stream(9);
    try {
      rejection_swor(*chain, 2, stream, 10);
      FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
      CHECK(e.partial.entries.size() == 1);
      CHECK(e.partial.draws == 10);
    }
  }
  SUBCASE("distinct sequences in first-appearance order") {
    const auto tree = verify::demo_tree8();
    RandomStream stream(10);
    const auto sample = rejection_swor(*tree, 5, stream, 100000);
    std::set<Sequence> distinct;
    for (const auto& e : sample.entries) distinct.insert(e.seq);
    CHECK(distinct.size() == 5);
    CHECK(sample.draws >= 5);
    CHECK(sample.evaluations >= 4 * sample.draws);  // each draw walks >= 4 steps
  }
}

TEST_CASE("mixed-depth trees keep the law through frozen completed entries") {
  // one leaf completes a level before the others, so it rides the beam with a
  // frozen key while deeper candidates are still being expanded
  using Edge = ExplicitTreeModel::Edge;
  const auto tree = ExplicitTreeModel::from_edges(
      {Edge{0, 1, 0, 0.4}, Edge{0, 2, 1, 0.6}, Edge{2, 3, 0, 0.6}, Edge{2, 4, 1, 0.4}});
  const LeafTable table = enumerate_leaves(tree);
  REQUIRE(table.size() == 3);
  const std::size_t n = table.size();

  std::vector<double> probs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::size_t pair[] = {i, j};
      probs.push_back(exact_swor_prob(table, pair));
    }
  }
  constexpr std::size_t kRuns = 50000;
  const auto counts = tally_outcomes(
      892, kRuns, probs.size(),
      [&](std::size_t, RandomStream& stream) {
        const auto sample = stochastic_beam_search(tree, 2, stream);
        const std::size_t i = *table.index_of(sample.entries.at(0).seq);
        const std::size_t j = *table.index_of(sample.entries.at(1).seq);
        return i * (n - 1) + (j > i ? j - 1 : j);
      });
  CHECK(tv_distance(counts, probs) < 0.02);

  const Functional entropy = entropy_functional(tree);
  const double exact = exact_expectation(entropy, table);
  constexpr std::size_t kReplicates = 20000;
  const auto values = run_replicates(893, kReplicates, [&](std::size_t, RandomStream& s) {
    return priority_estimate(entropy, sbs_estimator_sample(tree, 3, s));
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double se = std::sqrt(ss / static_cast<double>(values.size() - 1) /
                              static_cast<double>(values.size()));
  CHECK(std::abs(mean - exact) < 4.0 * se);
}

TEST_CASE("rejection ordered pairs follow the sequential renormalized law") {
  const auto tree = verify::demo_tree8();
  const LeafTable table = enumerate_leaves(*tree);
  const std::size_t n = table.size();
  std::vector<double> probs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const std::size_t pair[] = {i, j};
      probs.push_back(exact_swor_prob(table, pair));
    }
  }
  constexpr std::size_t kRuns = 200000;
  const auto counts = tally_outcomes(
      891, kRuns, probs.size(),
      [&](std::size_t, RandomStream& stream) {
        const auto sample = rejection_swor(*tree, 2, stream, 100000);
        const std::size_t i = *table.index_of(sample.entries.at(0).seq);
        const std::size_t j = *table.index_of(sample.entries.at(1).seq);
        return i * (n - 1) + (j > i ? j - 1 : j);
      });
  CHECK(tv_distance(counts, probs) < 0.01);
}

TEST_CASE("naive stepwise baseline structure") {
  SUBCASE("deterministic chain") {
    const auto chain = chain_model();
    RandomStream stream(11);
    const auto sample = naive_stepwise_swor(*chain, 1, stream);
    REQUIRE(sample.entries.size() == 1);
    CHECK(sample.entries[0].phi == 0.0);
  }
  SUBCASE("k = 1 matches ancestral sampling in distribution") {
    const auto tree = verify::demo_tree8();
    const LeafTable table = enumerate_leaves(*tree);
    constexpr std::size_t kRuns = 50000;
    const auto counts = tally_outcomes(
        890, kRuns, table.size(),
        [&](std::size_t, RandomStream& stream) {
          const auto sample = naive_stepwise_swor(*tree, 1, stream);
          return *table.index_of(sample.entries.at(0).seq);
        });
    CHECK(tv_distance(counts, table.probs()) < 0.015);
  }
  SUBCASE("sequences distinct, keys decreasing") {
    const auto tree = verify::demo_tree8();
    RandomStream stream(13);
    for (int i = 0; i < 100; ++i) {
      const auto sample = naive_stepwise_swor(*tree, 3, stream);
      REQUIRE(sample.entries.size() == 3);
      std::set<Sequence> distinct;
      for (std::size_t j = 0; j < sample.entries.size(); ++j) {
        distinct.insert(sample.entries[j].seq);
        if (j > 0) CHECK(sample.entries[j - 1].key > sample.entries[j].key);
      }
      CHECK(distinct.size() == 3);
    }
  }
}
