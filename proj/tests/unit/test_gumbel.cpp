#include "swor/gumbel.hpp"

#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "swor/replicate.hpp"

using namespace swor;

namespace {

const std::vector<LogValue> demo8_phis() {
  const std::vector<double> p{0.05, 0.15, 0.15, 0.25, 0.20, 0.10, 0.05, 0.05};
  std::vector<LogValue> phis;
  for (double x : p) phis.push_back(std::log(x));
  return phis;
}

}  // namespace

TEST_CASE("gumbel_from_uniform pinned values") {
  CHECK(gumbel_from_uniform(std::exp(-1.0), 0.0) == 0.0);
  CHECK(gumbel_from_uniform(std::exp(-1.0), 1.5) == 1.5);
  CHECK(gumbel_from_uniform(std::exp(-std::exp(1.0)), 0.0) == -1.0);
  CHECK(gumbel_from_uniform(0.5, kNegInf) == kNegInf);
  CHECK_THROWS_AS(gumbel_from_uniform(0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(gumbel_from_uniform(1.0, 0.0), std::domain_error);
}

TEST_CASE("shift equivariance for a fixed uniform") {
  for (double u : {std::exp(-1.0), 0.2, 0.5, 0.93}) {
    for (double phi : {-4.0, -1.25, 0.0, 0.5, 3.0}) {
      // the shifted draw is the zero-location draw plus phi, bit for bit
      CHECK(gumbel_from_uniform(u, phi) == gumbel_from_uniform(u, 0.0) + phi);
      // the subtracted form recovers phi to rounding
      const double diff = gumbel_from_uniform(u, phi) - gumbel_from_uniform(u, 0.0);
      CHECK(std::abs(diff - phi) <= 4.0 * std::abs(phi) * 1e-16);
    }
  }
}

TEST_CASE("sample_gumbel consumes one uniform also for -inf") {
  RandomStream a(9);
  RandomStream b(9);
  (void)sample_gumbel(a, kNegInf);
  (void)b.uniform();
  CHECK(sample_gumbel(a, 0.0) == sample_gumbel(b, 0.0));
}

TEST_CASE("argtop_k ordering and ties") {
  const std::vector<double> v{3.0, 1.0, 2.0};
  CHECK(argtop_k(v, 2) == std::vector<std::size_t>{0, 2});
  const std::vector<double> ties{5.0, 5.0};
  CHECK(argtop_k(ties, 2) == std::vector<std::size_t>{0, 1});
  const std::vector<double> one{1.0};
  CHECK(argtop_k(one, 1) == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(argtop_k(one, 2), std::domain_error);
}

TEST_CASE("gumbel_max forced cases") {
  RandomStream stream(1);
  const std::vector<LogValue> single{0.0};
  CHECK(gumbel_max(single, stream) == 0);
  const std::vector<LogValue> masked{0.0, kNegInf};
  CHECK(gumbel_max(masked, stream) == 0);
  const std::vector<LogValue> dead{kNegInf, kNegInf};
  CHECK_THROWS_AS(gumbel_max(dead, stream), std::domain_error);
}

TEST_CASE("gumbel_max matches the categorical law") {
  const std::vector<LogValue> phis{std::log(0.6), std::log(0.4)};
  constexpr std::size_t kRuns = 200000;
  const auto counts = tally_outcomes(
      77001, kRuns, 2,
      [&](std::size_t, RandomStream& s) { return gumbel_max(phis, s); });
  const double freq0 = static_cast<double>(counts[0]) / static_cast<double>(kRuns);
  CHECK(std::abs(freq0 - 0.6) < 0.01);
}

TEST_CASE("monotone invariance under a constant shift") {
  const auto phis = demo8_phis();
  for (double c : {-5.0, 0.0, 12.5}) {
    std::vector<LogValue> shifted;
    for (double p : phis) shifted.push_back(p + c);
    RandomStream s1(31);
    RandomStream s2(31);
    CHECK(gumbel_max(phis, s1) == gumbel_max(shifted, s2));
    RandomStream s3(32);
    RandomStream s4(32);
    CHECK(gumbel_top_k(phis, 3, s3) == gumbel_top_k(shifted, 3, s4));
  }
}

TEST_CASE("gumbel_top_k structure") {
  const auto phis = demo8_phis();
  RandomStream stream(5);
  SUBCASE("k = n yields a permutation") {
    const auto order = gumbel_top_k(phis, phis.size(), stream);
    std::vector<bool> seen(phis.size(), false);
    for (std::size_t i : order) {
      CHECK(!seen[i]);
      seen[i] = true;
    }
  }
  SUBCASE("k = 1 equals gumbel_max on the same stream state") {
    RandomStream a(6);
    RandomStream b(6);
    CHECK(gumbel_top_k(phis, 1, a)[0] == gumbel_max(phis, b));
  }
  SUBCASE("k above the finite-category count throws") {
    const std::vector<LogValue> masked{0.0, kNegInf};
    RandomStream s(7);
    CHECK_THROWS_AS(gumbel_top_k(masked, 2, s), std::domain_error);
  }
}

TEST_CASE("gumbel_top_k ordered-pair frequency matches the sequential law") {
  const auto phis = demo8_phis();
  constexpr std::size_t kRuns = 200000;
  const auto counts = tally_outcomes(
      77002, kRuns, 64,
      [&](std::size_t, RandomStream& s) {
        const auto picked = gumbel_top_k(phis, 2, s);
        return picked[0] * 8 + picked[1];
      });
  // pair (leaf p=0.25, leaf p=0.20): 0.25 * 0.20 / 0.75 = 1/15
  const double freq = static_cast<double>(counts[3 * 8 + 4]) / static_cast<double>(kRuns);
  CHECK(std::abs(freq - 1.0 / 15.0) < 0.005);
}

TEST_CASE("gumbel_top_k pair distribution passes a chi-square test") {
  const auto phis = demo8_phis();
  const std::vector<double> p{0.05, 0.15, 0.15, 0.25, 0.20, 0.10, 0.05, 0.05};
  std::vector<double> probs;
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < 8; ++i) {
    for (std::size_t j = 0; j < 8; ++j) {
      if (i == j) continue;
      probs.push_back(p[i] * p[j] / (1.0 - p[i]));
      cells.push_back(i * 8 + j);
    }
  }
  constexpr std::size_t kRuns = 200000;
  const auto raw = tally_outcomes(
      77003, kRuns, 64,
      [&](std::size_t, RandomStream& s) {
        const auto picked = gumbel_top_k(phis, 2, s);
        return picked[0] * 8 + picked[1];
      });
  double stat = 0.0;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const double expected = probs[c] * static_cast<double>(kRuns);
    const double diff = static_cast<double>(raw[cells[c]]) - expected;
    stat += diff * diff / expected;
  }
  // chi-square critical value at significance 1e-3 with dof 55
  CHECK(stat < 93.16753277222854);
}
