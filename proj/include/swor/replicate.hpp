#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "swor/random.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace swor {

enum class ExecMode { kSerial, kParallel };

/// Runs fn(replicate_index, stream) for each replicate, every replicate on an
/// independent substream of (seed, index). Results land in a slot indexed by
/// replicate, so the output is identical for both modes and never depends on
/// scheduling. The serial path is the reference the OpenMP kernel is tested
/// and benchmarked against.
template <typename Fn>
auto run_replicates(std::uint64_t seed, std::size_t replicates, Fn&& fn,
                    ExecMode mode = ExecMode::kParallel)
    -> std::vector<decltype(fn(std::size_t{}, std::declval<RandomStream&>()))> {
  using Result = decltype(fn(std::size_t{}, std::declval<RandomStream&>()));
  std::vector<Result> out(replicates);
#ifdef _OPENMP
  if (mode == ExecMode::kParallel) {
#pragma omp parallel for schedule(dynamic, 64)
    for (long long r = 0; r < static_cast<long long>(replicates); ++r) {
      RandomStream stream =
          RandomStream::substream(seed, static_cast<std::uint64_t>(r));
      out[static_cast<std::size_t>(r)] = fn(static_cast<std::size_t>(r), stream);
    }
    return out;
  }
#else
  (void)mode;
#endif
  for (std::size_t r = 0; r < replicates; ++r) {
    RandomStream stream = RandomStream::substream(seed, r);
    out[r] = fn(r, stream);
  }
  return out;
}

/// Tallies per-replicate outcome indices into counts, merged serially so the
/// result is independent of scheduling. fn must return an index below
/// n_outcomes.
template <typename Fn>
std::vector<long long> tally_outcomes(std::uint64_t seed, std::size_t replicates,
                                      std::size_t n_outcomes, Fn&& fn,
                                      ExecMode mode = ExecMode::kParallel) {
  const std::vector<std::size_t> outcomes =
      run_replicates(seed, replicates, std::forward<Fn>(fn), mode);
  std::vector<long long> counts(n_outcomes, 0);
  for (std::size_t o : outcomes) {
    ++counts.at(o);
  }
  return counts;
}

}  // namespace swor
