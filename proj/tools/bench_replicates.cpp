// Benchmark: OpenMP replicate fan-out against the serial reference path.
// Both paths derive one substream per replicate, so their outputs must match
// exactly; the benchmark verifies that while timing the two kernels.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "swor/estimators.hpp"
#include "swor/replicate.hpp"
#include "swor/search.hpp"
#include "swor/verify.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace swor;

namespace {

double now_seconds() {
  using Clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(Clock::now().time_since_epoch()).count();
}

template <typename Job>
void bench(const char* name, std::size_t replicates, Job&& job) {
  const double t0 = now_seconds();
  const auto serial = run_replicates(1234, replicates, job, ExecMode::kSerial);
  const double t1 = now_seconds();
  const auto parallel = run_replicates(1234, replicates, job, ExecMode::kParallel);
  const double t2 = now_seconds();

  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < serial.size(); ++i) {
    if (serial[i] != parallel[i]) ++mismatches;
  }
  const double serial_s = t1 - t0;
  const double parallel_s = t2 - t1;
  std::printf("%-24s replicates=%zu serial=%.3fs parallel=%.3fs speedup=%.2fx mismatches=%zu\n",
              name, replicates, serial_s, parallel_s,
              parallel_s > 0.0 ? serial_s / parallel_s : 0.0, mismatches);
  if (mismatches != 0) {
    std::fprintf(stderr, "FAIL: parallel kernel diverged from the serial reference\n");
    std::exit(1);
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::size_t replicates = 200000;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--replicates") == 0 && i + 1 < argc) {
      replicates = static_cast<std::size_t>(std::strtoull(argv[i + 1], nullptr, 10));
      ++i;
    } else {
      std::fprintf(stderr, "usage: %s [--replicates N]\n", argv[0]);
      return 2;
    }
  }

#ifdef _OPENMP
  std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
  std::printf("openmp not enabled; parallel mode falls back to serial\n");
#endif

  const auto tree = verify::demo_tree8();
  const Functional entropy = entropy_functional(*tree);
  bench("sbs-tree-k4", replicates, [&](std::size_t, RandomStream& stream) {
    return priority_estimate(entropy, sbs_estimator_sample(*tree, 5, stream));
  });

  const auto markov = std::make_shared<MarkovTextModel>(
      train_markov(verify::demo_corpus(), 2, 0.05, 16));
  const auto sharp = apply_temperature(markov, 0.2);
  const Functional sharp_entropy = entropy_functional(*sharp);
  bench("sbs-markov-k8", replicates / 20 + 1, [&](std::size_t, RandomStream& stream) {
    return normalized_estimate(sharp_entropy, sbs_estimator_sample(*sharp, 8, stream));
  });

  return 0;
}
