#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "swor/replicate.hpp"
#include "swor/seqmodel.hpp"

namespace swor::verify {

/// One measured check: pass iff `measured cmp threshold`.
struct CheckResult {
  std::string suite;
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  enum class Cmp { kLess, kLessEq, kGreater } cmp = Cmp::kLess;
  bool pass = false;
  std::string note;
};

struct Options {
  std::uint64_t seed = 20240613;
  ExecMode mode = ExecMode::kParallel;
  /// Tree the distributional suites run against; the bundled 8-leaf tree
  /// when unset.
  std::shared_ptr<const ExplicitTreeModel> tree;
};

const std::vector<std::string>& suite_names();
std::vector<CheckResult> run_suite(const std::string& suite, const Options& opt);
std::vector<CheckResult> run_all(const Options& opt);
bool all_pass(const std::vector<CheckResult>& results);
std::string format_result(const CheckResult& r);

/// Bundled demo models: an 8-leaf depth-3 tree, a 4-leaf depth-2 tree, and a
/// two-leaf tree with P(first leaf) = p0.
std::shared_ptr<const ExplicitTreeModel> demo_tree8();
std::shared_ptr<const ExplicitTreeModel> demo_tree4();
std::shared_ptr<const ExplicitTreeModel> two_leaf_tree(double p0);

/// Bundled training text for the Markov-model suites.
const std::string& demo_corpus();

}  // namespace swor::verify
