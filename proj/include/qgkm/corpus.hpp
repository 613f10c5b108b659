#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace qgkm {

/// Options for one corpus run. `seed` feeds the RNG behind the randomized
/// rescalings of the matcher criterion; `mutate` injects one deterministic
/// fault (a mixed column pair in one verified basis) that the run must
/// detect; `only` restricts the run to the listed criteria (empty = all).
struct CorpusOptions {
  std::uint64_t seed = 0;
  bool mutate = false;
  std::set<int> only;
};

struct CriterionResult {
  int number = 0;
  std::string title;
  bool passed = true;
  std::vector<std::string> notes;
};

struct CorpusReport {
  std::uint64_t seed = 0;
  bool mutated = false;
  std::vector<CriterionResult> criteria;
  bool passed = true;

  /// Plain-text rendering; byte-identical for identical options.
  std::string render() const;
};

/// Names of the ten corpus criteria, indexed by number - 1.
const std::vector<std::string>& corpus_criterion_titles();

/// Builds every corpus model from scratch and runs the selected acceptance
/// criteria against it. Deterministic: two runs with equal options return
/// reports with equal render().
CorpusReport run_corpus(const CorpusOptions& opts);

}  // namespace qgkm
