#pragma once

#include <cstdint>

#include "awpkit/engine.hpp"
#include "awpkit/estimator.hpp"
#include "awpkit/oracle.hpp"

namespace awpkit {

// Query allowance copied from an adaptive run.
struct Budget {
  std::uint64_t basic = 0;
  std::uint64_t node = 0;
  friend bool operator==(const Budget&, const Budget&) = default;
};

Budget match_budget(const PruningResult& awp_result);

// Plug-in estimate (N_v / m) * sum |w*_v / N_v - z_i|. Throws ArgumentError
// without samples.
double naive_empirical_score(const NodeStats& stats);

// Non-adaptive baselines. Each spends exactly k-1 node queries (fewer only
// when the pruning runs out of internal nodes) and exactly budget.basic leaf
// queries drawn uniformly with replacement from the whole leaf set. Leaf
// queries are charged to the root in the ledger. Throws ArgumentError when
// budget.node < k-1 or k is outside [1, leaf count].

// Splits the heaviest pruning node each time.
PruningResult run_weight(WeightOracle& oracle, std::size_t k, const Budget& budget,
                         std::uint64_t seed);
// Splits the node with the largest D-hat computed from the pre-drawn sample.
PruningResult run_uniform(WeightOracle& oracle, std::size_t k, const Budget& budget,
                          std::uint64_t seed);
// As run_uniform, scored by naive_empirical_score.
PruningResult run_empirical(WeightOracle& oracle, std::size_t k, const Budget& budget,
                            std::uint64_t seed);

enum class SplitScore { kWeight, kEstimator, kEmpirical };

// Shared driver; `draws` are leaf indices already charged to the oracle.
// Exposed so the order-independence of the scores can be tested directly.
PruningResult run_non_adaptive(WeightOracle& oracle, std::size_t k, const Budget& budget,
                               SplitScore score, std::vector<std::size_t> draws,
                               std::vector<double> values);

}  // namespace awpkit
