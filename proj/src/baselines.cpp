#include "awpkit/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "awpkit/discrepancy.hpp"

namespace awpkit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_request(const HierTree& tree, std::size_t k, const Budget& budget) {
  if (k < 1 || k > tree.leaf_count()) throw ArgumentError("pruning size outside [1, leaf count]");
  if (budget.node + 1 < k) throw ArgumentError("node-query budget below k-1");
}

PruningResult draw_and_run(WeightOracle& oracle, std::size_t k, const Budget& budget,
                           std::uint64_t seed, SplitScore score) {
  const auto& tree = oracle.tree();
  check_request(tree, k, budget);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, tree.leaf_count() - 1);
  std::vector<std::size_t> draws(budget.basic);
  std::vector<double> values(budget.basic);
  for (std::uint64_t i = 0; i < budget.basic; ++i) {
    draws[i] = pick(rng);
    values[i] = oracle.query_leaf(draws[i], tree.root());
  }
  return run_non_adaptive(oracle, k, budget, score, std::move(draws), std::move(values));
}

}  // namespace

Budget match_budget(const PruningResult& awp_result) {
  return {awp_result.ledger.basic_queries, awp_result.ledger.node_queries};
}

double naive_empirical_score(const NodeStats& stats) {
  const auto m = stats.sample_count();
  if (m == 0) throw ArgumentError("empirical score needs at least one sample");
  CompensatedSum dev;
  for (double z : stats.samples()) dev.add(std::abs(stats.mean_leaf_weight() - z));
  return static_cast<double>(stats.leaf_count()) / static_cast<double>(m) * dev.value();
}

PruningResult run_non_adaptive(WeightOracle& oracle, std::size_t k, const Budget& budget,
                               SplitScore score, std::vector<std::size_t> draws,
                               std::vector<double> values) {
  const auto& tree = oracle.tree();
  check_request(tree, k, budget);
  if (draws.size() != values.size()) throw ArgumentError("draws and values differ in length");

  PruningResult out;
  std::map<std::size_t, double> known;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    out.trace.push_back({TraceKind::kSample, tree.root(), draws[i], values[i]});
    known[draws[i]] = values[i];
  }

  // Canonical order makes every node's score independent of draw order.
  std::vector<std::size_t> order(draws.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (draws[a] != draws[b]) return draws[a] < draws[b];
    return values[a] < values[b];
  });
  std::vector<std::size_t> sorted_leaf(order.size());
  std::vector<double> sorted_value(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_leaf[i] = draws[order[i]];
    sorted_value[i] = values[order[i]];
  }

  std::vector<NodeId> pruning{tree.root()};
  std::map<NodeId, double> weights{{tree.root(), 1.0}};
  std::map<NodeId, double> scores;

  auto admit = [&](NodeId v) {
    NodeStats stats(v, weights.at(v), tree.leaf_count(v));
    const auto range = tree.leaf_range(v);
    auto lo = std::lower_bound(sorted_leaf.begin(), sorted_leaf.end(), range.begin);
    auto hi = std::lower_bound(sorted_leaf.begin(), sorted_leaf.end(), range.end);
    for (auto it = lo; it != hi; ++it) {
      stats.add_sample(sorted_value[static_cast<std::size_t>(it - sorted_leaf.begin())]);
    }
    double s = kNegInf;
    switch (score) {
      case SplitScore::kWeight:
        s = weights.at(v);
        break;
      case SplitScore::kEstimator:
        if (stats.sample_count() > 0) s = dhat(stats);
        break;
      case SplitScore::kEmpirical:
        if (stats.sample_count() > 0) s = naive_empirical_score(stats);
        break;
    }
    scores[v] = s;
    out.stats.insert_or_assign(v, std::move(stats));
  };
  admit(tree.root());

  while (pruning.size() < k) {
    NodeId best = kNoNode;
    for (NodeId v : pruning) {
      if (tree.is_leaf(v)) continue;
      if (best == kNoNode || scores.at(v) > scores.at(best)) best = v;
    }
    if (best == kNoNode) {
      out.stop = StopReason::kLeavesOnly;
      break;
    }
    if (scores.at(best) == kNegInf) {
      // Nothing sampled anywhere: fall back to the heaviest node.
      best = kNoNode;
      for (NodeId v : pruning) {
        if (tree.is_leaf(v)) continue;
        if (best == kNoNode || weights.at(v) > weights.at(best)) best = v;
      }
    }

    const NodeId l = tree.left(best);
    const NodeId r = tree.right(best);
    const double w_r = oracle.query_node(r);
    double w_l = weights.at(best) - w_r;
    if (w_l < 0.0) {
      if (w_l < -1e-12) throw InvariantError("derived left-child mass is negative");
      w_l = 0.0;
    }
    pruning.erase(std::find(pruning.begin(), pruning.end(), best));
    pruning.insert(std::upper_bound(pruning.begin(), pruning.end(), l), l);
    pruning.insert(std::upper_bound(pruning.begin(), pruning.end(), r), r);
    weights.erase(best);
    weights[l] = w_l;
    weights[r] = w_r;
    admit(l);
    admit(r);
    out.trace.push_back({TraceKind::kSplit, best, 0, w_r});
    ++out.splits;
  }

  out.pruning = Pruning(pruning);
  if (!is_pruning(tree, out.pruning)) throw InvariantError("baseline state is not a pruning");
  out.node_weights = weights;
  out.w_p = induced_weighting(tree, out.pruning, out.node_weights);
  out.w_p_refined = Weighting::from_leaf_vector(
      tree, refined_leaf_weights(tree, out.pruning, out.node_weights, known));
  out.ledger = oracle.ledger();
  return out;
}

PruningResult run_weight(WeightOracle& oracle, std::size_t k, const Budget& budget,
                         std::uint64_t seed) {
  return draw_and_run(oracle, k, budget, seed, SplitScore::kWeight);
}

PruningResult run_uniform(WeightOracle& oracle, std::size_t k, const Budget& budget,
                          std::uint64_t seed) {
  return draw_and_run(oracle, k, budget, seed, SplitScore::kEstimator);
}

PruningResult run_empirical(WeightOracle& oracle, std::size_t k, const Budget& budget,
                            std::uint64_t seed) {
  return draw_and_run(oracle, k, budget, seed, SplitScore::kEmpirical);
}

}  // namespace awpkit
