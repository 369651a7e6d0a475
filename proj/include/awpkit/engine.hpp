#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "awpkit/estimator.hpp"
#include "awpkit/oracle.hpp"
#include "awpkit/tree.hpp"

namespace awpkit {

struct EngineConfig {
  std::size_t k = 2;
  double delta = 0.05;
  double beta = 4.0;
  std::uint64_t seed = 0;
  RadiusMode radius_mode = RadiusMode::kMin;
  // Use ln(2/delta) in the Bernstein radius instead of the union-bound level.
  bool strict_bernstein = false;
  std::optional<std::uint64_t> max_basic_queries;
};

enum class StopReason { kReachedK, kLeavesOnly, kBudgetExhausted };

std::string_view to_string(StopReason reason);

enum class TraceKind { kSample, kSplit };

struct TraceEvent {
  TraceKind kind;
  NodeId node;
  // Sampled leaf; unused for splits.
  std::size_t leaf = 0;
  // Sampled leaf weight, or the queried right-child weight of a split.
  double value = 0.0;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct PruningResult {
  Pruning pruning;
  // w*_v for every node in the pruning.
  std::map<NodeId, double> node_weights;
  Weighting w_p;
  Weighting w_p_refined;
  QueryLedger ledger;
  // Every node that was ever in the pruning.
  std::map<NodeId, NodeStats> stats;
  std::vector<TraceEvent> trace;
  StopReason stop = StopReason::kReachedK;
  std::uint64_t splits = 0;
};

// SC(v, P): beta (D-hat_v - Delta_v) >= max over rivals of (D-hat + Delta).
bool split_criterion(double beta, double dhat_v, double radius_v, double rival_max_ucb);

// w'_P in leaf order: leaves whose weight is known keep it, the rest of each
// pruning node share its residual mass evenly.
std::vector<double> refined_leaf_weights(const HierTree& tree, const Pruning& p,
                                         const std::map<NodeId, double>& node_weights,
                                         const std::map<std::size_t, double>& known_leaves);

// Adaptive UCB pruning search. One instance performs one run.
class AwpEngine {
 public:
  AwpEngine(WeightOracle& oracle, EngineConfig cfg);

  bool done() const { return stop_.has_value(); }
  // One outer iteration: select, sample, then split while SC holds.
  void step();
  // Argmax of D-hat + Delta over the internal nodes of P; kNoNode if none.
  NodeId select() const;
  // Splits nodes while SC holds and |P| < k; returns the split nodes.
  std::vector<NodeId> split_check();

  const std::vector<NodeId>& pruning() const { return pruning_; }
  const NodeStats& stats(NodeId v) const;
  double ucb(NodeId v) const;
  double lcb(NodeId v) const;

  PruningResult finish() &&;

 private:
  struct Entry {
    NodeStats stats;
    double ucb;
    double lcb;
  };

  void refresh(Entry& e) const;
  void split(NodeId v);
  void check_pruning() const;

  WeightOracle& oracle_;
  const HierTree& tree_;
  EngineConfig cfg_;
  RadiusConfig radius_cfg_;
  std::mt19937_64 rng_;
  std::vector<NodeId> pruning_;
  std::map<NodeId, Entry> entries_;
  std::map<NodeId, double> weights_;
  std::map<std::size_t, double> known_leaves_;
  std::vector<TraceEvent> trace_;
  std::uint64_t basic_used_ = 0;
  std::uint64_t splits_ = 0;
  std::optional<StopReason> stop_;
};

PruningResult run_awp(WeightOracle& oracle, const EngineConfig& cfg);

// tv_distance(w'_P, truth).
double normalized_distance(const PruningResult& result, const WeightTable& truth);

// One event per line: "SAMPLE <node> <leaf_label> <value>" or
// "SPLIT <node> <right_child_weight>".
void write_trace(std::ostream& out, const HierTree& tree, const std::vector<TraceEvent>& trace);

}  // namespace awpkit
