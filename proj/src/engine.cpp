#include "awpkit/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "awpkit/discrepancy.hpp"
#include "awpkit/io.hpp"

namespace awpkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDriftTolerance = 1e-12;

double clamp_drift(double x, const char* what) {
  if (x >= 0.0) return x;
  if (x >= -kDriftTolerance) return 0.0;
  throw InvariantError(std::string(what) + " is negative beyond rounding drift");
}

}  // namespace

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kReachedK: return "reached-k";
    case StopReason::kLeavesOnly: return "leaves-only";
    case StopReason::kBudgetExhausted: return "budget-exhausted";
  }
  return "unknown";
}

bool split_criterion(double beta, double dhat_v, double radius_v, double rival_max_ucb) {
  return beta * (dhat_v - radius_v) >= rival_max_ucb;
}

std::vector<double> refined_leaf_weights(const HierTree& tree, const Pruning& p,
                                         const std::map<NodeId, double>& node_weights,
                                         const std::map<std::size_t, double>& known_leaves) {
  auto out = induced_leaf_weights(tree, p, node_weights);
  for (NodeId v : p) {
    const auto range = tree.leaf_range(v);
    auto first = known_leaves.lower_bound(range.begin);
    auto last = known_leaves.lower_bound(range.end);
    if (first == last) continue;
    CompensatedSum known_mass;
    std::size_t known_count = 0;
    for (auto it = first; it != last; ++it) {
      known_mass.add(it->second);
      ++known_count;
    }
    if (known_count < range.size()) {
      const double residual = clamp_drift(node_weights.at(v) - known_mass.value(), "residual mass");
      const double share = residual / static_cast<double>(range.size() - known_count);
      std::fill(out.begin() + range.begin, out.begin() + range.end, share);
    }
    for (auto it = first; it != last; ++it) out[it->first] = it->second;
  }
  return out;
}

AwpEngine::AwpEngine(WeightOracle& oracle, EngineConfig cfg)
    : oracle_(oracle),
      tree_(oracle.tree()),
      cfg_(cfg),
      radius_cfg_{cfg.k, cfg.delta, cfg.radius_mode, cfg.strict_bernstein},
      rng_(cfg.seed) {
  if (cfg_.k < 2) throw ArgumentError("pruning size K must be at least 2");
  if (cfg_.k > tree_.leaf_count()) throw ArgumentError("pruning size K exceeds leaf count");
  if (!(cfg_.delta > 0.0 && cfg_.delta < 1.0)) throw ArgumentError("delta must lie in (0, 1)");
  if (!(cfg_.beta > 1.0)) throw ArgumentError("beta must exceed 1");

  // The root's mass is one by normalization; no query is spent on it.
  const NodeId root = tree_.root();
  pruning_.push_back(root);
  weights_[root] = 1.0;
  Entry e{NodeStats(root, 1.0, tree_.leaf_count(root)), 0.0, 0.0};
  refresh(e);
  entries_.emplace(root, std::move(e));
}

void AwpEngine::refresh(Entry& e) const {
  const auto v = e.stats.node_id();
  if (tree_.is_leaf(v)) {
    e.ucb = 0.0;
    e.lcb = 0.0;
    return;
  }
  if (e.stats.sample_count() == 0) {
    e.ucb = kInf;
    e.lcb = -kInf;
    return;
  }
  const double d = dhat(e.stats);
  const double r = radius(e.stats, radius_cfg_);
  e.ucb = d + r;
  e.lcb = d - r;
}

const NodeStats& AwpEngine::stats(NodeId v) const { return entries_.at(v).stats; }
double AwpEngine::ucb(NodeId v) const { return entries_.at(v).ucb; }
double AwpEngine::lcb(NodeId v) const { return entries_.at(v).lcb; }

NodeId AwpEngine::select() const {
  NodeId best = kNoNode;
  double best_ucb = -kInf;
  for (NodeId v : pruning_) {
    if (tree_.is_leaf(v)) continue;
    const double u = entries_.at(v).ucb;
    if (best == kNoNode || u > best_ucb) {
      best = v;
      best_ucb = u;
    }
  }
  return best;
}

void AwpEngine::step() {
  if (done()) return;
  if (pruning_.size() >= cfg_.k) {
    stop_ = StopReason::kReachedK;
    return;
  }
  const NodeId vs = select();
  if (vs == kNoNode) {
    stop_ = StopReason::kLeavesOnly;
    return;
  }
  if (cfg_.max_basic_queries && basic_used_ >= *cfg_.max_basic_queries) {
    stop_ = StopReason::kBudgetExhausted;
    return;
  }

  const auto range = tree_.leaf_range(vs);
  std::uniform_int_distribution<std::size_t> pick(range.begin, range.end - 1);
  const std::size_t leaf = pick(rng_);
  const double value = oracle_.query_leaf(leaf, vs);
  ++basic_used_;
  auto& e = entries_.at(vs);
  e.stats.add_sample(value);
  refresh(e);
  known_leaves_[leaf] = value;
  trace_.push_back({TraceKind::kSample, vs, leaf, value});

  split_check();
  if (pruning_.size() >= cfg_.k) stop_ = StopReason::kReachedK;
}

std::vector<NodeId> AwpEngine::split_check() {
  std::vector<NodeId> performed;
  while (pruning_.size() < cfg_.k) {
    // Two largest UCBs give every node's rival maximum in one pass.
    NodeId top = kNoNode;
    double top_ucb = -kInf;
    double second_ucb = -kInf;
    for (NodeId v : pruning_) {
      const double u = entries_.at(v).ucb;
      if (top == kNoNode || u > top_ucb) {
        second_ucb = top_ucb;
        top = v;
        top_ucb = u;
      } else if (u > second_ucb) {
        second_ucb = u;
      }
    }

    NodeId chosen = kNoNode;
    for (NodeId v : pruning_) {
      if (tree_.is_leaf(v)) continue;
      const auto& e = entries_.at(v);
      if (e.stats.sample_count() == 0) continue;
      const double rival = v == top ? second_ucb : top_ucb;
      if (cfg_.beta * e.lcb >= rival) {
        chosen = v;
        break;
      }
    }
    if (chosen == kNoNode) break;
    split(chosen);
    performed.push_back(chosen);
  }
  return performed;
}

void AwpEngine::split(NodeId v) {
  const NodeId l = tree_.left(v);
  const NodeId r = tree_.right(v);
  const double w_v = weights_.at(v);
  const double w_r = oracle_.query_node(r);
  const double w_l = clamp_drift(w_v - w_r, "derived left-child mass");

  pruning_.erase(std::find(pruning_.begin(), pruning_.end(), v));
  pruning_.insert(std::upper_bound(pruning_.begin(), pruning_.end(), l), l);
  pruning_.insert(std::upper_bound(pruning_.begin(), pruning_.end(), r), r);
  weights_[l] = w_l;
  weights_[r] = w_r;
  for (auto [child, mass] : {std::pair{l, w_l}, std::pair{r, w_r}}) {
    Entry e{NodeStats(child, mass, tree_.leaf_count(child)), 0.0, 0.0};
    refresh(e);
    entries_.insert_or_assign(child, std::move(e));
  }
  trace_.push_back({TraceKind::kSplit, v, 0, w_r});
  ++splits_;
#ifndef NDEBUG
  check_pruning();
#endif
}

void AwpEngine::check_pruning() const {
  if (!is_pruning(tree_, Pruning(pruning_))) {
    throw InvariantError("engine state is not a pruning");
  }
}

PruningResult AwpEngine::finish() && {
  check_pruning();
  PruningResult out;
  out.pruning = Pruning(pruning_);
  for (NodeId v : pruning_) out.node_weights[v] = weights_.at(v);
  out.w_p = induced_weighting(tree_, out.pruning, out.node_weights);
  out.w_p_refined = Weighting::from_leaf_vector(
      tree_, refined_leaf_weights(tree_, out.pruning, out.node_weights, known_leaves_));
  out.ledger = oracle_.ledger();
  for (auto& [v, e] : entries_) out.stats.emplace(v, std::move(e.stats));
  out.trace = std::move(trace_);
  out.stop = stop_.value_or(pruning_.size() >= cfg_.k ? StopReason::kReachedK
                                                      : StopReason::kBudgetExhausted);
  out.splits = splits_;
  return out;
}

PruningResult run_awp(WeightOracle& oracle, const EngineConfig& cfg) {
  AwpEngine engine(oracle, cfg);
  while (!engine.done()) engine.step();
  return std::move(engine).finish();
}

double normalized_distance(const PruningResult& result, const WeightTable& truth) {
  return tv_distance(result.w_p_refined, truth);
}

void write_trace(std::ostream& out, const HierTree& tree, const std::vector<TraceEvent>& trace) {
  for (const auto& ev : trace) {
    if (ev.kind == TraceKind::kSample) {
      out << "SAMPLE " << ev.node << ' ' << tree.leaf_label(ev.leaf) << ' '
          << format_double(ev.value) << '\n';
    } else {
      out << "SPLIT " << ev.node << ' ' << format_double(ev.value) << '\n';
    }
  }
}

}  // namespace awpkit
