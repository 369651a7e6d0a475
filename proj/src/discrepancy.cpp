#include "awpkit/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace awpkit {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    correction_ += (sum_ - t) + x;
  } else {
    correction_ += (x - t) + sum_;
  }
  sum_ = t;
}

namespace {

void check_length(const HierTree& tree, std::span<const double> leaf_weights) {
  if (leaf_weights.size() != tree.leaf_count()) {
    throw ArgumentError("leaf weight vector has " + std::to_string(leaf_weights.size()) +
                        " entries, tree has " + std::to_string(tree.leaf_count()) + " leaves");
  }
}

double range_discrepancy(LeafRange range, std::span<const double> leaf_weights) {
  CompensatedSum mass;
  for (std::size_t i = range.begin; i < range.end; ++i) mass.add(leaf_weights[i]);
  const double avg = mass.value() / static_cast<double>(range.size());
  CompensatedSum d;
  for (std::size_t i = range.begin; i < range.end; ++i) d.add(std::abs(avg - leaf_weights[i]));
  return d.value();
}

// Children before parents.
std::vector<NodeId> bottom_up_order(const HierTree& tree) {
  std::vector<NodeId> order(tree.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return tree.depth(a) > tree.depth(b); });
  return order;
}

// Discrepancies this small relative to the node's mass are rounding noise
// from an exactly uniform node.
bool positive_discrepancy(double d, double mass) {
  return d > 1e-12 * std::max(mass, std::numeric_limits<double>::min());
}

}  // namespace

double node_discrepancy(const HierTree& tree, NodeId v, std::span<const double> leaf_weights) {
  check_length(tree, leaf_weights);
  return range_discrepancy(tree.leaf_range(v), leaf_weights);
}

double node_discrepancy(const HierTree& tree, NodeId v, const WeightTable& w) {
  tree.leaf_range(v);
  return node_discrepancy(tree, v, w.aligned(tree));
}

std::vector<double> all_node_discrepancies(const HierTree& tree,
                                           std::span<const double> leaf_weights) {
  check_length(tree, leaf_weights);
  std::vector<double> out(tree.node_count());
  for (std::size_t id = 0; id < out.size(); ++id) {
    out[id] = range_discrepancy(tree.leaf_range(static_cast<NodeId>(id)), leaf_weights);
  }
  return out;
}

std::vector<double> node_masses(const HierTree& tree, std::span<const double> leaf_weights) {
  check_length(tree, leaf_weights);
  std::vector<double> out(tree.node_count(), 0.0);
  for (NodeId v : bottom_up_order(tree)) {
    out[v] = tree.is_leaf(v) ? leaf_weights[tree.leaf_range(v).begin]
                             : out[tree.left(v)] + out[tree.right(v)];
  }
  return out;
}

bool is_pruning(const HierTree& tree, const Pruning& p) {
  std::vector<int> delta(tree.leaf_count() + 1, 0);
  for (NodeId v : p) {
    const auto range = tree.leaf_range(v);
    ++delta[range.begin];
    --delta[range.end];
  }
  int cover = 0;
  for (std::size_t i = 0; i < tree.leaf_count(); ++i) {
    cover += delta[i];
    if (cover != 1) return false;
  }
  return true;
}

double pruning_discrepancy(const HierTree& tree, const Pruning& p,
                           std::span<const double> leaf_weights) {
  check_length(tree, leaf_weights);
  if (!is_pruning(tree, p)) throw ArgumentError("node set is not a pruning");
  CompensatedSum total;
  for (NodeId v : p) total.add(range_discrepancy(tree.leaf_range(v), leaf_weights));
  return total.value();
}

double pruning_discrepancy(const HierTree& tree, const Pruning& p, const WeightTable& w) {
  return pruning_discrepancy(tree, p, w.aligned(tree));
}

std::vector<double> induced_leaf_weights(const HierTree& tree, const Pruning& p,
                                         const std::map<NodeId, double>& node_weights) {
  if (!is_pruning(tree, p)) throw ArgumentError("node set is not a pruning");
  std::vector<double> out(tree.leaf_count(), 0.0);
  for (NodeId v : p) {
    auto it = node_weights.find(v);
    if (it == node_weights.end()) {
      throw ArgumentError("missing weight for pruning node " + std::to_string(v));
    }
    if (!(it->second >= 0.0)) {
      throw ArgumentError("negative weight for pruning node " + std::to_string(v));
    }
    const auto range = tree.leaf_range(v);
    const double share = it->second / static_cast<double>(range.size());
    std::fill(out.begin() + range.begin, out.begin() + range.end, share);
  }
  return out;
}

Weighting induced_weighting(const HierTree& tree, const Pruning& p,
                            const std::map<NodeId, double>& node_weights) {
  return Weighting::from_leaf_vector(tree, induced_leaf_weights(tree, p, node_weights));
}

double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ArgumentError("l1 distance over different supports");
  CompensatedSum d;
  for (std::size_t i = 0; i < a.size(); ++i) d.add(std::abs(a[i] - b[i]));
  return d.value();
}

double tv_distance(const MassTable& a, const MassTable& b) {
  if (a.size() != b.size()) throw InputError("weightings are over different leaf sets");
  CompensatedSum d;
  auto ib = b.masses().begin();
  for (const auto& [label, mass] : a.masses()) {
    if (ib->first != label) throw InputError("weightings are over different leaf sets");
    d.add(std::abs(mass - ib->second));
    ++ib;
  }
  return 0.5 * d.value();
}

namespace {

template <typename Visit>
void for_each_positive_split(const HierTree& tree, std::span<const double> leaf_weights,
                             Visit&& visit) {
  const auto d = all_node_discrepancies(tree, leaf_weights);
  const auto mass = node_masses(tree, leaf_weights);
  for (std::size_t id = 0; id < d.size(); ++id) {
    const auto v = static_cast<NodeId>(id);
    if (tree.is_leaf(v) || !positive_discrepancy(d[v], mass[v])) continue;
    visit(d[tree.left(v)] / d[v], d[tree.right(v)] / d[v]);
  }
}

}  // namespace

std::optional<double> split_quality(const HierTree& tree, std::span<const double> leaf_weights) {
  std::optional<double> q;
  for_each_positive_split(tree, leaf_weights, [&](double l, double r) {
    q = std::max({q.value_or(0.0), l, r});
  });
  return q;
}

std::optional<double> split_quality(const HierTree& tree, const WeightTable& w) {
  return split_quality(tree, w.aligned(tree));
}

std::optional<double> average_split_quality(const HierTree& tree,
                                            std::span<const double> leaf_weights) {
  double sum = 0.0;
  std::size_t count = 0;
  for_each_positive_split(tree, leaf_weights, [&](double l, double r) {
    sum += std::max(l, r);
    ++count;
  });
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

std::optional<double> average_split_quality(const HierTree& tree, const WeightTable& w) {
  return average_split_quality(tree, w.aligned(tree));
}

OptimalPruning optimal_pruning(const HierTree& tree, std::size_t k,
                               std::span<const double> leaf_weights) {
  check_length(tree, leaf_weights);
  if (k < 1 || k > tree.leaf_count()) {
    throw ArgumentError("pruning size must lie in [1, leaf count]");
  }
  const auto d = all_node_discrepancies(tree, leaf_weights);

  // cost[v][b-1]: best discrepancy using at most b nodes under v.
  // split[v][b-1]: left budget of the best split, 0 when v is kept whole.
  std::vector<std::vector<double>> cost(tree.node_count());
  std::vector<std::vector<std::size_t>> split(tree.node_count());
  for (NodeId v : bottom_up_order(tree)) {
    const auto cap = std::min(k, tree.leaf_count(v));
    cost[v].assign(cap, d[v]);
    split[v].assign(cap, 0);
    if (tree.is_leaf(v)) continue;
    const auto& cl = cost[tree.left(v)];
    const auto& cr = cost[tree.right(v)];
    for (std::size_t b = 2; b <= cap; ++b) {
      const std::size_t lo = b > cr.size() ? b - cr.size() : 1;
      const std::size_t hi = std::min(cl.size(), b - 1);
      for (std::size_t bl = lo; bl <= hi; ++bl) {
        const double c = cl[bl - 1] + cr[b - bl - 1];
        if (c < cost[v][b - 1]) {
          cost[v][b - 1] = c;
          split[v][b - 1] = bl;
        }
      }
    }
  }

  std::vector<NodeId> chosen;
  std::vector<std::pair<NodeId, std::size_t>> stack{{tree.root(), k}};
  while (!stack.empty()) {
    auto [v, b] = stack.back();
    stack.pop_back();
    const auto bl = split[v][b - 1];
    if (bl == 0) {
      chosen.push_back(v);
      continue;
    }
    stack.emplace_back(tree.right(v), b - bl);
    stack.emplace_back(tree.left(v), bl);
  }
  return {Pruning(std::move(chosen)), cost[tree.root()][k - 1]};
}

OptimalPruning optimal_pruning(const HierTree& tree, std::size_t k, const WeightTable& w) {
  return optimal_pruning(tree, k, w.aligned(tree));
}

}  // namespace awpkit
