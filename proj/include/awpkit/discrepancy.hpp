#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "awpkit/tree.hpp"

namespace awpkit {

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

// Exact (ground-truth side) discrepancy math. Functions taking a span expect
// leaf weights in the tree's leaf order; the WeightTable overloads align
// first and throw InputError on a missing leaf.

// D_v = sum over x in L_v of |w*_v / N_v - w*(x)|.
double node_discrepancy(const HierTree& tree, NodeId v, std::span<const double> leaf_weights);
double node_discrepancy(const HierTree& tree, NodeId v, const WeightTable& w);

// D_v for every node, indexed by id.
std::vector<double> all_node_discrepancies(const HierTree& tree,
                                           std::span<const double> leaf_weights);

// w*_v for every node, indexed by id.
std::vector<double> node_masses(const HierTree& tree, std::span<const double> leaf_weights);

// True iff every leaf has exactly one (inclusive) ancestor in p.
// Throws ArgumentError on an unknown node id.
bool is_pruning(const HierTree& tree, const Pruning& p);

// Sum of D_v over p. Throws ArgumentError if p is not a pruning.
double pruning_discrepancy(const HierTree& tree, const Pruning& p,
                           std::span<const double> leaf_weights);
double pruning_discrepancy(const HierTree& tree, const Pruning& p, const WeightTable& w);

// w_P in leaf order: every leaf under v in p gets node_weights[v] / N_v.
std::vector<double> induced_leaf_weights(const HierTree& tree, const Pruning& p,
                                         const std::map<NodeId, double>& node_weights);
Weighting induced_weighting(const HierTree& tree, const Pruning& p,
                            const std::map<NodeId, double>& node_weights);

// Half the l1 distance. Throws InputError if the label sets differ.
double tv_distance(const MassTable& a, const MassTable& b);
double l1_distance(std::span<const double> a, std::span<const double> b);

// Tightest q with D_child <= q * D_parent on every edge whose parent has
// D > 0; nullopt when no internal node has positive discrepancy.
std::optional<double> split_quality(const HierTree& tree, std::span<const double> leaf_weights);
std::optional<double> split_quality(const HierTree& tree, const WeightTable& w);

// Mean of max(D_left, D_right) / D_v over internal nodes with D_v > 0.
std::optional<double> average_split_quality(const HierTree& tree,
                                            std::span<const double> leaf_weights);
std::optional<double> average_split_quality(const HierTree& tree, const WeightTable& w);

struct OptimalPruning {
  Pruning pruning;
  double discrepancy = 0.0;
};

// Minimum-discrepancy pruning with at most k nodes, by tree DP over budget
// allocations. Ties prefer not splitting, then the smaller left budget.
// Throws ArgumentError unless 1 <= k <= leaf count.
OptimalPruning optimal_pruning(const HierTree& tree, std::size_t k,
                               std::span<const double> leaf_weights);
OptimalPruning optimal_pruning(const HierTree& tree, std::size_t k, const WeightTable& w);

}  // namespace awpkit
