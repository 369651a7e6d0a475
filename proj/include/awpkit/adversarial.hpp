#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "awpkit/tree.hpp"

namespace awpkit {

// A generated (tree, truth) instance. Landmarks name the nodes the
// construction is built around, e.g. "H(3)", "J(0)", "v1".
struct Construction {
  HierTree tree;
  WeightTable truth;
  std::map<std::string, NodeId, std::less<>> landmarks;
  // The pruning the construction is meant to exhibit, when there is one.
  std::optional<Pruning> reference;
  // The unit weight w every leaf weight is a multiple of.
  double unit = 0.0;

  NodeId landmark(std::string_view name) const;
};

// H(k) from the greedy lower bound: greedy splitting by largest discrepancy
// ends at (k+1)w with 2k nodes while the best 2k-pruning reaches 2w.
// Landmarks T(1), G(i) for the G_2 chain, H(i). Throws ArgumentError if k < 1.
Construction build_greedy_ta(int k);

// Root [G_1(2k), T_{k-1}]; landmarks "G1(2k)" and "T(k-1)". Requires k >= 2.
Construction build_greedy_tb(int k);

// v1 = [v2, v3] with v2 = v3 = [0, Nw/2], beside the chain J(k). Landmarks
// v1, v2, v3 and J(0)..J(k). Requires nn >= 2 and 3 <= k <= 12 (the tree has
// 4 + 2*3^k leaves).
Construction build_lookahead(int nn, int k);

// n + 2 leaves with P = {v1, v2} reaching D_P = 2 D_root / (1 + 2/n).
// Requires n even and >= 2.
Construction build_tightness(int n);

struct HeavyLeafFixture {
  // n - 1 zeros then a single 1.
  std::vector<double> zero_one;
  // n + 1 leaves with w = 1/(n + n^2): n leaves of w and one of n^2 w.
  std::vector<double> heavy_case;
  // n + 1 leaves of w; unnormalized (total 1/n).
  std::vector<double> light_case;
};

// Requires n >= 2.
HeavyLeafFixture build_heavy_leaf(int n);

// Greedy baselines that see the exact truth. Each performs k-1 splits (fewer
// if only leaves remain); ties go to the smallest id.

// Splits the pruning node with the largest D_v.
Pruning greedy_max_discrepancy(const HierTree& tree, std::span<const double> leaf_weights,
                               std::size_t k);
// Splits the pruning node maximizing D_v - (D_left + D_right).
Pruning greedy_lookahead(const HierTree& tree, std::span<const double> leaf_weights,
                         std::size_t k);

}  // namespace awpkit
