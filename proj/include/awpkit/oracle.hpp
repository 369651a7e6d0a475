#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "awpkit/tree.hpp"

namespace awpkit {

struct QueryLedger {
  std::uint64_t basic_queries = 0;
  std::uint64_t node_queries = 0;
  // Basic queries charged to the node whose estimate consumed them.
  std::map<NodeId, std::uint64_t> per_node_basic;
};

// What an algorithm may ask about the hidden target weights.
class WeightOracle {
 public:
  virtual ~WeightOracle() = default;
  virtual const HierTree& tree() const = 0;
  // w*(x) for the leaf at the given leaf index.
  virtual double query_leaf(std::size_t leaf_index, NodeId attributed_to) = 0;
  // w*(L_v).
  virtual double query_node(NodeId v) = 0;
  virtual const QueryLedger& ledger() const = 0;

  double query_leaf(std::string_view label, NodeId attributed_to);
};

// In-memory oracle over a WeightTable. Every call is charged, repeats included.
class Oracle final : public WeightOracle {
 public:
  Oracle(HierTree tree, const WeightTable& truth);

  const HierTree& tree() const override { return tree_; }
  double query_leaf(std::size_t leaf_index, NodeId attributed_to) override;
  double query_node(NodeId v) override;
  const QueryLedger& ledger() const override { return ledger_; }
  using WeightOracle::query_leaf;

 private:
  HierTree tree_;
  std::vector<double> leaf_weights_;
  std::vector<double> node_weights_;
  QueryLedger ledger_;
};

enum class TargetKind { kGeometricBins, kExplicitTable };

struct TargetSpec {
  TargetKind kind = TargetKind::kGeometricBins;
  // Ordered bins, heaviest first. When empty, bin_count bins are drawn by
  // shuffling the leaves with the seed.
  std::vector<std::vector<std::string>> bins;
  std::size_t bin_count = 1;
  // Per-example weight ratio between consecutive bins; must exceed 1.
  double ratio = 2.0;
};

// Leaf in bin i gets mass proportional to ratio^(B-1-i). Throws ArgumentError
// on an empty bin, a non-partition, or ratio <= 1.
WeightTable make_geometric_target(const HierTree& tree, const TargetSpec& spec,
                                  std::uint64_t seed);

// Splits labels (in order) into `count` contiguous near-equal bins; earlier
// bins take the extra element.
std::vector<std::vector<std::string>> chunk_bins(const std::vector<std::string>& labels,
                                                 std::size_t count);

using FeatureMap = std::map<std::string, std::vector<double>, std::less<>>;

// Top-down balanced tree: each node splits its leaves at the median of one
// coordinate, cycling through coordinates by depth from a seeded start.
HierTree build_median_split_tree(const FeatureMap& features, std::uint64_t seed);

// Balanced tree over a seeded shuffle of the labels.
HierTree build_random_balanced_tree(std::vector<std::string> labels, std::uint64_t seed);

// Zero-padded labels x0..x{n-1}, sortable as strings.
std::vector<std::string> make_labels(std::size_t n);

// n points with i.i.d. uniform [0,1) coordinates.
FeatureMap make_uniform_features(std::size_t n, std::size_t dims, std::uint64_t seed);

// Bins formed by sorting leaves on one feature coordinate (ties by label)
// and chunking, lowest values in the heaviest bin.
std::vector<std::vector<std::string>> bins_by_feature(const FeatureMap& features,
                                                      std::size_t coordinate,
                                                      std::size_t count);

}  // namespace awpkit
