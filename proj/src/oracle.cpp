#include "awpkit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <unordered_set>

#include "awpkit/discrepancy.hpp"

namespace awpkit {

double WeightOracle::query_leaf(std::string_view label, NodeId attributed_to) {
  auto leaf = tree().find_leaf(label);
  if (!leaf) throw ArgumentError("unknown leaf label '" + std::string(label) + "'");
  return query_leaf(*leaf, attributed_to);
}

Oracle::Oracle(HierTree tree, const WeightTable& truth)
    : tree_(std::move(tree)),
      leaf_weights_(truth.aligned(tree_)),
      node_weights_(node_masses(tree_, leaf_weights_)) {}

double Oracle::query_leaf(std::size_t leaf_index, NodeId attributed_to) {
  if (leaf_index >= leaf_weights_.size()) {
    throw ArgumentError("unknown leaf index " + std::to_string(leaf_index));
  }
  if (!tree_.contains(attributed_to)) {
    throw ArgumentError("unknown node id " + std::to_string(attributed_to));
  }
  ++ledger_.basic_queries;
  ++ledger_.per_node_basic[attributed_to];
  return leaf_weights_[leaf_index];
}

double Oracle::query_node(NodeId v) {
  if (!tree_.contains(v)) throw ArgumentError("unknown node id " + std::to_string(v));
  ++ledger_.node_queries;
  return node_weights_[v];
}

std::vector<std::vector<std::string>> chunk_bins(const std::vector<std::string>& labels,
                                                 std::size_t count) {
  if (count == 0) throw ArgumentError("bin count must be positive");
  if (count > labels.size()) throw ArgumentError("more bins than leaves leaves a bin empty");
  std::vector<std::vector<std::string>> bins(count);
  const auto base = labels.size() / count;
  const auto extra = labels.size() % count;
  auto it = labels.begin();
  for (std::size_t b = 0; b < count; ++b) {
    const auto size = base + (b < extra ? 1 : 0);
    bins[b].assign(it, it + static_cast<std::ptrdiff_t>(size));
    it += static_cast<std::ptrdiff_t>(size);
  }
  return bins;
}

WeightTable make_geometric_target(const HierTree& tree, const TargetSpec& spec,
                                  std::uint64_t seed) {
  if (spec.kind != TargetKind::kGeometricBins) {
    throw ArgumentError("make_geometric_target needs a geometric-bins spec");
  }
  if (!(spec.ratio > 1.0) || !std::isfinite(spec.ratio)) {
    throw ArgumentError("bin weight ratio must exceed 1");
  }

  auto bins = spec.bins;
  if (bins.empty()) {
    std::vector<std::string> labels = tree.leaves_under(tree.root());
    std::mt19937_64 rng(seed);
    std::shuffle(labels.begin(), labels.end(), rng);
    bins = chunk_bins(labels, spec.bin_count);
  }

  std::unordered_set<std::string_view> seen;
  for (const auto& bin : bins) {
    if (bin.empty()) throw ArgumentError("empty bin");
    for (const auto& label : bin) {
      if (!tree.find_leaf(label)) throw ArgumentError("bin names unknown leaf '" + label + "'");
      if (!seen.insert(label).second) throw ArgumentError("leaf '" + label + "' in two bins");
    }
  }
  if (seen.size() != tree.leaf_count()) throw ArgumentError("bins do not cover every leaf");

  const auto count = bins.size();
  std::vector<double> per_example(count);
  double total = 0.0;
  for (std::size_t b = 0; b < count; ++b) {
    per_example[b] = std::pow(spec.ratio, static_cast<double>(count - 1 - b));
    total += per_example[b] * static_cast<double>(bins[b].size());
  }
  MassTable::Map masses;
  for (std::size_t b = 0; b < count; ++b) {
    for (const auto& label : bins[b]) masses.emplace(label, per_example[b] / total);
  }
  return WeightTable(std::move(masses));
}

namespace {

NodeId median_split(TreeBuilder& builder, const FeatureMap& features,
                    std::vector<const FeatureMap::value_type*> items, std::size_t depth,
                    std::size_t start, std::size_t dims) {
  if (items.size() == 1) return builder.add_leaf(items.front()->first);
  const auto coord = (start + depth) % dims;
  std::sort(items.begin(), items.end(), [&](const auto* a, const auto* b) {
    if (a->second[coord] != b->second[coord]) return a->second[coord] < b->second[coord];
    return a->first < b->first;
  });
  const auto half = static_cast<std::ptrdiff_t>(items.size() - items.size() / 2);
  std::vector<const FeatureMap::value_type*> lo(items.begin(), items.begin() + half);
  std::vector<const FeatureMap::value_type*> hi(items.begin() + half, items.end());
  NodeId l = median_split(builder, features, std::move(lo), depth + 1, start, dims);
  NodeId r = median_split(builder, features, std::move(hi), depth + 1, start, dims);
  return builder.add_internal(l, r);
}

}  // namespace

HierTree build_median_split_tree(const FeatureMap& features, std::uint64_t seed) {
  if (features.empty()) throw ArgumentError("median-split tree needs at least one leaf");
  const auto dims = features.begin()->second.size();
  std::vector<const FeatureMap::value_type*> items;
  for (const auto& entry : features) {
    if (entry.second.size() != dims) throw ArgumentError("feature vectors differ in dimension");
    items.push_back(&entry);
  }
  if (dims == 0 && items.size() > 1) throw ArgumentError("feature vectors are empty");
  std::mt19937_64 rng(seed);
  const std::size_t start = dims == 0 ? 0 : rng() % dims;
  TreeBuilder builder;
  median_split(builder, features, std::move(items), 0, start, std::max<std::size_t>(dims, 1));
  return std::move(builder).build();
}

HierTree build_random_balanced_tree(std::vector<std::string> labels, std::uint64_t seed) {
  if (labels.empty()) throw ArgumentError("tree needs at least one label");
  std::mt19937_64 rng(seed);
  std::shuffle(labels.begin(), labels.end(), rng);
  TreeBuilder builder;
  builder.add_balanced(labels);
  return std::move(builder).build();
}

std::vector<std::string> make_labels(std::size_t n) {
  const std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
  std::vector<std::string> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto digits = std::to_string(i);
    out.push_back("x" + std::string(width - digits.size(), '0') + digits);
  }
  return out;
}

FeatureMap make_uniform_features(std::size_t n, std::size_t dims, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FeatureMap out;
  for (auto& label : make_labels(n)) {
    std::vector<double> x(dims);
    for (auto& c : x) c = unit(rng);
    out.emplace(std::move(label), std::move(x));
  }
  return out;
}

std::vector<std::vector<std::string>> bins_by_feature(const FeatureMap& features,
                                                      std::size_t coordinate,
                                                      std::size_t count) {
  std::vector<const FeatureMap::value_type*> items;
  for (const auto& entry : features) {
    if (coordinate >= entry.second.size()) throw ArgumentError("feature coordinate out of range");
    items.push_back(&entry);
  }
  std::sort(items.begin(), items.end(), [&](const auto* a, const auto* b) {
    if (a->second[coordinate] != b->second[coordinate]) {
      return a->second[coordinate] < b->second[coordinate];
    }
    return a->first < b->first;
  });
  std::vector<std::string> labels;
  for (const auto* item : items) labels.push_back(item->first);
  return chunk_bins(labels, count);
}

}  // namespace awpkit
