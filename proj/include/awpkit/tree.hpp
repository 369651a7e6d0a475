#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "awpkit/error.hpp"

namespace awpkit {

using NodeId = std::int32_t;
inline constexpr NodeId kNoNode = -1;

enum class NodeKind { kInternal, kLeaf };

// One unvalidated node as it appears in a tree file or builder.
struct NodeRecord {
  NodeId id = kNoNode;
  NodeKind kind = NodeKind::kLeaf;
  std::vector<NodeId> children;
  std::string label;
};

enum class StructuralErrorKind {
  kEmpty,
  kBadId,
  kDuplicateId,
  kNonBinary,
  kDanglingChild,
  kBadLabel,
  kDuplicateLabel,
  kMultipleParents,
  kMultipleRoots,
  kCycle,
};

std::string_view to_string(StructuralErrorKind kind);

struct StructuralIssue {
  StructuralErrorKind kind;
  NodeId node = kNoNode;
  std::string detail;
};

class StructuralError : public InputError {
 public:
  explicit StructuralError(StructuralIssue issue);
  const StructuralIssue& issue() const { return issue_; }

 private:
  StructuralIssue issue_;
};

// Checks every tree invariant and reports the first violation found.
std::optional<StructuralIssue> validate(std::span<const NodeRecord> records);

// Half-open range of leaf indices.
struct LeafRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool contains(std::size_t leaf) const { return leaf >= begin && leaf < end; }
};

// Immutable binary hierarchical tree. Copies share the same storage.
//
// Leaves are numbered 0..leaf_count()-1 in left-to-right order, so the
// leaves under any node form a contiguous LeafRange. Most numeric code works
// with weights laid out in that order.
class HierTree {
 public:
  // Throws StructuralError on the first invariant violation.
  static HierTree from_records(std::vector<NodeRecord> records);

  NodeId root() const;
  std::size_t node_count() const;
  std::size_t leaf_count() const;
  // Longest root-to-leaf path in edges.
  std::size_t height() const;

  bool contains(NodeId v) const;
  bool is_leaf(NodeId v) const;
  NodeId left(NodeId v) const;
  NodeId right(NodeId v) const;
  NodeId parent(NodeId v) const;
  std::size_t depth(NodeId v) const;
  const std::string& label(NodeId v) const;

  // N_v.
  std::size_t leaf_count(NodeId v) const;
  LeafRange leaf_range(NodeId v) const;
  NodeId leaf_node(std::size_t leaf_index) const;
  const std::string& leaf_label(std::size_t leaf_index) const;
  std::optional<std::size_t> find_leaf(std::string_view label) const;

  // L_v as labels, in leaf order.
  std::vector<std::string> leaves_under(NodeId v) const;

  // Records in id order; feeding them back to from_records yields an equal tree.
  std::vector<NodeRecord> records() const;

 private:
  struct Impl;
  explicit HierTree(std::shared_ptr<const Impl> impl);
  void check(NodeId v) const;

  std::shared_ptr<const Impl> impl_;
};

// Incremental construction helper; ids are handed out densely in creation
// order, so children always have smaller ids than their parent.
class TreeBuilder {
 public:
  NodeId add_leaf(std::string label);
  NodeId add_internal(NodeId left, NodeId right);
  // Balanced subtree over the labels in order; the left half takes the extra
  // leaf when the count is odd.
  NodeId add_balanced(std::span<const std::string> labels);
  std::size_t size() const { return records_.size(); }
  HierTree build() &&;

 private:
  std::vector<NodeRecord> records_;
};

// An ordered set of node ids.
class Pruning {
 public:
  Pruning() = default;
  explicit Pruning(std::vector<NodeId> nodes);
  const std::vector<NodeId>& nodes() const { return nodes_; }
  std::size_t size() const { return nodes_.size(); }
  bool contains(NodeId v) const;
  auto begin() const { return nodes_.begin(); }
  auto end() const { return nodes_.end(); }
  friend bool operator==(const Pruning&, const Pruning&) = default;

 private:
  std::vector<NodeId> nodes_;
};

inline constexpr double kMassTolerance = 1e-9;

// Leaf label -> non-negative mass summing to one.
class MassTable {
 public:
  using Map = std::map<std::string, double, std::less<>>;

  MassTable() = default;
  // Throws InputError on negative or non-finite masses, or a total off by
  // more than kMassTolerance. With normalize set, a positive total is
  // rescaled to one instead.
  explicit MassTable(Map masses, bool normalize = false);

  double at(std::string_view label) const;
  bool contains(std::string_view label) const;
  std::size_t size() const { return masses_.size(); }
  const Map& masses() const { return masses_; }
  double total() const;

  // Masses in the tree's leaf order. Throws InputError unless the label sets
  // match exactly.
  std::vector<double> aligned(const HierTree& tree) const;

 protected:
  static Map from_leaf_vector(const HierTree& tree, std::span<const double> masses);

 private:
  Map masses_;
};

// Hidden ground truth w*.
class WeightTable final : public MassTable {
 public:
  using MassTable::MassTable;
  static WeightTable from_leaf_vector(const HierTree& tree, std::span<const double> masses,
                                      bool normalize = false);
};

// A reconstructed weighting such as w_P.
class Weighting final : public MassTable {
 public:
  using MassTable::MassTable;
  static Weighting from_leaf_vector(const HierTree& tree, std::span<const double> masses);
};

}  // namespace awpkit
