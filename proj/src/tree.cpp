#include "awpkit/tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace awpkit {

std::string_view to_string(StructuralErrorKind kind) {
  switch (kind) {
    case StructuralErrorKind::kEmpty: return "empty";
    case StructuralErrorKind::kBadId: return "bad-id";
    case StructuralErrorKind::kDuplicateId: return "duplicate-id";
    case StructuralErrorKind::kNonBinary: return "non-binary";
    case StructuralErrorKind::kDanglingChild: return "dangling-child";
    case StructuralErrorKind::kBadLabel: return "bad-label";
    case StructuralErrorKind::kDuplicateLabel: return "duplicate-label";
    case StructuralErrorKind::kMultipleParents: return "multiple-parents";
    case StructuralErrorKind::kMultipleRoots: return "multiple-roots";
    case StructuralErrorKind::kCycle: return "cycle";
  }
  return "unknown";
}

namespace {

std::string describe(const StructuralIssue& issue) {
  std::ostringstream os;
  os << "structural error (" << to_string(issue.kind) << ")";
  if (issue.node != kNoNode) os << " at node " << issue.node;
  if (!issue.detail.empty()) os << ": " << issue.detail;
  return os.str();
}

bool valid_label(std::string_view label) {
  if (label.empty()) return false;
  return std::none_of(label.begin(), label.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '#';
  });
}

}  // namespace

StructuralError::StructuralError(StructuralIssue issue)
    : InputError(describe(issue)), issue_(std::move(issue)) {}

std::optional<StructuralIssue> validate(std::span<const NodeRecord> records) {
  using K = StructuralErrorKind;
  const auto n = records.size();
  if (n == 0) return StructuralIssue{K::kEmpty, kNoNode, "no nodes"};

  std::vector<const NodeRecord*> by_id(n, nullptr);
  for (const auto& r : records) {
    if (r.id < 0 || static_cast<std::size_t>(r.id) >= n) {
      return StructuralIssue{K::kBadId, r.id, "ids must form 0..node_count-1"};
    }
    if (by_id[r.id] != nullptr) return StructuralIssue{K::kDuplicateId, r.id, {}};
    by_id[r.id] = &r;
  }

  std::unordered_set<std::string_view> labels;
  std::vector<NodeId> parent(n, kNoNode);
  for (std::size_t id = 0; id < n; ++id) {
    const auto& r = *by_id[id];
    const auto expected = r.kind == NodeKind::kInternal ? 2u : 0u;
    if (r.children.size() != expected) {
      return StructuralIssue{K::kNonBinary, r.id,
                             std::to_string(r.children.size()) + " children"};
    }
    if (r.kind == NodeKind::kLeaf) {
      if (!valid_label(r.label)) return StructuralIssue{K::kBadLabel, r.id, r.label};
      if (!labels.insert(r.label).second) {
        return StructuralIssue{K::kDuplicateLabel, r.id, r.label};
      }
    }
    for (NodeId c : r.children) {
      if (c < 0 || static_cast<std::size_t>(c) >= n) {
        return StructuralIssue{K::kDanglingChild, r.id, "child " + std::to_string(c)};
      }
      if (c == r.id) return StructuralIssue{K::kCycle, r.id, "node is its own child"};
      if (parent[c] != kNoNode) {
        return StructuralIssue{K::kMultipleParents, c, {}};
      }
      parent[c] = r.id;
    }
  }

  NodeId root = kNoNode;
  for (std::size_t id = 0; id < n; ++id) {
    if (parent[id] != kNoNode) continue;
    if (root != kNoNode) {
      return StructuralIssue{K::kMultipleRoots, static_cast<NodeId>(id), {}};
    }
    root = static_cast<NodeId>(id);
  }
  // Every node having a parent forces a cycle.
  if (root == kNoNode) return StructuralIssue{K::kCycle, 0, "no root"};

  // With unique parents, anything unreachable from the root sits on a cycle.
  std::vector<char> seen(n, 0);
  std::vector<NodeId> stack{root};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    seen[v] = 1;
    for (NodeId c : by_id[v]->children) stack.push_back(c);
  }
  for (std::size_t id = 0; id < n; ++id) {
    if (!seen[id]) return StructuralIssue{K::kCycle, static_cast<NodeId>(id), "unreachable"};
  }
  return std::nullopt;
}

struct HierTree::Impl {
  struct Node {
    NodeKind kind;
    NodeId left = kNoNode;
    NodeId right = kNoNode;
    NodeId parent = kNoNode;
    std::size_t depth = 0;
    LeafRange leaves;
    std::string label;
  };
  std::vector<Node> nodes;
  std::vector<NodeId> leaf_nodes;
  std::unordered_map<std::string_view, std::size_t> leaf_by_label;
  NodeId root = kNoNode;
  std::size_t height = 0;
};

HierTree::HierTree(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

HierTree HierTree::from_records(std::vector<NodeRecord> records) {
  if (auto issue = validate(records)) throw StructuralError(std::move(*issue));

  auto impl = std::make_shared<Impl>();
  impl->nodes.resize(records.size());
  for (auto& r : records) {
    auto& node = impl->nodes[r.id];
    node.kind = r.kind;
    node.label = std::move(r.label);
    if (r.kind == NodeKind::kInternal) {
      node.left = r.children[0];
      node.right = r.children[1];
    }
  }
  for (std::size_t id = 0; id < impl->nodes.size(); ++id) {
    const auto& node = impl->nodes[id];
    if (node.kind == NodeKind::kInternal) {
      impl->nodes[node.left].parent = static_cast<NodeId>(id);
      impl->nodes[node.right].parent = static_cast<NodeId>(id);
    }
  }
  for (std::size_t id = 0; id < impl->nodes.size(); ++id) {
    if (impl->nodes[id].parent == kNoNode) impl->root = static_cast<NodeId>(id);
  }

  // Iterative DFS: leaves get indices left to right; ranges close on exit.
  struct Frame {
    NodeId v;
    bool expanded;
  };
  std::vector<Frame> stack{{impl->root, false}};
  while (!stack.empty()) {
    auto [v, expanded] = stack.back();
    stack.pop_back();
    auto& node = impl->nodes[v];
    if (node.kind == NodeKind::kLeaf) {
      node.leaves = {impl->leaf_nodes.size(), impl->leaf_nodes.size() + 1};
      impl->leaf_nodes.push_back(v);
      impl->height = std::max(impl->height, node.depth);
      continue;
    }
    if (expanded) {
      node.leaves = {impl->nodes[node.left].leaves.begin, impl->nodes[node.right].leaves.end};
      continue;
    }
    impl->nodes[node.left].depth = node.depth + 1;
    impl->nodes[node.right].depth = node.depth + 1;
    stack.push_back({v, true});
    stack.push_back({node.right, false});
    stack.push_back({node.left, false});
  }
  for (std::size_t i = 0; i < impl->leaf_nodes.size(); ++i) {
    impl->leaf_by_label.emplace(impl->nodes[impl->leaf_nodes[i]].label, i);
  }
  return HierTree(std::move(impl));
}

NodeId HierTree::root() const { return impl_->root; }
std::size_t HierTree::node_count() const { return impl_->nodes.size(); }
std::size_t HierTree::leaf_count() const { return impl_->leaf_nodes.size(); }
std::size_t HierTree::height() const { return impl_->height; }

bool HierTree::contains(NodeId v) const {
  return v >= 0 && static_cast<std::size_t>(v) < impl_->nodes.size();
}

void HierTree::check(NodeId v) const {
  if (!contains(v)) throw ArgumentError("unknown node id " + std::to_string(v));
}

bool HierTree::is_leaf(NodeId v) const {
  check(v);
  return impl_->nodes[v].kind == NodeKind::kLeaf;
}

NodeId HierTree::left(NodeId v) const {
  check(v);
  return impl_->nodes[v].left;
}

NodeId HierTree::right(NodeId v) const {
  check(v);
  return impl_->nodes[v].right;
}

NodeId HierTree::parent(NodeId v) const {
  check(v);
  return impl_->nodes[v].parent;
}

std::size_t HierTree::depth(NodeId v) const {
  check(v);
  return impl_->nodes[v].depth;
}

const std::string& HierTree::label(NodeId v) const {
  check(v);
  return impl_->nodes[v].label;
}

std::size_t HierTree::leaf_count(NodeId v) const { return leaf_range(v).size(); }

LeafRange HierTree::leaf_range(NodeId v) const {
  check(v);
  return impl_->nodes[v].leaves;
}

NodeId HierTree::leaf_node(std::size_t leaf_index) const {
  return impl_->leaf_nodes.at(leaf_index);
}

const std::string& HierTree::leaf_label(std::size_t leaf_index) const {
  return impl_->nodes[leaf_node(leaf_index)].label;
}

std::optional<std::size_t> HierTree::find_leaf(std::string_view label) const {
  auto it = impl_->leaf_by_label.find(label);
  if (it == impl_->leaf_by_label.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> HierTree::leaves_under(NodeId v) const {
  const auto range = leaf_range(v);
  std::vector<std::string> out;
  out.reserve(range.size());
  for (std::size_t i = range.begin; i < range.end; ++i) out.push_back(leaf_label(i));
  return out;
}

std::vector<NodeRecord> HierTree::records() const {
  std::vector<NodeRecord> out;
  out.reserve(node_count());
  for (std::size_t id = 0; id < node_count(); ++id) {
    const auto& node = impl_->nodes[id];
    NodeRecord r{static_cast<NodeId>(id), node.kind, {}, node.label};
    if (node.kind == NodeKind::kInternal) r.children = {node.left, node.right};
    out.push_back(std::move(r));
  }
  return out;
}

NodeId TreeBuilder::add_leaf(std::string label) {
  const auto id = static_cast<NodeId>(records_.size());
  records_.push_back({id, NodeKind::kLeaf, {}, std::move(label)});
  return id;
}

NodeId TreeBuilder::add_internal(NodeId left, NodeId right) {
  const auto id = static_cast<NodeId>(records_.size());
  records_.push_back({id, NodeKind::kInternal, {left, right}, {}});
  return id;
}

NodeId TreeBuilder::add_balanced(std::span<const std::string> labels) {
  if (labels.empty()) throw ArgumentError("balanced subtree needs at least one leaf");
  if (labels.size() == 1) return add_leaf(labels.front());
  const auto half = labels.size() - labels.size() / 2;
  NodeId l = add_balanced(labels.first(half));
  NodeId r = add_balanced(labels.subspan(half));
  return add_internal(l, r);
}

HierTree TreeBuilder::build() && { return HierTree::from_records(std::move(records_)); }

Pruning::Pruning(std::vector<NodeId> nodes) : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
}

bool Pruning::contains(NodeId v) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

MassTable::MassTable(Map masses, bool normalize) : masses_(std::move(masses)) {
  double total = 0.0;
  for (const auto& [label, mass] : masses_) {
    if (!std::isfinite(mass) || mass < 0.0) {
      throw InputError("invalid mass for '" + label + "'");
    }
    total += mass;
  }
  if (normalize) {
    if (!(total > 0.0)) throw InputError("cannot normalize masses with zero total");
    for (auto& [label, mass] : masses_) mass /= total;
    return;
  }
  if (std::abs(total - 1.0) > kMassTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "masses sum to " << total << ", expected 1";
    throw InputError(os.str());
  }
}

double MassTable::at(std::string_view label) const {
  auto it = masses_.find(label);
  if (it == masses_.end()) throw InputError("no mass for leaf '" + std::string(label) + "'");
  return it->second;
}

bool MassTable::contains(std::string_view label) const { return masses_.contains(label); }

double MassTable::total() const {
  double t = 0.0;
  for (const auto& [label, mass] : masses_) t += mass;
  return t;
}

std::vector<double> MassTable::aligned(const HierTree& tree) const {
  if (masses_.size() != tree.leaf_count()) {
    throw InputError("weight table has " + std::to_string(masses_.size()) +
                     " entries but the tree has " + std::to_string(tree.leaf_count()) +
                     " leaves");
  }
  std::vector<double> out(tree.leaf_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = at(tree.leaf_label(i));
  return out;
}

MassTable::Map MassTable::from_leaf_vector(const HierTree& tree, std::span<const double> masses) {
  if (masses.size() != tree.leaf_count()) {
    throw ArgumentError("mass vector length does not match leaf count");
  }
  Map out;
  for (std::size_t i = 0; i < masses.size(); ++i) out.emplace(tree.leaf_label(i), masses[i]);
  return out;
}

WeightTable WeightTable::from_leaf_vector(const HierTree& tree, std::span<const double> masses,
                                          bool normalize) {
  return WeightTable(MassTable::from_leaf_vector(tree, masses), normalize);
}

Weighting Weighting::from_leaf_vector(const HierTree& tree, std::span<const double> masses) {
  return Weighting(MassTable::from_leaf_vector(tree, masses));
}

}  // namespace awpkit
