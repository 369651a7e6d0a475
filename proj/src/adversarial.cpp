#include "awpkit/adversarial.hpp"

#include <algorithm>
#include <cmath>

#include "awpkit/discrepancy.hpp"
#include "awpkit/oracle.hpp"

namespace awpkit {

namespace {

// Hands out leaf labels in creation order and records their weights.
class Assembler {
 public:
  explicit Assembler(std::size_t leaf_total) : labels_(make_labels(leaf_total)) {}

  NodeId leaf(double weight) {
    if (next_ >= labels_.size()) throw InvariantError("construction leaf count mismatch");
    const auto& label = labels_[next_++];
    masses_[label] = weight;
    return builder_.add_leaf(label);
  }

  NodeId join(NodeId l, NodeId r) { return builder_.add_internal(l, r); }

  // Left-leaning balanced subtree of `count` equal leaves.
  NodeId uniform_block(std::size_t count, double weight) {
    if (count == 1) return leaf(weight);
    const std::size_t left = (count + 1) / 2;
    const NodeId l = uniform_block(left, weight);
    const NodeId r = uniform_block(count - left, weight);
    return join(l, r);
  }

  Construction finish(double unit) && {
    if (next_ != labels_.size()) throw InvariantError("construction leaf count mismatch");
    Construction c{std::move(builder_).build(), WeightTable(std::move(masses_)), {}, {}, unit};
    return c;
  }

 private:
  std::vector<std::string> labels_;
  std::size_t next_ = 0;
  MassTable::Map masses_;
  TreeBuilder builder_;
};

// T_1 = [0, w]; T_i = [T_1, T_{i-1}].
NodeId make_t(Assembler& a, int i, double w) {
  const NodeId t1_l = a.leaf(0.0);
  const NodeId t1 = a.join(t1_l, a.leaf(w));
  if (i == 1) return t1;
  return a.join(t1, make_t(a, i - 1, w));
}

// G_j(1) = T_j; G_j(i) = [w/2, G_j(i-1)].
NodeId make_g(Assembler& a, int j, int i, double w,
              std::map<std::string, NodeId, std::less<>>* marks) {
  NodeId g = make_t(a, j, w);
  if (marks) (*marks)["G(1)"] = g;
  for (int step = 2; step <= i; ++step) {
    const NodeId u = a.leaf(w / 2.0);
    g = a.join(u, g);
    if (marks) (*marks)["G(" + std::to_string(step) + ")"] = g;
  }
  return g;
}

std::string indexed(std::string_view name, int i) {
  return std::string(name) + "(" + std::to_string(i) + ")";
}

Pruning greedy_by(const HierTree& tree, std::span<const double> leaf_weights, std::size_t k,
                  bool lookahead) {
  if (k < 1 || k > tree.leaf_count()) throw ArgumentError("pruning size outside [1, leaf count]");
  const auto d = all_node_discrepancies(tree, leaf_weights);
  auto score = [&](NodeId v) {
    const auto dv = d[static_cast<std::size_t>(v)];
    if (!lookahead) return dv;
    return dv - d[static_cast<std::size_t>(tree.left(v))] -
           d[static_cast<std::size_t>(tree.right(v))];
  };
  std::vector<NodeId> p{tree.root()};
  while (p.size() < k) {
    NodeId best = kNoNode;
    for (NodeId v : p) {
      if (tree.is_leaf(v)) continue;
      if (best == kNoNode || score(v) > score(best)) best = v;
    }
    if (best == kNoNode) break;
    p.erase(std::find(p.begin(), p.end(), best));
    for (NodeId c : {tree.left(best), tree.right(best)}) {
      p.insert(std::upper_bound(p.begin(), p.end(), c), c);
    }
  }
  return Pruning(std::move(p));
}

}  // namespace

NodeId Construction::landmark(std::string_view name) const {
  auto it = landmarks.find(name);
  if (it == landmarks.end()) throw ArgumentError("unknown landmark " + std::string(name));
  return it->second;
}

Construction build_greedy_ta(int k) {
  if (k < 1) throw ArgumentError("greedy-Ta needs k >= 1");
  const double w = 1.0 / (k + 1 + k / 2.0);
  Assembler a(static_cast<std::size_t>(3 * k + 2));
  std::map<std::string, NodeId, std::less<>> marks;
  NodeId h = make_g(a, 2, k + 1, w, &marks);
  marks["H(1)"] = h;
  for (int i = 2; i <= k; ++i) {
    const NodeId t1 = make_t(a, 1, w);
    h = a.join(t1, h);
    marks[indexed("H", i)] = h;
  }
  auto c = std::move(a).finish(w);
  c.landmarks = std::move(marks);
  return c;
}

Construction build_greedy_tb(int k) {
  if (k < 2) throw ArgumentError("greedy-Tb needs k >= 2");
  const double w = 2.0 / (4.0 * k - 1.0);
  Assembler a(static_cast<std::size_t>(4 * k - 1));
  const NodeId g = make_g(a, 1, 2 * k, w, nullptr);
  const NodeId t = make_t(a, k - 1, w);
  a.join(g, t);
  auto c = std::move(a).finish(w);
  c.landmarks["G1(2k)"] = g;
  c.landmarks["T(k-1)"] = t;
  return c;
}

Construction build_lookahead(int nn, int k) {
  if (nn < 2) throw ArgumentError("lookahead needs N >= 2");
  if (k < 3) throw ArgumentError("lookahead needs k >= 3");
  if (k > 12) throw ArgumentError("lookahead with k > 12 is too large to build");
  const double w = 1.0 / (nn + 1.0);
  const auto pow3 = [](int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= 3;
    return r;
  };
  const std::size_t block = pow3(k);
  const double fine = w / static_cast<double>(block);
  Assembler a(4 + 2 * block);
  std::map<std::string, NodeId, std::less<>> marks;

  const NodeId v2_l = a.leaf(0.0);
  const NodeId v2 = a.join(v2_l, a.leaf(nn * w / 2.0));
  const NodeId v3_l = a.leaf(0.0);
  const NodeId v3 = a.join(v3_l, a.leaf(nn * w / 2.0));
  const NodeId v1 = a.join(v2, v3);
  marks["v1"] = v1;
  marks["v2"] = v2;
  marks["v3"] = v3;

  const NodeId f1 = a.leaf(fine);
  NodeId j = a.join(f1, a.uniform_block(block, 0.0));
  marks["J(0)"] = j;
  for (int i = 1; i <= k; ++i) {
    const NodeId f = a.uniform_block(2 * pow3(i - 1), fine);
    j = a.join(f, j);
    marks[indexed("J", i)] = j;
  }
  a.join(v1, j);
  auto c = std::move(a).finish(w);
  c.landmarks = std::move(marks);
  return c;
}

Construction build_tightness(int n) {
  if (n < 2 || n % 2 != 0) throw ArgumentError("tightness needs an even n >= 2");
  const double w = 1.0 / (n + 2.0);
  const auto half = static_cast<std::size_t>(n / 2);
  Assembler a(static_cast<std::size_t>(n + 2));
  const NodeId x1 = a.leaf(0.0);
  const NodeId v1 = a.join(x1, a.uniform_block(half, w));
  const NodeId x2 = a.leaf(2.0 * w);
  const NodeId v2 = a.join(x2, a.uniform_block(half, w));
  a.join(v1, v2);
  auto c = std::move(a).finish(w);
  c.landmarks["v1"] = v1;
  c.landmarks["v2"] = v2;
  c.reference = Pruning({v1, v2});
  return c;
}

HeavyLeafFixture build_heavy_leaf(int n) {
  if (n < 2) throw ArgumentError("heavy-leaf needs n >= 2");
  const auto count = static_cast<std::size_t>(n);
  HeavyLeafFixture f;
  f.zero_one.assign(count, 0.0);
  f.zero_one.back() = 1.0;
  const double w = 1.0 / (n + static_cast<double>(n) * n);
  f.heavy_case.assign(count + 1, w);
  f.heavy_case.back() = static_cast<double>(n) * n * w;
  f.light_case.assign(count + 1, w);
  return f;
}

Pruning greedy_max_discrepancy(const HierTree& tree, std::span<const double> leaf_weights,
                               std::size_t k) {
  return greedy_by(tree, leaf_weights, k, false);
}

Pruning greedy_lookahead(const HierTree& tree, std::span<const double> leaf_weights,
                         std::size_t k) {
  return greedy_by(tree, leaf_weights, k, true);
}

}  // namespace awpkit
