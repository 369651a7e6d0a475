#include <doctest.h>

#include <vector>

#include "awpkit/tree.hpp"

using namespace awpkit;

namespace {

HierTree four_leaf() {
  TreeBuilder b;
  std::vector<std::string> labels{"a", "b", "c", "d"};
  b.add_balanced(labels);
  return std::move(b).build();
}

StructuralErrorKind issue_of(std::vector<NodeRecord> records) {
  auto issue = validate(records);
  REQUIRE(issue.has_value());
  return issue->kind;
}

}  // namespace

TEST_SUITE("tree") {

TEST_CASE("validate accepts a single leaf") {
  std::vector<NodeRecord> r{{0, NodeKind::kLeaf, {}, "only"}};
  CHECK_FALSE(validate(r).has_value());
  auto t = HierTree::from_records(r);
  CHECK(t.leaf_count() == 1);
  CHECK(t.height() == 0);
  CHECK(t.is_leaf(t.root()));
}

TEST_CASE("validate reports structural problems") {
  using K = StructuralErrorKind;
  CHECK(issue_of({}) == K::kEmpty);
  CHECK(issue_of({{0, NodeKind::kInternal, {1}, ""}, {1, NodeKind::kLeaf, {}, "x"}}) ==
        K::kNonBinary);
  CHECK(issue_of({{0, NodeKind::kInternal, {1, 2}, ""},
                  {1, NodeKind::kLeaf, {}, "x"},
                  {2, NodeKind::kLeaf, {}, "x"}}) == K::kDuplicateLabel);
  CHECK(issue_of({{0, NodeKind::kInternal, {1, 5}, ""},
                  {1, NodeKind::kLeaf, {}, "x"},
                  {2, NodeKind::kLeaf, {}, "y"}}) == K::kDanglingChild);
  CHECK(issue_of({{0, NodeKind::kInternal, {1, 1}, ""}, {1, NodeKind::kLeaf, {}, "x"}}) ==
        K::kMultipleParents);
  CHECK(issue_of({{0, NodeKind::kLeaf, {}, "x"}, {1, NodeKind::kLeaf, {}, "y"}}) ==
        K::kMultipleRoots);
  CHECK(issue_of({{0, NodeKind::kLeaf, {}, "has space"}}) == K::kBadLabel);
  CHECK(issue_of({{3, NodeKind::kLeaf, {}, "x"}}) == K::kBadId);
  // 3 and 4 are each other's children, detached from the root.
  CHECK(issue_of({{0, NodeKind::kInternal, {1, 2}, ""},
                  {1, NodeKind::kLeaf, {}, "a"},
                  {2, NodeKind::kLeaf, {}, "b"},
                  {3, NodeKind::kInternal, {4, 5}, ""},
                  {4, NodeKind::kInternal, {3, 6}, ""},
                  {5, NodeKind::kLeaf, {}, "c"},
                  {6, NodeKind::kLeaf, {}, "d"}}) == K::kCycle);
}

TEST_CASE("from_records throws StructuralError carrying the issue") {
  std::vector<NodeRecord> r{{0, NodeKind::kInternal, {1}, ""}, {1, NodeKind::kLeaf, {}, "x"}};
  try {
    HierTree::from_records(r);
    FAIL("expected a StructuralError");
  } catch (const StructuralError& e) {
    CHECK(e.issue().kind == StructuralErrorKind::kNonBinary);
    CHECK(e.issue().node == 0);
  }
}

TEST_CASE("leaves_under on a 4-leaf balanced tree") {
  auto t = four_leaf();
  CHECK(t.leaves_under(t.root()) == std::vector<std::string>{"a", "b", "c", "d"});
  CHECK(t.leaves_under(t.left(t.root())) == std::vector<std::string>{"a", "b"});
  for (std::size_t i = 0; i < t.leaf_count(); ++i) {
    CHECK(t.leaves_under(t.leaf_node(i)) == std::vector<std::string>{t.leaf_label(i)});
  }
  CHECK_THROWS_AS(t.leaves_under(99), ArgumentError);
}

TEST_CASE("navigation and leaf ranges") {
  auto t = four_leaf();
  const NodeId r = t.root();
  CHECK(t.parent(r) == kNoNode);
  CHECK(t.parent(t.left(r)) == r);
  CHECK(t.depth(t.leaf_node(3)) == 2);
  CHECK(t.height() == 2);
  CHECK(t.leaf_count(r) == 4);
  const auto range = t.leaf_range(t.right(r));
  CHECK(range.begin == 2);
  CHECK(range.end == 4);
  CHECK(t.find_leaf("c") == std::optional<std::size_t>(2));
  CHECK_FALSE(t.find_leaf("zz").has_value());
  // Children get smaller ids than their parent.
  CHECK(t.left(r) < r);
  CHECK(t.right(r) < r);
}

TEST_CASE("records round-trip") {
  auto t = four_leaf();
  auto again = HierTree::from_records(t.records());
  CHECK(again.root() == t.root());
  for (std::size_t i = 0; i < t.leaf_count(); ++i) CHECK(again.leaf_label(i) == t.leaf_label(i));
}

TEST_CASE("add_balanced puts the extra leaf on the left") {
  TreeBuilder b;
  std::vector<std::string> labels{"a", "b", "c"};
  b.add_balanced(labels);
  auto t = std::move(b).build();
  CHECK(t.leaf_count(t.left(t.root())) == 2);
  CHECK(t.leaf_count(t.right(t.root())) == 1);
}

TEST_CASE("pruning keeps ids sorted and unique") {
  Pruning p({5, 1, 3, 1});
  CHECK(p.nodes() == std::vector<NodeId>{1, 3, 5});
  CHECK(p.contains(3));
  CHECK_FALSE(p.contains(2));
}

TEST_CASE("mass tables validate their totals") {
  MassTable::Map ok{{"a", 0.25}, {"b", 0.75}};
  CHECK(WeightTable(ok).total() == doctest::Approx(1.0));
  CHECK_THROWS_AS(WeightTable(MassTable::Map{{"a", -0.1}, {"b", 1.1}}), InputError);
  CHECK_THROWS_AS(WeightTable(MassTable::Map{{"a", 0.2}, {"b", 0.2}}), InputError);
  WeightTable scaled(MassTable::Map{{"a", 1.0}, {"b", 3.0}}, true);
  CHECK(scaled.at("b") == doctest::Approx(0.75));
  CHECK_THROWS_AS(WeightTable(MassTable::Map{{"a", 0.0}}, true), InputError);
}

TEST_CASE("aligned requires the exact leaf set") {
  auto t = four_leaf();
  WeightTable w(MassTable::Map{{"a", 0.1}, {"b", 0.2}, {"c", 0.3}, {"d", 0.4}});
  CHECK(w.aligned(t) == std::vector<double>{0.1, 0.2, 0.3, 0.4});
  WeightTable missing(MassTable::Map{{"a", 0.5}, {"b", 0.5}});
  CHECK_THROWS_AS(missing.aligned(t), InputError);
  WeightTable other(MassTable::Map{{"a", 0.1}, {"b", 0.2}, {"c", 0.3}, {"e", 0.4}});
  CHECK_THROWS_AS(other.aligned(t), InputError);
}

}
