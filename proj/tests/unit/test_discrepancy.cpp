#include <doctest.h>

#include <random>

#include "awpkit/adversarial.hpp"
#include "awpkit/discrepancy.hpp"
#include "support/oracles.hpp"

using namespace awpkit;
using awpkit::testing::ref_discrepancy;

namespace {

HierTree balanced(std::size_t n) {
  TreeBuilder b;
  auto labels = make_labels(n);
  b.add_balanced(labels);
  return std::move(b).build();
}

}  // namespace

TEST_SUITE("discrepancy") {

TEST_CASE("node discrepancy examples") {
  auto t2 = balanced(2);
  std::vector<double> w{0.0, 0.2};
  CHECK(node_discrepancy(t2, t2.root(), w) == doctest::Approx(0.2).epsilon(1e-15));
  auto t4 = balanced(4);
  std::vector<double> heavy{0.0, 0.0, 0.0, 1.0};
  CHECK(node_discrepancy(t4, t4.root(), heavy) == doctest::Approx(1.5).epsilon(1e-15));
  std::vector<double> flat(4, 0.25);
  CHECK(node_discrepancy(t4, t4.root(), flat) == 0.0);
  for (std::size_t i = 0; i < 4; ++i) CHECK(node_discrepancy(t4, t4.leaf_node(i), heavy) == 0.0);
}

TEST_CASE("node discrepancy agrees with the reference and is bounded by 2 w_v") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    auto t = testing::random_tree(1 + rng() % 60, rng);
    auto w = testing::random_weights(t.leaf_count(), rng);
    auto all = all_node_discrepancies(t, w);
    auto mass = node_masses(t, w);
    for (std::size_t v = 0; v < t.node_count(); ++v) {
      const auto id = static_cast<NodeId>(v);
      CHECK(all[v] == doctest::Approx(ref_discrepancy(t, id, w)).epsilon(1e-12));
      CHECK(all[v] <= 2.0 * mass[v] + 1e-12);
    }
  }
}

TEST_CASE("is_pruning") {
  auto t = balanced(4);
  const NodeId r = t.root();
  CHECK(is_pruning(t, Pruning({r})));
  CHECK_FALSE(is_pruning(t, Pruning({r, t.left(r)})));
  CHECK(is_pruning(t, Pruning({t.left(r), t.right(r)})));
  CHECK_FALSE(is_pruning(t, Pruning({t.left(r)})));
  CHECK_THROWS_AS(is_pruning(t, Pruning({42})), ArgumentError);
}

TEST_CASE("pruning discrepancy on the tightness tree") {
  auto c = build_tightness(8);
  auto w = c.truth.aligned(c.tree);
  CHECK(pruning_discrepancy(c.tree, Pruning({c.tree.root()}), w) ==
        doctest::Approx(0.2).epsilon(1e-12));
  CHECK(pruning_discrepancy(c.tree, *c.reference, c.truth) == doctest::Approx(0.32).epsilon(1e-12));
  std::vector<NodeId> leaves;
  for (std::size_t i = 0; i < c.tree.leaf_count(); ++i) leaves.push_back(c.tree.leaf_node(i));
  CHECK(pruning_discrepancy(c.tree, Pruning(leaves), w) == 0.0);
  CHECK_THROWS_AS(pruning_discrepancy(c.tree, Pruning({c.landmark("v1")}), w), ArgumentError);
}

TEST_CASE("induced weighting") {
  // Left subtree of 4 leaves with mass 0.4, right of 2 leaves with 0.6.
  TreeBuilder b;
  auto labels = make_labels(6);
  const NodeId l = b.add_balanced(std::span(labels).first(4));
  const NodeId r = b.add_balanced(std::span(labels).subspan(4));
  b.add_internal(l, r);
  auto t = std::move(b).build();
  auto w = induced_leaf_weights(t, Pruning({l, r}), {{l, 0.4}, {r, 0.6}});
  for (std::size_t i = 0; i < 4; ++i) CHECK(w[i] == doctest::Approx(0.1));
  CHECK(w[4] == doctest::Approx(0.3));
  CHECK(w[5] == doctest::Approx(0.3));

  auto uniform = induced_weighting(t, Pruning({t.root()}), {{t.root(), 1.0}});
  for (const auto& [label, m] : uniform.masses()) CHECK(m == doctest::Approx(1.0 / 6.0));

  auto zero = induced_leaf_weights(t, Pruning({l, r}), {{l, 0.0}, {r, 1.0}});
  CHECK(zero[0] == 0.0);
  CHECK_THROWS_AS(induced_leaf_weights(t, Pruning({l, r}), {{l, 1.0}}), ArgumentError);
  CHECK_THROWS_AS(induced_leaf_weights(t, Pruning({l, r}), {{l, -0.1}, {r, 1.1}}), ArgumentError);
}

TEST_CASE("tv distance") {
  Weighting a(MassTable::Map{{"p", 0.5}, {"q", 0.5}});
  Weighting b(MassTable::Map{{"p", 0.25}, {"q", 0.75}});
  Weighting c(MassTable::Map{{"p", 1.0}, {"q", 0.0}});
  Weighting d(MassTable::Map{{"p", 0.0}, {"q", 1.0}});
  CHECK(tv_distance(a, a) == 0.0);
  CHECK(tv_distance(a, b) == doctest::Approx(0.25));
  CHECK(tv_distance(b, a) == tv_distance(a, b));
  CHECK(tv_distance(c, d) == doctest::Approx(1.0));
  Weighting e(MassTable::Map{{"p", 0.5}, {"r", 0.5}});
  CHECK_THROWS_AS(tv_distance(a, e), InputError);
}

TEST_CASE("tv distance is a metric on random weightings") {
  std::mt19937_64 rng(5);
  auto t = balanced(12);
  for (int i = 0; i < 50; ++i) {
    auto x = Weighting::from_leaf_vector(t, testing::random_weights(12, rng));
    auto y = Weighting::from_leaf_vector(t, testing::random_weights(12, rng));
    auto z = Weighting::from_leaf_vector(t, testing::random_weights(12, rng));
    CHECK(tv_distance(x, y) == doctest::Approx(tv_distance(y, x)).epsilon(1e-15));
    CHECK(tv_distance(x, z) <= tv_distance(x, y) + tv_distance(y, z) + 1e-12);
    CHECK(tv_distance(x, x) == 0.0);
  }
}

TEST_CASE("split quality on the tightness tree") {
  auto c = build_tightness(8);
  auto q = split_quality(c.tree, c.truth);
  REQUIRE(q.has_value());
  CHECK(*q == doctest::Approx(0.8).epsilon(1e-12));
  // Qualifying nodes: root (0.8), v1 and v2 (children have zero discrepancy).
  auto avg = average_split_quality(c.tree, c.truth);
  REQUIRE(avg.has_value());
  CHECK(*avg == doctest::Approx(0.8 / 3.0).epsilon(1e-12));
}

TEST_CASE("split quality is undefined on uniform weights") {
  auto t = balanced(8);
  std::vector<double> flat(8, 0.125);
  CHECK_FALSE(split_quality(t, flat).has_value());
  CHECK_FALSE(average_split_quality(t, flat).has_value());
}

TEST_CASE("average split quality enumerates qualifying nodes") {
  // Leaves (0, 1, 0, 1)/2: D_root = 1, each child has D = 0.5.
  auto t = balanced(4);
  std::vector<double> w{0.0, 0.5, 0.0, 0.5};
  auto avg = average_split_quality(t, w);
  REQUIRE(avg.has_value());
  // root ratio 0.5, both children ratio 0 (leaf children).
  CHECK(*avg == doctest::Approx((0.5 + 0.0 + 0.0) / 3.0));
}

TEST_CASE("optimal pruning matches exhaustive enumeration") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    auto t = testing::random_tree(2 + rng() % 15, rng);
    auto w = testing::random_weights(t.leaf_count(), rng);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= std::min<std::size_t>(5, t.leaf_count()); ++k) {
      auto opt = optimal_pruning(t, k, w);
      CHECK(is_pruning(t, opt.pruning));
      CHECK(opt.pruning.size() <= k);
      CHECK(opt.discrepancy == doctest::Approx(testing::brute_force_optimum(t, k, w)).epsilon(1e-12));
      CHECK(opt.discrepancy == doctest::Approx(pruning_discrepancy(t, opt.pruning, w)).epsilon(1e-12));
      CHECK(opt.discrepancy <= prev + 1e-15);
      prev = opt.discrepancy;
    }
  }
}

TEST_CASE("optimal pruning edge cases") {
  auto t = balanced(4);
  std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  auto one = optimal_pruning(t, 1, w);
  CHECK(one.pruning == Pruning({t.root()}));
  CHECK(one.discrepancy == doctest::Approx(node_discrepancy(t, t.root(), w)));
  CHECK_THROWS_AS(optimal_pruning(t, 0, w), ArgumentError);
  CHECK_THROWS_AS(optimal_pruning(t, 5, w), ArgumentError);
  // Uniform weights: no split is ever worth it.
  std::vector<double> flat(4, 0.25);
  CHECK(optimal_pruning(t, 3, flat).pruning == Pruning({t.root()}));
}

TEST_CASE("compensated sum recovers small terms") {
  CompensatedSum s;
  s.add(1e16);
  for (int i = 0; i < 1000; ++i) s.add(1.0);
  s.add(-1e16);
  CHECK(s.value() == 1000.0);
}

}
