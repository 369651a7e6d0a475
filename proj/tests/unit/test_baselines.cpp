#include <doctest.h>

#include <algorithm>
#include <random>

#include "awpkit/adversarial.hpp"
#include "awpkit/baselines.hpp"
#include "awpkit/discrepancy.hpp"
#include "support/oracles.hpp"

using namespace awpkit;

namespace {

HierTree balanced(std::size_t n) {
  TreeBuilder b;
  auto labels = make_labels(n);
  b.add_balanced(labels);
  return std::move(b).build();
}

// Root over two subtrees given by leaf counts; leaves labelled x0.. in order.
HierTree two_blocks(std::size_t left, std::size_t right) {
  TreeBuilder b;
  auto labels = make_labels(left + right);
  const NodeId l = b.add_balanced(std::span(labels).first(left));
  const NodeId r = b.add_balanced(std::span(labels).subspan(left));
  b.add_internal(l, r);
  return std::move(b).build();
}

std::vector<NodeId> split_order(const PruningResult& r) {
  std::vector<NodeId> out;
  for (const auto& ev : r.trace) {
    if (ev.kind == TraceKind::kSplit) out.push_back(ev.node);
  }
  return out;
}

// Queries the given leaves through the oracle, as a baseline's pre-draw would.
std::vector<double> fetch(WeightOracle& o, const std::vector<std::size_t>& draws) {
  std::vector<double> values;
  for (auto leaf : draws) values.push_back(o.query_leaf(leaf, o.tree().root()));
  return values;
}

}  // namespace

TEST_SUITE("baselines") {

TEST_CASE("k = 2 always yields the root's children") {
  std::mt19937_64 rng(1);
  auto t = testing::random_tree(20, rng);
  auto w = testing::random_weights(20, rng);
  for (auto* fn : {&run_weight, &run_uniform, &run_empirical}) {
    testing::CountingOracle o(t, w);
    auto r = fn(o, 2, Budget{30, 1}, 4);
    CHECK(r.pruning == Pruning({t.left(t.root()), t.right(t.root())}));
  }
}

TEST_CASE("WEIGHT descends into the heavy subtree") {
  auto t = two_blocks(4, 4);
  std::vector<double> v{0.1, 0.3, 0.2, 0.3, 0.025, 0.025, 0.025, 0.025};
  testing::CountingOracle o(t, v);
  auto r = run_weight(o, 4, Budget{10, 3}, 0);
  const NodeId heavy = t.left(t.root());
  auto order = split_order(r);
  REQUIRE(order.size() == 3);
  CHECK(order[0] == t.root());
  CHECK(order[1] == heavy);
  CHECK((order[2] == t.left(heavy) || order[2] == t.right(heavy)));
}

TEST_CASE("no basic queries leaves w'_P equal to w_P") {
  std::mt19937_64 rng(2);
  auto t = testing::random_tree(30, rng);
  auto w = testing::random_weights(30, rng);
  for (auto* fn : {&run_weight, &run_uniform, &run_empirical}) {
    testing::CountingOracle o(t, w);
    auto r = fn(o, 5, Budget{0, 4}, 1);
    CHECK(r.w_p_refined.masses() == r.w_p.masses());
    CHECK(r.ledger.basic_queries == 0);
  }
  // Without samples UNIFORM falls back to the heaviest node, i.e. WEIGHT.
  testing::CountingOracle a(t, w);
  testing::CountingOracle b(t, w);
  CHECK(run_uniform(a, 6, Budget{0, 5}, 0).pruning == run_weight(b, 6, Budget{0, 5}, 0).pruning);
}

TEST_CASE("uniform weights split in id order") {
  auto t = balanced(16);
  testing::CountingOracle o(t, std::vector<double>(16, 1.0 / 16.0));
  // Every leaf drawn once, so every node has samples and scores exactly 0.
  std::vector<std::size_t> draws(16);
  for (std::size_t i = 0; i < 16; ++i) draws[i] = i;
  auto values = fetch(o, draws);
  auto r = run_non_adaptive(o, 4, Budget{16, 3}, SplitScore::kEstimator, draws, values);
  const NodeId l = t.left(t.root());
  CHECK(split_order(r) == std::vector<NodeId>{t.root(), l, t.left(l)});
}

TEST_CASE("heavy-leaf node is split first by UNIFORM") {
  const int n = 8;
  auto t = two_blocks(n, n);
  auto f = build_heavy_leaf(n);
  std::vector<double> v;
  for (double x : f.zero_one) v.push_back(0.5 * x);
  for (int i = 0; i < n; ++i) v.push_back(0.5 / n);
  testing::CountingOracle o(t, v);
  std::vector<std::size_t> draws(2 * n);
  for (std::size_t i = 0; i < draws.size(); ++i) draws[i] = i;
  auto values = fetch(o, draws);
  auto r = run_non_adaptive(o, 3, Budget{draws.size(), 2}, SplitScore::kEstimator, draws, values);
  const NodeId heavy = t.left(t.root());
  CHECK(split_order(r)[1] == heavy);
  CHECK(dhat(r.stats.at(heavy)) == doctest::Approx(0.5 * (2.0 - 2.0 / n)).epsilon(1e-12));
}

TEST_CASE("naive empirical score") {
  NodeStats flat(0, 0.4, 4);
  for (int i = 0; i < 5; ++i) flat.add_sample(0.1);
  CHECK(naive_empirical_score(flat) == 0.0);

  // Heavy leaf never sampled: the estimate is 1 although D = 2 - 2/n.
  const int n = 100;
  NodeStats miss(0, 1.0, n);
  for (int i = 0; i < 50; ++i) miss.add_sample(0.0);
  CHECK(naive_empirical_score(miss) == doctest::Approx(1.0).epsilon(1e-12));
  NodeStats none(0, 1.0, 2);
  CHECK_THROWS_AS(naive_empirical_score(none), ArgumentError);
}

TEST_CASE("UNIFORM and EMPIRICAL can disagree on the same sample") {
  // A: heavy case of the two-case fixture, heavy leaf not drawn (D about 0.82).
  // C: two leaves (0, 0.5), both drawn (D = 0.5).
  const int n = 10;
  auto f = build_heavy_leaf(n);
  auto t = two_blocks(static_cast<std::size_t>(n + 1), 2);
  std::vector<double> v;
  for (double x : f.heavy_case) v.push_back(0.5 * x);
  v.push_back(0.0);
  v.push_back(0.5);
  std::vector<std::size_t> draws;
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) draws.push_back(i);
  draws.push_back(static_cast<std::size_t>(n + 1));
  draws.push_back(static_cast<std::size_t>(n + 2));

  const NodeId a = t.left(t.root());
  const NodeId c = t.right(t.root());
  CHECK(testing::ref_discrepancy(t, a, v) > testing::ref_discrepancy(t, c, v));

  testing::CountingOracle ou(t, v);
  auto vu = fetch(ou, draws);
  auto ru = run_non_adaptive(ou, 3, Budget{draws.size(), 2}, SplitScore::kEstimator, draws, vu);
  testing::CountingOracle oe(t, v);
  auto ve = fetch(oe, draws);
  auto re = run_non_adaptive(oe, 3, Budget{draws.size(), 2}, SplitScore::kEmpirical, draws, ve);
  CHECK(split_order(ru)[1] == a);
  CHECK(split_order(re)[1] == c);
}

TEST_CASE("budget accounting") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    auto t = testing::random_tree(10 + rng() % 60, rng);
    auto w = testing::random_weights(t.leaf_count(), rng);
    const std::size_t k = 2 + rng() % 8;
    const Budget budget{rng() % 300, k - 1};
    for (auto* fn : {&run_weight, &run_uniform, &run_empirical}) {
      testing::CountingOracle o(t, w);
      auto r = fn(o, k, budget, trial);
      CHECK(o.leaf_calls == budget.basic);
      CHECK(o.node_calls == k - 1);
      CHECK(r.pruning.size() == k);
      CHECK(is_pruning(t, r.pruning));
    }
  }
  auto t = balanced(8);
  testing::CountingOracle o(t, std::vector<double>(8, 0.125));
  CHECK_THROWS_AS(run_uniform(o, 4, Budget{10, 2}, 0), ArgumentError);
  CHECK_THROWS_AS(run_weight(o, 9, Budget{10, 8}, 0), ArgumentError);
}

TEST_CASE("match_budget copies the ledger") {
  PruningResult r;
  r.ledger.basic_queries = 137;
  r.ledger.node_queries = 9;
  CHECK(match_budget(r) == Budget{137, 9});
}

TEST_CASE("draw order never changes the pruning") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 25; ++trial) {
    auto t = testing::random_tree(20 + rng() % 80, rng);
    auto w = testing::random_weights(t.leaf_count(), rng);
    std::uniform_int_distribution<std::size_t> pick(0, t.leaf_count() - 1);
    std::vector<std::size_t> draws(50 + rng() % 200);
    for (auto& d : draws) d = pick(rng);
    const std::size_t k = 2 + rng() % 10;
    for (auto score : {SplitScore::kWeight, SplitScore::kEstimator, SplitScore::kEmpirical}) {
      testing::CountingOracle base(t, w);
      auto values = fetch(base, draws);
      auto reference = run_non_adaptive(base, k, Budget{draws.size(), k - 1}, score, draws, values);
      for (int perm = 0; perm < 3; ++perm) {
        std::vector<std::size_t> order(draws.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<std::size_t> d2;
        for (auto i : order) d2.push_back(draws[i]);
        testing::CountingOracle o(t, w);
        auto v2 = fetch(o, d2);
        auto r = run_non_adaptive(o, k, Budget{d2.size(), k - 1}, score, d2, v2);
        CHECK(r.pruning == reference.pruning);
        CHECK(r.w_p_refined.masses() == reference.w_p_refined.masses());
      }
    }
  }
}

}
