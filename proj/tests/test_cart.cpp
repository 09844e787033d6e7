#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "soilcast/cart.hpp"
#include "soilcast/error.hpp"
#include "soilcast/rng.hpp"
#include "test_util.hpp"

using namespace soilcast;
using test_util::make_dataset;
using test_util::nominal_attr;
using test_util::numeric_attr;
using test_util::one_feature_dataset;

namespace {

cart::CartParams min_leaf_one() {
  cart::CartParams params;
  params.min_instances_per_leaf = 1.0;
  return params;
}

// Training misclassification weight of a tree divided by its root weight.
double training_risk(const TreeNode& node, double root_weight) {
  if (node.is_leaf()) return (node.dist.total() - node.dist.max_weight()) / root_weight;
  double total = 0.0;
  for (const auto& child : node.children) total += training_risk(child, root_weight);
  return total;
}

Dataset xor_dataset() {
  return make_dataset({numeric_attr("x"), numeric_attr("y")}, {"A", "B"},
                      {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
}

}  // namespace

TEST_CASE("binary split on a pure view is empty") {
  const auto d = one_feature_dataset(numeric_attr("x"), {1, 2, 3}, {0, 0, 0});
  CHECK_FALSE(cart::best_binary_split(WeightedView::whole(d), {}).has_value());
}

TEST_CASE("binary split rejects a weightless view") {
  const auto d = one_feature_dataset(numeric_attr("x"), {1, 2}, {0, 1});
  CHECK_THROWS_AS(cart::best_binary_split(WeightedView(d, {}), {}),
                  InvalidArgumentError);
}

TEST_CASE("perfect separator halves the impurity of a uniform parent") {
  const auto numeric = one_feature_dataset(numeric_attr("x"), {1, 1, 1, 1, 9, 9, 9, 9},
                                           {0, 0, 0, 0, 1, 1, 1, 1});
  auto best = cart::best_binary_split(WeightedView::whole(numeric), {});
  REQUIRE(best.has_value());
  CHECK(best->first.kind == SplitTest::Kind::kNumericThreshold);
  CHECK(best->first.threshold == 5.0);
  CHECK(best->second == doctest::Approx(0.5).epsilon(1e-12));

  const auto nominal = make_dataset(
      {nominal_attr("f", {"u", "v"})}, {"A", "B"},
      {{0, 0}, {0, 0}, {0, 0}, {0, 0}, {1, 1}, {1, 1}, {1, 1}, {1, 1}});
  best = cart::best_binary_split(WeightedView::whole(nominal), {});
  REQUIRE(best.has_value());
  CHECK(best->first.kind == SplitTest::Kind::kNominalOneVsRest);
  CHECK(best->first.match_value == 0);
  CHECK(best->second == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("gini decrease of the 9-5 parent split 6-2 versus 3-3") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 6; ++i) rows.push_back({0.0, 0.0});
  for (int i = 0; i < 2; ++i) rows.push_back({0.0, 1.0});
  for (int i = 0; i < 3; ++i) rows.push_back({1.0, 0.0});
  for (int i = 0; i < 3; ++i) rows.push_back({1.0, 1.0});
  const auto d = make_dataset({numeric_attr("x")}, {"A", "B"}, rows);
  const auto best = cart::best_binary_split(WeightedView::whole(d), {});
  REQUIRE(best.has_value());
  CHECK(best->second == doctest::Approx(0.030612244897959184).epsilon(1e-12));
}

TEST_CASE("one-vs-rest candidates follow value order on ties") {
  // Three values with identical class splits: the lowest value index wins.
  const auto d = make_dataset(
      {nominal_attr("f", {"u", "v", "w"})}, {"A", "B"},
      {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {2, 0}, {2, 1}});
  const auto best = cart::best_binary_split(WeightedView::whole(d), min_leaf_one());
  REQUIRE(best.has_value());
  CHECK(best->first.kind == SplitTest::Kind::kNominalOneVsRest);
  CHECK(best->first.match_value == 0);
}

TEST_CASE("grow_full reaches purity on consistent data") {
  const auto single = one_feature_dataset(numeric_attr("x"), {1, 2, 3}, {0, 0, 0});
  CHECK(cart::grow_full(single, {}).is_leaf());

  const auto xor_tree = cart::grow_full(xor_dataset(), min_leaf_one());
  CHECK(test_util::resubstitution_accuracy(xor_tree, xor_dataset(),
                                           MissingPolicy::kHeavierBranch) == 1.0);

  Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto d = test_util::random_consistent_dataset(rng, 40, 2, 1, 3);
    const auto tree = cart::grow_full(d, min_leaf_one());
    CHECK(test_util::all_leaves_pure(tree));
  }
}

TEST_CASE("grow_full rejects an empty dataset") {
  const Dataset d = one_feature_dataset(numeric_attr("x"), {}, {});
  CHECK_THROWS_AS(cart::grow_full(d, {}), InvalidArgumentError);
}

TEST_CASE("missing values route to the heavier branch") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 8; ++i) rows.push_back({1.0, 0.0});
  for (int i = 0; i < 6; ++i) rows.push_back({5.0, 1.0});
  const auto d = make_dataset({numeric_attr("x")}, {"A", "B"}, rows);
  const auto stump = cart::grow_full(d, {});
  REQUIRE_FALSE(stump.is_leaf());

  Instance missing;
  missing.cells = {missing_cell(), 0.0};
  // The heavier branch holds the 8 class-A rows: the posterior is pure A.
  const auto posterior = classify(stump, missing, MissingPolicy::kHeavierBranch);
  CHECK(posterior.weight(0) == doctest::Approx(1.0));
  CHECK(predict_class(stump, missing, MissingPolicy::kHeavierBranch) == 0);
}

TEST_CASE("cost-complexity sequence of a single leaf") {
  TreeNode leaf;
  leaf.dist = ClassDistribution::from_weights({3, 1});
  leaf.predicted = 0;
  const auto seq = cart::cost_complexity_sequence(leaf);
  REQUIRE(seq.alphas.size() == 1);
  CHECK(seq.alphas[0] == 0.0);
  CHECK(seq.trees[0].is_leaf());
}

TEST_CASE("stump link strength is the collapsed error over the root weight") {
  // Perfect leaves under a 9-versus-5 root: g = (5/14 - 0) / 1.
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 9; ++i) rows.push_back({0.0, 0.0});
  for (int i = 0; i < 5; ++i) rows.push_back({1.0, 1.0});
  const auto d = make_dataset({numeric_attr("x")}, {"A", "B"}, rows);
  const auto stump = cart::grow_full(d, {});
  REQUIRE(leaf_count(stump) == 2);

  const auto seq = cart::cost_complexity_sequence(stump);
  REQUIRE(seq.alphas.size() == 2);
  CHECK(seq.alphas[0] == 0.0);
  CHECK(seq.alphas[1] == 5.0 / 14.0);
  CHECK(seq.trees[1].is_leaf());
}

TEST_CASE("pruning sequences are nested with nondecreasing alphas") {
  Rng rng(32);
  for (int trial = 0; trial < 25; ++trial) {
    const auto d = test_util::random_noisy_dataset(rng, 50 + trial * 4, 3, 3, 0.05);
    const auto full = cart::grow_full(d, {});
    const auto seq = cart::cost_complexity_sequence(full);

    REQUIRE(seq.alphas.size() == seq.trees.size());
    REQUIRE(!seq.trees.empty());
    CHECK(seq.alphas.front() == 0.0);
    CHECK(seq.trees.back().is_leaf());
    for (std::size_t i = 1; i < seq.trees.size(); ++i) {
      CHECK(seq.alphas[i] >= seq.alphas[i - 1]);
      CHECK(leaf_count(seq.trees[i]) < leaf_count(seq.trees[i - 1]));
      CHECK(test_util::is_pruned_subtree(seq.trees[i - 1], seq.trees[i]));
      CHECK(test_util::is_pruned_subtree(full, seq.trees[i]));
    }

    // Within the sequence, each entry minimizes risk + alpha * leaves at its
    // own alpha.
    const double root_weight = full.dist.total();
    for (std::size_t i = 0; i < seq.trees.size(); ++i) {
      const double own = training_risk(seq.trees[i], root_weight) +
                         seq.alphas[i] * static_cast<double>(leaf_count(seq.trees[i]));
      for (const auto& other : seq.trees) {
        const double cost = training_risk(other, root_weight) +
                            seq.alphas[i] * static_cast<double>(leaf_count(other));
        CHECK(own <= cost + 1e-9);
      }
    }
  }
}

TEST_CASE("selection keeps a separable dataset exact") {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 30; ++i) rows.push_back({static_cast<double>(i % 3), 0.0});
  for (int i = 0; i < 30; ++i) rows.push_back({10.0 + static_cast<double>(i % 3), 1.0});
  const auto d = make_dataset({numeric_attr("x")}, {"A", "B"}, rows);
  const auto tree = cart::select_pruned_tree(d, {});
  CHECK(test_util::resubstitution_accuracy(tree, d, MissingPolicy::kHeavierBranch) == 1.0);
}

TEST_CASE("selection collapses a pure dataset to one leaf") {
  const auto d = one_feature_dataset(numeric_attr("x"), {1, 2, 3, 4, 5, 6}, {0, 0, 0, 0, 0, 0});
  CHECK(cart::select_pruned_tree(d, {}).is_leaf());
}

TEST_CASE("selection never returns more leaves than the full tree") {
  Rng rng(33);
  for (int trial = 0; trial < 5; ++trial) {
    auto d = test_util::random_consistent_dataset(rng, 80, 2, 1, 2);
    // Flip a fifth of the labels.
    for (auto& inst : d.instances) {
      if (rng.uniform01() < 0.2) {
        auto& cell = inst.cells[d.class_index];
        cell = cell == 0.0 ? 1.0 : 0.0;
      }
    }
    cart::CartParams params;
    params.seed = 1000 + static_cast<std::uint64_t>(trial);
    const auto full = cart::grow_full(d, params);
    const auto picked = cart::select_pruned_tree(d, params);
    CHECK(leaf_count(picked) <= leaf_count(full));
  }
}

TEST_CASE("selection needs enough instances to stratify its folds") {
  const auto d = xor_dataset();  // four instances cannot fill five folds
  CHECK_THROWS_AS(cart::select_pruned_tree(d, {}), InvalidArgumentError);
}

TEST_CASE("selection is deterministic per seed") {
  Rng rng(34);
  const auto d = test_util::random_noisy_dataset(rng, 100, 3, 3, 0.05);
  cart::CartParams params;
  params.seed = 7;
  const auto a = cart::select_pruned_tree(d, params);
  const auto b = cart::select_pruned_tree(d, params);
  CHECK(test_util::trees_identical(a, b));
}
