#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "soilcast/adaboost.hpp"
#include "soilcast/c45.hpp"
#include "soilcast/error.hpp"
#include "soilcast/rng.hpp"
#include "test_util.hpp"

using namespace soilcast;

namespace {

// Three class-A instances and one class-B at x = (0, 0, 0, 1).
Dataset three_one_dataset(double weight = 0.25) {
  auto d = test_util::one_feature_dataset(test_util::numeric_attr("x"), {0, 0, 0, 1},
                                          {0, 0, 0, 1});
  for (auto& inst : d.instances) inst.weight = weight;
  return d;
}

Model constant_model(int cls, std::size_t num_classes) {
  TreeModel tm;
  std::vector<double> weights(num_classes, 0.0);
  weights[static_cast<std::size_t>(cls)] = 1.0;
  tm.root.dist = ClassDistribution::from_weights(std::move(weights));
  tm.root.predicted = cls;
  Model m;
  m.node = std::move(tm);
  return m;
}

// Stump sending x <= threshold to class 0 and the rest to class 1.
Model threshold_model(double threshold) {
  TreeModel tm;
  tm.root.dist = ClassDistribution::from_weights({3.0, 1.0});
  tm.root.test = SplitTest{SplitTest::Kind::kNumericThreshold, 0, threshold, 0};
  TreeNode lo;
  lo.dist = ClassDistribution::from_weights({3.0, 0.0});
  TreeNode hi;
  hi.dist = ClassDistribution::from_weights({0.0, 1.0});
  hi.predicted = 1;
  tm.root.children = {lo, hi};
  Model m;
  m.node = std::move(tm);
  return m;
}

adaboost::BaseTrainer tree_trainer(double min_leaf) {
  return [min_leaf](const Dataset& d) {
    c45::C45Params params;
    params.min_instances_per_leaf = min_leaf;
    TreeModel tm;
    tm.root = c45::induce(d, params);
    Model m;
    m.node = std::move(tm);
    return m;
  };
}

double ensemble_training_error(const BoostedEnsemble& ensemble, const Dataset& d) {
  double wrong = 0.0;
  for (const auto& inst : d.instances) {
    if (adaboost::predict(ensemble, inst).argmax() != d.label_of(inst)) wrong += 1.0;
  }
  return wrong / static_cast<double>(d.instances.size());
}

}  // namespace

TEST_CASE("weighted error sums the misclassified mass") {
  const auto d = three_one_dataset();
  const auto always_a = constant_model(0, 2);
  CHECK(adaboost::weighted_error(always_a, d) == 0.25);
  const auto always_b = constant_model(1, 2);
  CHECK(adaboost::weighted_error(always_b, d) == 0.75);
  const auto perfect = threshold_model(0.5);
  CHECK(adaboost::weighted_error(perfect, d) == 0.0);
}

TEST_CASE("weighted error insists on normalized weights") {
  const auto d = three_one_dataset(1.0);
  CHECK_THROWS_AS(adaboost::weighted_error(constant_model(0, 2), d), InvalidArgumentError);
}

TEST_CASE("reweighting shrinks the correct instances by beta") {
  const auto d = three_one_dataset();
  const auto updated = adaboost::reweight(d, constant_model(0, 2));
  REQUIRE(updated.has_value());
  // eps = 1/4, beta = 1/3: the three correct rows end at 1/6, the error at 1/2.
  CHECK(updated->instances[0].weight == 1.0 / 6.0);
  CHECK(updated->instances[1].weight == 1.0 / 6.0);
  CHECK(updated->instances[2].weight == 1.0 / 6.0);
  CHECK(updated->instances[3].weight == 0.5);
}

TEST_CASE("reweighting leaves exactly half the mass on the mistakes") {
  Rng rng(71);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> values;
    std::vector<int> labels;
    for (int i = 0; i < 20; ++i) {
      values.push_back(static_cast<double>(i));
      labels.push_back(i % 4 == 0 ? 1 : 0);
    }
    auto d = test_util::one_feature_dataset(test_util::numeric_attr("x"), values, labels);
    double total = 0.0;
    for (auto& inst : d.instances) {
      inst.weight = 0.1 + rng.uniform01();
      total += inst.weight;
    }
    for (auto& inst : d.instances) inst.weight /= total;

    const auto model = constant_model(0, 2);
    const double eps = adaboost::weighted_error(model, d);
    if (eps <= 0.0 || eps >= 0.5) continue;
    const auto updated = adaboost::reweight(d, model);
    REQUIRE(updated.has_value());
    double wrong = 0.0;
    double sum = 0.0;
    for (const auto& inst : updated->instances) {
      sum += inst.weight;
      if (d.label_of(inst) == 1) wrong += inst.weight;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(wrong == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("reweighting signals a halt outside the open error interval") {
  auto all_a = test_util::one_feature_dataset(test_util::numeric_attr("x"), {0, 1, 2, 3},
                                              {0, 0, 0, 0});
  for (auto& inst : all_a.instances) inst.weight = 0.25;
  CHECK_FALSE(adaboost::reweight(all_a, constant_model(0, 2)).has_value());

  auto half = test_util::one_feature_dataset(test_util::numeric_attr("x"), {0, 1, 2, 3},
                                             {0, 0, 1, 1});
  for (auto& inst : half.instances) inst.weight = 0.25;
  CHECK_FALSE(adaboost::reweight(half, constant_model(0, 2)).has_value());
}

TEST_CASE("a perfect first member ends training with a capped vote") {
  const auto d = three_one_dataset(1.0);
  adaboost::BoostParams params;
  params.iterations = 10;
  const auto ensemble = adaboost::train(d, params, [](const Dataset&) {
    return threshold_model(0.5);
  });
  REQUIRE(ensemble.members.size() == 1);
  CHECK(ensemble.members[0].beta == 1e-10);
  CHECK(ensemble.members[0].vote_weight == std::log(1e10));
  CHECK(ensemble.requested_iterations == 10);
}

TEST_CASE("a quarter-error member votes with ln 3") {
  const auto d = three_one_dataset(1.0);
  adaboost::BoostParams params;
  params.iterations = 10;
  // The constant learner repeats its 1/4 error; the reweighted pass hits
  // exactly 1/2 and training stops with the single member.
  const auto ensemble = adaboost::train(d, params, [](const Dataset&) {
    return constant_model(0, 2);
  });
  REQUIRE(ensemble.members.size() == 1);
  CHECK(ensemble.members[0].beta == 0.25 / 0.75);
  CHECK(ensemble.members[0].vote_weight ==
        doctest::Approx(1.0986122886681098).epsilon(1e-15));
}

TEST_CASE("a first member at half error leaves the ensemble empty") {
  auto d = test_util::one_feature_dataset(test_util::numeric_attr("x"), {0, 1, 2, 3},
                                          {0, 0, 1, 1});
  const auto ensemble = adaboost::train(d, {}, [](const Dataset&) {
    return constant_model(0, 2);
  });
  CHECK(ensemble.members.empty());
  Instance inst{{1.0, missing_cell()}, 1.0};
  CHECK_THROWS_AS(adaboost::predict(ensemble, inst), InvalidStateError);
}

TEST_CASE("a later perfect member is dropped and training stops") {
  const auto d = three_one_dataset(1.0);
  int calls = 0;
  const auto ensemble = adaboost::train(d, {}, [&calls](const Dataset&) {
    return calls++ == 0 ? constant_model(0, 2) : threshold_model(0.5);
  });
  CHECK(calls == 2);
  REQUIRE(ensemble.members.size() == 1);
  CHECK(ensemble.members[0].beta == 0.25 / 0.75);
}

TEST_CASE("the reweighting schedule reaches the base learner scaled to n") {
  const auto d = three_one_dataset(1.0);
  std::vector<std::vector<double>> seen_weights;
  adaboost::train(d, {}, [&seen_weights](const Dataset& working) {
    std::vector<double> w;
    for (const auto& inst : working.instances) w.push_back(inst.weight);
    seen_weights.push_back(std::move(w));
    return constant_model(0, 2);
  });
  REQUIRE(seen_weights.size() == 2);
  for (double w : seen_weights[0]) CHECK(w == 1.0);
  CHECK(seen_weights[1][0] == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
  CHECK(seen_weights[1][3] == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("resampling hands the base learner unit-weight bootstraps") {
  Rng rng(72);
  const auto d = test_util::random_noisy_dataset(rng, 40, 2, 2, 0.0);
  adaboost::BoostParams params;
  params.iterations = 3;
  params.resample = true;
  params.seed = 9;

  std::vector<std::vector<std::vector<double>>> seen;
  adaboost::train(d, params, [&seen](const Dataset& sample) {
    std::vector<std::vector<double>> rows;
    for (const auto& inst : sample.instances) {
      CHECK(inst.weight == 1.0);
      rows.push_back(inst.cells);
    }
    seen.push_back(std::move(rows));
    return constant_model(0, 2);
  });
  REQUIRE_FALSE(seen.empty());
  CHECK(seen[0].size() == 40);

  std::vector<std::vector<std::vector<double>>> again;
  adaboost::train(d, params, [&again](const Dataset& sample) {
    std::vector<std::vector<double>> rows;
    for (const auto& inst : sample.instances) rows.push_back(inst.cells);
    again.push_back(std::move(rows));
    return constant_model(0, 2);
  });
  REQUIRE(again.size() == seen.size());
  CHECK(again[0] == seen[0]);
}

TEST_CASE("training rejects zero iterations and empty data") {
  const auto d = three_one_dataset(1.0);
  adaboost::BoostParams params;
  params.iterations = 0;
  CHECK_THROWS_AS(adaboost::train(d, params, [](const Dataset&) {
    return constant_model(0, 2);
  }),
                  InvalidArgumentError);

  Dataset empty;
  empty.schema = d.schema;
  empty.class_index = d.class_index;
  CHECK_THROWS_AS(adaboost::train(empty, {}, [](const Dataset&) {
    return constant_model(0, 2);
  }),
                  InvalidArgumentError);
}

TEST_CASE("prediction is a normalized weighted ballot") {
  BoostedEnsemble ensemble;
  auto add = [&ensemble](int cls, double vote) {
    EnsembleMember member;
    member.model = std::make_unique<Model>(constant_model(cls, 2));
    member.beta = 0.2;
    member.vote_weight = vote;
    ensemble.members.push_back(std::move(member));
  };
  add(0, 2.0);
  add(0, 1.0);
  add(1, 1.5);

  Instance inst{{0.0, missing_cell()}, 1.0};
  const auto dist = adaboost::predict(ensemble, inst);
  CHECK(dist.weight(0) == 3.0 / 4.5);
  CHECK(dist.weight(1) == 1.5 / 4.5);

  BoostedEnsemble lone;
  lone.members.push_back({std::make_unique<Model>(constant_model(1, 2)), 0.5, 1.0});
  const auto sure = adaboost::predict(lone, inst);
  CHECK(sure.weight(0) == 0.0);
  CHECK(sure.weight(1) == 1.0);
}

TEST_CASE("training error respects the staged error bound") {
  for (std::uint64_t trial = 0; trial < 3; ++trial) {
    Rng rng(73 + trial);
    const auto d = test_util::random_noisy_dataset(rng, 60, 2, 2, 0.0);
    adaboost::BoostParams params;
    params.iterations = 8;
    const auto ensemble = adaboost::train(d, params, tree_trainer(12.0));
    REQUIRE_FALSE(ensemble.members.empty());

    double bound = 1.0;
    for (const auto& member : ensemble.members) {
      const double eps = member.beta / (1.0 + member.beta);
      bound *= 2.0 * std::sqrt(eps * (1.0 - eps));
    }
    CHECK(ensemble_training_error(ensemble, d) <= bound + 1e-9);
  }
}

TEST_CASE("boosted training is deterministic") {
  Rng rng(74);
  const auto d = test_util::random_noisy_dataset(rng, 50, 2, 2, 0.0);
  adaboost::BoostParams params;
  params.iterations = 5;
  params.resample = true;
  params.seed = 21;
  const auto a = adaboost::train(d, params, tree_trainer(8.0));
  const auto b = adaboost::train(d, params, tree_trainer(8.0));
  REQUIRE(a.members.size() == b.members.size());
  for (std::size_t i = 0; i < a.members.size(); ++i) {
    CHECK(a.members[i].beta == b.members[i].beta);
    CHECK(a.members[i].vote_weight == b.members[i].vote_weight);
  }
  if (!a.members.empty()) {
    for (const auto& inst : d.instances) {
      CHECK(adaboost::predict(a, inst).argmax() == adaboost::predict(b, inst).argmax());
    }
  }
}
