#include "soilcast/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "soilcast/error.hpp"
#include "soilcast/rng.hpp"

namespace soilcast {
namespace adaboost {

namespace {

constexpr double kBetaFloor = 1e-10;

Dataset with_uniform_weights(const Dataset& dataset) {
  Dataset uniform = dataset;
  const double w = 1.0 / static_cast<double>(uniform.instances.size());
  for (auto& inst : uniform.instances) inst.weight = w;
  return uniform;
}

// Weights scaled to sum to the instance count, so base-learner leaf minima
// keep their usual meaning.
Dataset scaled_for_training(const Dataset& dataset) {
  Dataset scaled = dataset;
  const double n = static_cast<double>(scaled.instances.size());
  for (auto& inst : scaled.instances) inst.weight *= n;
  return scaled;
}

Dataset bootstrap_sample(const Dataset& dataset, Rng& rng) {
  std::vector<double> cumulative;
  cumulative.reserve(dataset.instances.size());
  double running = 0.0;
  for (const auto& inst : dataset.instances) {
    running += inst.weight;
    cumulative.push_back(running);
  }
  Dataset sample;
  sample.schema = dataset.schema;
  sample.class_index = dataset.class_index;
  sample.instances.reserve(dataset.instances.size());
  for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
    const double u = rng.uniform01() * running;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    const std::size_t pick = std::min(
        static_cast<std::size_t>(it - cumulative.begin()), dataset.instances.size() - 1);
    Instance inst = dataset.instances[pick];
    inst.weight = 1.0;
    sample.instances.push_back(std::move(inst));
  }
  return sample;
}

}  // namespace

double weighted_error(const Model& model, const Dataset& dataset) {
  double total = 0.0;
  for (const auto& inst : dataset.instances) total += inst.weight;
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidArgumentError("weighted_error expects weights normalized to sum 1");
  }
  double wrong = 0.0;
  for (const auto& inst : dataset.instances) {
    if (predict_class(model, inst) != dataset.label_of(inst)) wrong += inst.weight;
  }
  return wrong;
}

std::optional<Dataset> reweight(const Dataset& dataset, const Model& model) {
  const double eps = weighted_error(model, dataset);
  if (eps <= 0.0 || eps >= 0.5) return std::nullopt;
  const double beta = eps / (1.0 - eps);
  Dataset updated = dataset;
  double total = 0.0;
  for (auto& inst : updated.instances) {
    if (predict_class(model, inst) == updated.label_of(inst)) inst.weight *= beta;
    total += inst.weight;
  }
  for (auto& inst : updated.instances) inst.weight /= total;
  return updated;
}

BoostedEnsemble train(const Dataset& dataset, const BoostParams& params,
                      const BaseTrainer& base_trainer) {
  if (dataset.instances.empty()) throw InvalidArgumentError("cannot boost on an empty dataset");
  if (params.iterations < 1) throw InvalidArgumentError("boosting needs at least one iteration");

  BoostedEnsemble ensemble;
  ensemble.requested_iterations = params.iterations;
  Dataset working = with_uniform_weights(dataset);

  for (std::size_t t = 0; t < params.iterations; ++t) {
    Model model;
    if (params.resample) {
      Rng rng(mix_seed(params.seed, t));
      model = base_trainer(bootstrap_sample(working, rng));
    } else {
      model = base_trainer(scaled_for_training(working));
    }
    const double eps = weighted_error(model, working);

    if (eps <= 0.0) {
      if (t == 0) {
        EnsembleMember member;
        member.model = std::make_unique<Model>(std::move(model));
        member.beta = kBetaFloor;
        member.vote_weight = std::log(1.0 / kBetaFloor);
        ensemble.members.push_back(std::move(member));
      }
      break;
    }
    if (eps >= 0.5) break;

    EnsembleMember member;
    member.model = std::make_unique<Model>(std::move(model));
    member.beta = eps / (1.0 - eps);
    member.vote_weight = std::log(1.0 / member.beta);
    ensemble.members.push_back(std::move(member));
    working = *reweight(working, *ensemble.members.back().model);
  }
  return ensemble;
}

ClassDistribution predict(const BoostedEnsemble& ensemble, const Instance& instance) {
  if (ensemble.members.empty()) {
    throw InvalidStateError("cannot predict with an empty ensemble");
  }
  std::vector<double> score;
  for (const auto& member : ensemble.members) {
    const ClassDistribution dist = predict_dist(*member.model, instance);
    if (score.size() < dist.size()) score.resize(dist.size(), 0.0);
    score[static_cast<std::size_t>(dist.argmax())] += member.vote_weight;
  }
  double total = 0.0;
  for (double s : score) total += s;
  for (double& s : score) s /= total;
  return ClassDistribution::from_weights(std::move(score));
}

}  // namespace adaboost
}  // namespace soilcast
