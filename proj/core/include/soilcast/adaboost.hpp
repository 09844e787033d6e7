#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "soilcast/dataset.hpp"
#include "soilcast/model.hpp"

namespace soilcast {
namespace adaboost {

struct BoostParams {
  std::size_t iterations = 10;
  // Off: the base learner receives the boosting weights directly (scaled so
  // they sum to the instance count, keeping min-leaf thresholds meaningful).
  // On: each round trains on a weight-proportional bootstrap of unit weights.
  bool resample = false;
  std::uint64_t seed = 0;
};

using BaseTrainer = std::function<Model(const Dataset&)>;

// Sum of weights of misclassified instances. The weights must already be
// normalized: anything off 1 by more than 1e-9 is an InvalidArgumentError.
double weighted_error(const Model& model, const Dataset& dataset);

// One boosting reweight: correct instances shrink by beta = eps/(1-eps),
// then everything renormalizes to sum 1 (which puts exactly half the mass on
// the misclassified instances). Returns nothing when eps falls outside
// (0, 0.5) - the halt signal, not an error.
std::optional<Dataset> reweight(const Dataset& dataset, const Model& model);

// AdaBoost.M1 over any base trainer. Rounds stop early when a member's
// weighted error reaches 0 or 0.5: a perfect first member is kept with its
// vote capped at log(1/1e-10), a perfect later member is dropped, and a
// first member at or above 0.5 yields an empty ensemble (whose predictions
// raise InvalidStateError).
BoostedEnsemble train(const Dataset& dataset, const BoostParams& params,
                      const BaseTrainer& base_trainer);

// Vote-weighted ballot over the members' predicted classes, normalized.
ClassDistribution predict(const BoostedEnsemble& ensemble, const Instance& instance);

}  // namespace adaboost
}  // namespace soilcast
