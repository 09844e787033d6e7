#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "soilcast/adaboost.hpp"
#include "soilcast/c45.hpp"
#include "soilcast/cart.hpp"
#include "soilcast/model.hpp"
#include "soilcast/nbtree.hpp"

namespace soilcast {

// A training recipe written as '+'-joined tokens, outermost wrapper first
// and the base learner last: "j48", "cfs+j48", "cfs+boost+j48" (select once,
// then boost on the reduced data), "boost+cfs+j48" (selection re-run inside
// every boosting round). Wrappers are "cfs" and "boost"; bases are "j48",
// "cart", "nbtree".
struct PipelineSpec {
  std::vector<std::string> wrappers;
  LearnerKind base = LearnerKind::kJ48;
};

PipelineSpec parse_pipeline(const std::string& name);

// Canonical token string ("cfs+boost+j48") and the report label
// ("CFS+AdaBoost+J48").
std::string pipeline_name(const PipelineSpec& spec);
std::string pipeline_display_name(const PipelineSpec& spec);

// Everything a pipeline needs to train. The single seed drives every
// stochastic component: the Gini learner's pruning folds, the hybrid tree's
// utility folds, and boosting each get a distinct stream derived from it
// (their own seed fields are overwritten).
struct PipelineParams {
  c45::C45Params c45;
  cart::CartParams cart;
  nbtree::NBTreeParams nbtree;
  std::size_t boost_iterations = 10;
  bool boost_resample = false;
  std::uint64_t seed = 0;
};

Model train_pipeline(const Dataset& dataset, const PipelineSpec& spec,
                     const PipelineParams& params);

// Feature selection on the training data, then the given pipeline on the
// reduced view; the returned model records the subset and projects
// prediction-time instances through it.
Model attribute_selected_train(const Dataset& dataset, const PipelineSpec& base_spec,
                               const PipelineParams& params);

}  // namespace soilcast
