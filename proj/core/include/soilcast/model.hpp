#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "soilcast/cfs.hpp"
#include "soilcast/dataset.hpp"
#include "soilcast/tree.hpp"

namespace soilcast {

enum class LearnerKind { kJ48, kSimpleCart, kNBTree };

// Lowercase pipeline token ("j48", "cart", "nbtree") and the display name
// used in reports ("J48", "SimpleCart", "NBTree").
std::string learner_token(LearnerKind kind);
std::string learner_display_name(LearnerKind kind);
LearnerKind parse_learner(const std::string& token);

struct Model;

// A single trained tree. The learner kind decides how missing values route
// at prediction time: the Gini learner sends them down the heavier branch,
// the others use fractional descent.
struct TreeModel {
  LearnerKind kind = LearnerKind::kJ48;
  TreeNode root;
};

// A base model trained on a reduced attribute set. Prediction projects the
// full-width instance through the recorded subset first, so callers always
// present instances in the original schema.
struct SelectedModel {
  cfs::FeatureSubset subset;
  std::size_t original_class_index = 0;
  std::unique_ptr<Model> base;
};

struct EnsembleMember {
  std::unique_ptr<Model> model;
  double beta = 0.0;
  double vote_weight = 0.0;
};

// Weighted-vote ensemble; members carry beta in (0,1) and vote log(1/beta).
// Training may stop early, so members.size() can fall short of the request.
struct BoostedEnsemble {
  std::vector<EnsembleMember> members;
  std::string base_name;
  std::size_t requested_iterations = 0;
};

struct Model {
  std::variant<TreeModel, SelectedModel, BoostedEnsemble> node;
};

// Normalized posterior of one instance under any model. Empty ensembles
// raise InvalidStateError; instances narrower than the training schema raise
// InvalidArgumentError.
ClassDistribution predict_dist(const Model& model, const Instance& instance);

// argmax of predict_dist; ties resolve to the lowest class index.
int predict_class(const Model& model, const Instance& instance);

std::size_t num_classes(const Model& model);

// The outermost recorded feature subset, when the model has one.
const cfs::FeatureSubset* selected_subset(const Model& model);

}  // namespace soilcast
