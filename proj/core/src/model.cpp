#include "soilcast/model.hpp"

#include <algorithm>

#include "soilcast/error.hpp"

namespace soilcast {

std::string learner_token(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kJ48: return "j48";
    case LearnerKind::kSimpleCart: return "cart";
    case LearnerKind::kNBTree: return "nbtree";
  }
  return "j48";
}

std::string learner_display_name(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::kJ48: return "J48";
    case LearnerKind::kSimpleCart: return "SimpleCart";
    case LearnerKind::kNBTree: return "NBTree";
  }
  return "J48";
}

LearnerKind parse_learner(const std::string& token) {
  if (token == "j48") return LearnerKind::kJ48;
  if (token == "cart") return LearnerKind::kSimpleCart;
  if (token == "nbtree") return LearnerKind::kNBTree;
  throw InvalidArgumentError("unknown learner '" + token + "' (expected j48, cart, or nbtree)");
}

namespace {

MissingPolicy policy_for(LearnerKind kind) {
  return kind == LearnerKind::kSimpleCart ? MissingPolicy::kHeavierBranch
                                          : MissingPolicy::kFractionalDescent;
}

struct PredictVisitor {
  const Instance& instance;

  ClassDistribution operator()(const TreeModel& tree) const {
    return classify(tree.root, instance, policy_for(tree.kind));
  }

  ClassDistribution operator()(const SelectedModel& selected) const {
    const Instance projected =
        cfs::project_instance(instance, selected.subset, selected.original_class_index);
    return predict_dist(*selected.base, projected);
  }

  ClassDistribution operator()(const BoostedEnsemble& ensemble) const {
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
};

struct NumClassesVisitor {
  std::size_t operator()(const TreeModel& tree) const { return tree.root.dist.size(); }
  std::size_t operator()(const SelectedModel& selected) const { return num_classes(*selected.base); }
  std::size_t operator()(const BoostedEnsemble& ensemble) const {
    if (ensemble.members.empty()) {
      throw InvalidStateError("empty ensemble has no class count");
    }
    return num_classes(*ensemble.members.front().model);
  }
};

}  // namespace

ClassDistribution predict_dist(const Model& model, const Instance& instance) {
  return std::visit(PredictVisitor{instance}, model.node);
}

int predict_class(const Model& model, const Instance& instance) {
  return predict_dist(model, instance).argmax();
}

std::size_t num_classes(const Model& model) {
  return std::visit(NumClassesVisitor{}, model.node);
}

const cfs::FeatureSubset* selected_subset(const Model& model) {
  if (const auto* selected = std::get_if<SelectedModel>(&model.node)) {
    return &selected->subset;
  }
  return nullptr;
}

}  // namespace soilcast
