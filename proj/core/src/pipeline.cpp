#include "soilcast/pipeline.hpp"

#include <memory>
#include <utility>

#include "soilcast/error.hpp"
#include "soilcast/rng.hpp"

namespace soilcast {

namespace {

std::vector<std::string> split_tokens(const std::string& name) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : name) {
    if (c == '+') {
      tokens.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  tokens.push_back(current);
  return tokens;
}

// Distinct derived streams so wrappers and learners never share randomness.
enum SeedStream : std::uint64_t { kCartStream = 1, kNBTreeStream = 2, kBoostStream = 3 };

Model train_base(const Dataset& dataset, LearnerKind base, const PipelineParams& params) {
  TreeModel tree;
  tree.kind = base;
  switch (base) {
    case LearnerKind::kJ48:
      tree.root = c45::induce(dataset, params.c45);
      break;
    case LearnerKind::kSimpleCart: {
      cart::CartParams cp = params.cart;
      cp.seed = mix_seed(params.seed, kCartStream);
      tree.root = cart::select_pruned_tree(dataset, cp);
      break;
    }
    case LearnerKind::kNBTree: {
      nbtree::NBTreeParams np = params.nbtree;
      np.seed = mix_seed(params.seed, kNBTreeStream);
      tree.root = nbtree::induce_nbtree(dataset, np);
      break;
    }
  }
  Model model;
  model.node = std::move(tree);
  return model;
}

Model train_tokens(const Dataset& dataset, const std::vector<std::string>& wrappers,
                   std::size_t depth, LearnerKind base, const PipelineParams& params) {
  if (depth == wrappers.size()) return train_base(dataset, base, params);

  const std::string& wrapper = wrappers[depth];
  if (wrapper == "cfs") {
    const cfs::CorrelationCache cache = cfs::build_correlations(dataset);
    cfs::FeatureSubset subset = cfs::best_first_search(cache);
    const Dataset reduced = cfs::filter_dataset(dataset, subset);
    SelectedModel selected;
    selected.subset = std::move(subset);
    selected.original_class_index = dataset.class_index;
    selected.base = std::make_unique<Model>(
        train_tokens(reduced, wrappers, depth + 1, base, params));
    Model model;
    model.node = std::move(selected);
    return model;
  }
  if (wrapper == "boost") {
    adaboost::BoostParams bp;
    bp.iterations = params.boost_iterations;
    bp.resample = params.boost_resample;
    bp.seed = mix_seed(params.seed, kBoostStream);
    BoostedEnsemble ensemble = adaboost::train(
        dataset, bp, [&](const Dataset& round_data) {
          return train_tokens(round_data, wrappers, depth + 1, base, params);
        });
    std::string inner = learner_token(base);
    for (std::size_t i = wrappers.size(); i-- > depth + 1;) {
      inner = wrappers[i] + "+" + inner;
    }
    ensemble.base_name = inner;
    Model model;
    model.node = std::move(ensemble);
    return model;
  }
  throw InvalidArgumentError("unknown pipeline wrapper '" + wrapper + "'");
}

}  // namespace

PipelineSpec parse_pipeline(const std::string& name) {
  const std::vector<std::string> tokens = split_tokens(name);
  PipelineSpec spec;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tokens[i] != "cfs" && tokens[i] != "boost") {
      throw InvalidArgumentError("unknown pipeline wrapper '" + tokens[i] +
                                 "' in '" + name + "' (expected cfs or boost)");
    }
    spec.wrappers.push_back(tokens[i]);
  }
  spec.base = parse_learner(tokens.back());
  return spec;
}

std::string pipeline_name(const PipelineSpec& spec) {
  std::string name;
  for (const auto& wrapper : spec.wrappers) name += wrapper + "+";
  return name + learner_token(spec.base);
}

std::string pipeline_display_name(const PipelineSpec& spec) {
  std::string name;
  for (const auto& wrapper : spec.wrappers) {
    name += (wrapper == "cfs" ? "CFS+" : "AdaBoost+");
  }
  return name + learner_display_name(spec.base);
}

Model train_pipeline(const Dataset& dataset, const PipelineSpec& spec,
                     const PipelineParams& params) {
  return train_tokens(dataset, spec.wrappers, 0, spec.base, params);
}

Model attribute_selected_train(const Dataset& dataset, const PipelineSpec& base_spec,
                               const PipelineParams& params) {
  PipelineSpec wrapped = base_spec;
  wrapped.wrappers.insert(wrapped.wrappers.begin(), "cfs");
  return train_pipeline(dataset, wrapped, params);
}

}  // namespace soilcast
