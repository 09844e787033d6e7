#include "soilcast/model_io.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "soilcast/error.hpp"
#include "soilcast/nbtree.hpp"

namespace soilcast {

namespace {

using nlohmann::json;

json dist_to_json(const ClassDistribution& dist) { return dist.weights(); }

ClassDistribution dist_from_json(const json& j) {
  return ClassDistribution::from_weights(j.get<std::vector<double>>());
}

json test_to_json(const SplitTest& test) {
  json j;
  j["attribute"] = test.attribute;
  switch (test.kind) {
    case SplitTest::Kind::kNominalMultiway:
      j["kind"] = "multiway";
      break;
    case SplitTest::Kind::kNumericThreshold:
      j["kind"] = "threshold";
      j["threshold"] = test.threshold;
      break;
    case SplitTest::Kind::kNominalOneVsRest:
      j["kind"] = "one_vs_rest";
      j["match_value"] = test.match_value;
      break;
  }
  return j;
}

SplitTest test_from_json(const json& j) {
  SplitTest test;
  test.attribute = j.at("attribute").get<std::size_t>();
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "multiway") {
    test.kind = SplitTest::Kind::kNominalMultiway;
  } else if (kind == "threshold") {
    test.kind = SplitTest::Kind::kNumericThreshold;
    test.threshold = j.at("threshold").get<double>();
  } else if (kind == "one_vs_rest") {
    test.kind = SplitTest::Kind::kNominalOneVsRest;
    test.match_value = j.at("match_value").get<std::size_t>();
  } else {
    throw ParseError("model file: unknown split kind '" + kind + "'");
  }
  return test;
}

json nb_to_json(const NaiveBayesModel& nb) {
  json attrs = json::array();
  for (const auto& am : nb.attributes) {
    attrs.push_back({{"attribute", am.attribute},
                     {"binned", am.binned},
                     {"cut_points", am.cut_points},
                     {"conditional", am.conditional}});
  }
  return {{"priors", nb.class_priors}, {"attributes", std::move(attrs)}};
}

std::shared_ptr<const NaiveBayesModel> nb_from_json(const json& j) {
  auto nb = std::make_shared<NaiveBayesModel>();
  nb->class_priors = j.at("priors").get<std::vector<double>>();
  for (const auto& item : j.at("attributes")) {
    NaiveBayesModel::AttributeModel am;
    am.attribute = item.at("attribute").get<std::size_t>();
    am.binned = item.at("binned").get<bool>();
    am.cut_points = item.at("cut_points").get<std::vector<double>>();
    am.conditional = item.at("conditional").get<std::vector<std::vector<double>>>();
    nb->attributes.push_back(std::move(am));
  }
  return nb;
}

json node_to_json(const TreeNode& node) {
  json j;
  j["dist"] = dist_to_json(node.dist);
  j["predicted"] = node.predicted;
  if (node.test) {
    j["test"] = test_to_json(*node.test);
    json children = json::array();
    for (const auto& child : node.children) children.push_back(node_to_json(child));
    j["children"] = std::move(children);
  }
  if (node.nb) j["nb"] = nb_to_json(*node.nb);
  return j;
}

TreeNode node_from_json(const json& j) {
  TreeNode node;
  node.dist = dist_from_json(j.at("dist"));
  node.predicted = j.at("predicted").get<int>();
  if (j.contains("test")) {
    node.test = test_from_json(j.at("test"));
    for (const auto& child : j.at("children")) node.children.push_back(node_from_json(child));
  }
  if (j.contains("nb")) node.nb = nb_from_json(j.at("nb"));
  return node;
}

json model_to_json(const Model& model);

json tree_model_to_json(const TreeModel& tree) {
  return {{"type", "tree"},
          {"learner", learner_token(tree.kind)},
          {"root", node_to_json(tree.root)}};
}

json selected_to_json(const SelectedModel& selected) {
  return {{"type", "selected"},
          {"attributes", selected.subset.attributes},
          {"merit", selected.subset.merit},
          {"class_index", selected.original_class_index},
          {"base", model_to_json(*selected.base)}};
}

json boosted_to_json(const BoostedEnsemble& ensemble) {
  json members = json::array();
  for (const auto& member : ensemble.members) {
    members.push_back({{"beta", member.beta},
                       {"vote_weight", member.vote_weight},
                       {"model", model_to_json(*member.model)}});
  }
  return {{"type", "boosted"},
          {"base_name", ensemble.base_name},
          {"requested_iterations", ensemble.requested_iterations},
          {"members", std::move(members)}};
}

json model_to_json(const Model& model) {
  if (const auto* tree = std::get_if<TreeModel>(&model.node)) return tree_model_to_json(*tree);
  if (const auto* selected = std::get_if<SelectedModel>(&model.node)) {
    return selected_to_json(*selected);
  }
  return boosted_to_json(std::get<BoostedEnsemble>(model.node));
}

Model model_from_json(const json& j) {
  Model model;
  const std::string type = j.at("type").get<std::string>();
  if (type == "tree") {
    TreeModel tree;
    tree.kind = parse_learner(j.at("learner").get<std::string>());
    tree.root = node_from_json(j.at("root"));
    model.node = std::move(tree);
  } else if (type == "selected") {
    SelectedModel selected;
    selected.subset.attributes = j.at("attributes").get<std::vector<std::size_t>>();
    selected.subset.merit = j.at("merit").get<double>();
    selected.original_class_index = j.at("class_index").get<std::size_t>();
    selected.base = std::make_unique<Model>(model_from_json(j.at("base")));
    model.node = std::move(selected);
  } else if (type == "boosted") {
    BoostedEnsemble ensemble;
    ensemble.base_name = j.at("base_name").get<std::string>();
    ensemble.requested_iterations = j.at("requested_iterations").get<std::size_t>();
    for (const auto& item : j.at("members")) {
      EnsembleMember member;
      member.beta = item.at("beta").get<double>();
      member.vote_weight = item.at("vote_weight").get<double>();
      member.model = std::make_unique<Model>(model_from_json(item.at("model")));
      ensemble.members.push_back(std::move(member));
    }
    model.node = std::move(ensemble);
  } else {
    throw ParseError("model file: unknown model type '" + type + "'");
  }
  return model;
}

json schema_to_json(const std::vector<AttributeSpec>& schema) {
  json out = json::array();
  for (const auto& spec : schema) {
    json item;
    item["name"] = spec.name;
    if (spec.kind == AttributeKind::kNumeric) {
      item["kind"] = "numeric";
    } else {
      item["kind"] = "nominal";
      item["values"] = spec.nominal_values;
    }
    out.push_back(std::move(item));
  }
  return out;
}

std::vector<AttributeSpec> schema_from_json(const json& j) {
  std::vector<AttributeSpec> schema;
  for (const auto& item : j) {
    AttributeSpec spec;
    spec.name = item.at("name").get<std::string>();
    const std::string kind = item.at("kind").get<std::string>();
    if (kind == "numeric") {
      spec.kind = AttributeKind::kNumeric;
    } else if (kind == "nominal") {
      spec.kind = AttributeKind::kNominal;
      spec.nominal_values = item.at("values").get<std::vector<std::string>>();
    } else {
      throw ParseError("model file: unknown attribute kind '" + kind + "'");
    }
    schema.push_back(std::move(spec));
  }
  return schema;
}

}  // namespace

void save_model(const ModelFile& file, const std::string& path) {
  json j;
  j["format_version"] = file.format_version;
  j["pipeline"] = file.pipeline;
  j["params"] = file.params_echo;
  j["class_index"] = file.class_index;
  j["schema"] = schema_to_json(file.schema);
  j["model"] = model_to_json(file.model);

  std::ofstream out(path);
  if (!out) throw IoError("cannot write model file '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw IoError("failed while writing model file '" + path + "'");
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read model file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("model file '" + path + "': parse error at byte " +
                     std::to_string(e.byte) + ": " + e.what());
  }

  ModelFile file;
  try {
    file.format_version = j.at("format_version").get<int>();
    if (file.format_version != kModelFormatVersion) {
      throw UnsupportedVersionError(
          "model file '" + path + "' has format_version " +
          std::to_string(file.format_version) + "; this build reads version " +
          std::to_string(kModelFormatVersion));
    }
    file.pipeline = j.at("pipeline").get<std::string>();
    file.params_echo = j.at("params").get<std::string>();
    file.class_index = j.at("class_index").get<std::size_t>();
    file.schema = schema_from_json(j.at("schema"));
    file.model = model_from_json(j.at("model"));
  } catch (const json::exception& e) {
    throw ParseError("model file '" + path + "': " + e.what());
  }
  return file;
}

}  // namespace soilcast
