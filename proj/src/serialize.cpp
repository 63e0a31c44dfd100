#include "grrf/serialize.hpp"

#include <fstream>

#include "grrf/errors.hpp"

namespace grrf {

using nlohmann::json;

json split_plan_to_json(const SplitPlan& plan) {
  return json{{"train", plan.train_indices},
              {"test", plan.test_indices},
              {"seed", plan.seed}};
}

SplitPlan split_plan_from_json(const json& j) {
  SplitPlan plan;
  plan.train_indices = j.at("train").get<std::vector<std::size_t>>();
  plan.test_indices = j.at("test").get<std::vector<std::size_t>>();
  plan.seed = j.at("seed").get<std::uint64_t>();
  return plan;
}

json config_to_json(const ForestConfig& cfg) {
  return json{{"ntree", cfg.ntree},
              {"mtry", cfg.mtry},
              {"mode", to_string(cfg.mode)},
              {"sample_mode", cfg.sample_mode == SampleMode::bootstrap
                                  ? "bootstrap"
                                  : "without_replacement"},
              {"sample_fraction", cfg.sample_fraction},
              {"lambda", cfg.lambda},
              {"gamma", cfg.gamma},
              {"lambda0", cfg.lambda0},
              {"min_node", cfg.min_node},
              {"seed", cfg.seed}};
}

ForestConfig config_from_json(const json& j) {
  ForestConfig cfg;
  cfg.ntree = j.at("ntree").get<int>();
  cfg.mtry = j.at("mtry").get<int>();
  const std::string mode = j.at("mode").get<std::string>();
  if (mode == "rf") cfg.mode = ForestMode::rf;
  else if (mode == "rrf") cfg.mode = ForestMode::rrf;
  else if (mode == "grrf") cfg.mode = ForestMode::grrf;
  else throw CsvError("unknown forest mode: " + mode);
  cfg.sample_mode = j.at("sample_mode").get<std::string>() == "bootstrap"
                        ? SampleMode::bootstrap
                        : SampleMode::without_replacement;
  cfg.sample_fraction = j.at("sample_fraction").get<double>();
  cfg.lambda = j.at("lambda").get<double>();
  cfg.gamma = j.at("gamma").get<double>();
  cfg.lambda0 = j.at("lambda0").get<double>();
  cfg.min_node = j.at("min_node").get<int>();
  cfg.seed = j.at("seed").get<std::uint64_t>();
  return cfg;
}

json tree_to_json(const Tree& t) {
  json nodes = json::array();
  for (std::size_t id = 0; id < t.nodes.size(); ++id) {
    const TreeNode& n = t.nodes[id];
    json jn{{"id", id},
            {"kind", n.kind == TreeNode::Kind::internal ? "internal" : "leaf"},
            {"counts", n.counts.counts},
            {"prediction", n.prediction}};
    if (n.kind == TreeNode::Kind::internal) {
      jn["feature"] = n.feature;
      jn["threshold"] = n.threshold;
      jn["left"] = n.left;
      jn["right"] = n.right;
      jn["gain"] = n.split_gain;
    }
    nodes.push_back(std::move(jn));
  }
  return json{{"nodes", std::move(nodes)}};
}

Tree tree_from_json(const json& j, int /*num_classes*/) {
  Tree t;
  for (const auto& jn : j.at("nodes")) {
    TreeNode n;
    n.counts.counts = jn.at("counts").get<std::vector<std::int64_t>>();
    n.counts.total = 0;
    for (std::int64_t c : n.counts.counts) n.counts.total += c;
    n.prediction = jn.at("prediction").get<int>();
    if (jn.at("kind").get<std::string>() == "internal") {
      n.kind = TreeNode::Kind::internal;
      n.feature = jn.at("feature").get<int>();
      n.threshold = jn.at("threshold").get<double>();
      n.left = jn.at("left").get<int>();
      n.right = jn.at("right").get<int>();
      n.split_gain = jn.at("gain").get<double>();
    }
    t.nodes.push_back(std::move(n));
  }
  return t;
}

json forest_to_json(const Forest& f, const SelectionResult* selection) {
  json trees = json::array();
  for (const Tree& t : f.trees) trees.push_back(tree_to_json(t));
  json out{{"schema_version", kSchemaVersion},
           {"kind", "forest"},
           {"config", config_to_json(f.config)},
           {"num_features", f.num_features},
           {"num_classes", f.num_classes},
           {"trees", std::move(trees)}};
  if (selection) {
    json sel_features = json::array();
    for (const auto& e : selection->per_feature)
      sel_features.push_back(json{{"feature", e.feature},
                                  {"tree", e.tree_index},
                                  {"node", e.node_id}});
    out["selection"] = json{{"selected", selection->selected},
                            {"per_feature", std::move(sel_features)},
                            {"subset_size", selection->subset_size()}};
  }
  return out;
}

Forest forest_from_json(const json& j) {
  Forest f;
  f.config = config_from_json(j.at("config"));
  f.num_features = j.at("num_features").get<int>();
  f.num_classes = j.at("num_classes").get<int>();
  for (const auto& jt : j.at("trees"))
    f.trees.push_back(tree_from_json(jt, f.num_classes));
  return f;
}

json selection_to_json(const SelectionResult& sel,
                       const std::vector<std::string>& feature_names) {
  json features = json::array();
  for (const auto& e : sel.per_feature) {
    features.push_back(json{{"index", e.feature},
                            {"name", feature_names[static_cast<std::size_t>(e.feature)]},
                            {"first_tree", e.tree_index},
                            {"first_node", e.node_id}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"kind", "selection"},
              {"config", config_to_json(sel.config)},
              {"subset_size", sel.subset_size()},
              {"selected", std::move(features)}};
}

json importance_to_json(const ImportanceVector& imp,
                        const std::vector<std::string>& feature_names) {
  json features = json::array();
  for (std::size_t i = 0; i < imp.raw.size(); ++i)
    features.push_back(json{{"index", i},
                            {"name", feature_names[i]},
                            {"raw", imp.raw[i]},
                            {"normalized", imp.normalized[i]}});
  return json{{"schema_version", kSchemaVersion},
              {"kind", "importance"},
              {"all_zero", imp.all_zero},
              {"features", std::move(features)}};
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write file: " + path);
  out << j.dump(2) << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw CsvError(path + ": " + e.what());
  }
  return j;
}

}  // namespace grrf
