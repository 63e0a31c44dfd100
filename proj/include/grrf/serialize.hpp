#pragma once

#include <string>

#include <json.hpp>

#include "grrf/dataset.hpp"
#include "grrf/forest.hpp"

namespace grrf {

inline constexpr int kSchemaVersion = 1;

nlohmann::json split_plan_to_json(const SplitPlan& plan);
SplitPlan split_plan_from_json(const nlohmann::json& j);

nlohmann::json config_to_json(const ForestConfig& cfg);
ForestConfig config_from_json(const nlohmann::json& j);

nlohmann::json tree_to_json(const Tree& t);
Tree tree_from_json(const nlohmann::json& j, int num_classes);

// Single document with the full config and seed, enough to replay a run.
// The selection block is present for rrf/grrf forests.
nlohmann::json forest_to_json(const Forest& f,
                              const SelectionResult* selection = nullptr);
Forest forest_from_json(const nlohmann::json& j);

nlohmann::json selection_to_json(const SelectionResult& sel,
                                 const std::vector<std::string>& feature_names);

nlohmann::json importance_to_json(const ImportanceVector& imp,
                                  const std::vector<std::string>& feature_names);

void write_json_file(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

}  // namespace grrf
