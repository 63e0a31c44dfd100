#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "grrf/dataset.hpp"
#include "grrf/forest.hpp"

namespace grrf {

// Which selector a protocol run evaluates. "all" keeps every feature and
// measures the classifier baseline.
struct SelectorSpec {
  enum class Kind { all, rrf, grrf };
  Kind kind = Kind::all;
  double lambda = 1.0;  // rrf
  double gamma = 0.0;   // grrf

  std::string label() const;
  double parameter() const;  // lambda or gamma; NaN for "all"
};

struct ProtocolConfig {
  int replicates = 100;
  std::uint64_t seed = 42;
  double train_fraction = 2.0 / 3.0;
  int ntree = 1000;  // selector, preliminary RF, and classifier
  int mtry = 0;
  double subsample_fraction = 0.63;  // rrf/grrf subsampling
  int min_node = 2;
  int threads = 0;  // parallelism across replicates
};

struct ReplicateRecord {
  int replicate = 0;
  std::uint64_t seed = 0;
  std::vector<int> selected;
  std::size_t subset_size = 0;
  double error_rate = 0.0;
  bool failed = false;  // selector returned an empty subset
};

struct RunReport {
  std::string method;
  double parameter = 0.0;
  std::vector<ReplicateRecord> per_replicate;
  double mean_size = 0.0;
  double mean_error = 0.0;
  double stderr_error = 0.0;  // sample std / sqrt(successful replicates)
  int failed_count = 0;
};

struct GroupMetrics {
  int groups_identified = 0;        // 0..5
  int irrelevant_or_redundant = 0;  // >= 0
};

// One replicate: split 2/3-1/3, run the selector on the train rows only,
// project, fit an RF on the projected train rows, score on the test rows.
// Failed replicates (empty subsets) are excluded from the means and
// counted. Per-replicate seeds depend only on (seed, replicate), so runs
// with different selectors share their splits and selector streams.
RunReport run_protocol(const Dataset& d, const SelectorSpec& method,
                       const ProtocolConfig& pc);

// Friedman layout metrics. Groups are {X_i, X_{i+10}} for i = 1..5
// (0-based: {i, i+10} for i = 0..4); irrelevant_or_redundant counts
// selections from {X6..X10} plus extra members inside a group.
GroupMetrics friedman_group_metrics(const std::vector<int>& selected);

// One RunReport per grid value, all under the same protocol seeds.
std::vector<RunReport> sensitivity_sweep(const Dataset& d,
                                         SelectorSpec::Kind kind,
                                         const std::vector<double>& grid,
                                         const ProtocolConfig& pc);

// Replicate rows (method,parameter,replicate,seed,subset_size,error_rate)
// followed by one mean row per report; byte-identical across runs with the
// same seed.
void write_report_csv(std::ostream& out, const std::vector<RunReport>& reports);

nlohmann::json report_summary_json(const std::vector<RunReport>& reports);

}  // namespace grrf
