#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "grrf/dataset.hpp"
#include "grrf/tree.hpp"

namespace grrf {

enum class ForestMode { rf, rrf, grrf };
enum class SampleMode { bootstrap, without_replacement };

struct ForestConfig {
  int ntree = 1000;
  int mtry = 0;  // 0 resolves to ceil(sqrt(P))
  ForestMode mode = ForestMode::rf;
  SampleMode sample_mode = SampleMode::bootstrap;
  double sample_fraction = 1.0;  // 0.63 without replacement for rrf/grrf
  double lambda = 1.0;           // rrf penalty coefficient, in (0,1]
  double gamma = 0.0;            // grrf importance coefficient, in [0,1]
  double lambda0 = 1.0;          // grrf base coefficient, fixed to 1
  int min_node = 2;
  std::uint64_t seed = 42;
  int threads = 0;  // rf training only; 0 = all hardware threads

  // Fills mode-dependent defaults (sampling scheme) and checks ranges.
  static ForestConfig defaults_for(ForestMode mode);
  void validate() const;
};

struct Forest {
  std::vector<Tree> trees;
  ForestConfig config;
  int num_features = 0;
  int num_classes = 0;
};

// Eq.-style mean-decrease-impurity scores: raw[i] is the sum of raw gains
// over all nodes split by feature i, divided by ntree; normalized[i] divides
// by the maximum raw score. all_zero marks forests with no split at all.
struct ImportanceVector {
  std::vector<double> raw;
  std::vector<double> normalized;
  bool all_zero = false;
};

struct SelectionResult {
  std::vector<int> selected;                // order of first entry into F
  std::vector<SelectionEntry> per_feature;  // first tree/node per feature
  ForestConfig config;
  std::size_t subset_size() const { return selected.size(); }
};

// Ordinary random forest: ntree independent trees, each on a bootstrap
// sample of rows (all rows when omitted), plain gain over a fresh random
// mtry-subset per node. Per-tree RNG streams derive from config.seed, so
// the result is independent of build order and thread count.
Forest train_rf(const Dataset& d, const std::vector<std::size_t>& rows,
                const ForestConfig& config);
Forest train_rf(const Dataset& d, const ForestConfig& config);

// Replay hook used by tests: tree t consumes the stream seeded by
// stream_seeds[t] instead of the default derivation.
Forest train_rf_with_streams(const Dataset& d,
                             const std::vector<std::size_t>& rows,
                             const ForestConfig& config,
                             const std::vector<std::uint64_t>& stream_seeds);

// Regularized random forest: trees built strictly sequentially sharing one
// feature set F (empty at the root of tree 1), each on a fresh
// sample_fraction subsample without replacement, with constant penalty
// lambda on features outside F. lambda = 1 yields the least regularized
// subset.
std::pair<Forest, SelectionResult> train_rrf(const Dataset& d,
                                             const std::vector<std::size_t>& rows,
                                             const ForestConfig& config);
std::pair<Forest, SelectionResult> train_rrf(const Dataset& d,
                                             const ForestConfig& config);

// Per-feature coefficients lambda_i = (1-gamma)*lambda0 + gamma*imp_i'.
// With lambda0 = 1 this is 1 - gamma*(1 - imp_i').
std::vector<double> guided_penalties(const ImportanceVector& imp, double gamma,
                                     double lambda0 = 1.0);

// Guided RRF: identical to train_rrf except that each feature carries its
// own penalty derived from a preliminary forest's normalized importance.
// With gamma = 0 every penalty is 1, so the result matches train_rrf with
// lambda = 1 under the same seed, stream for stream.
std::pair<Forest, SelectionResult> train_grrf(const Dataset& d,
                                              const std::vector<std::size_t>& rows,
                                              const ImportanceVector& pre_imp,
                                              const ForestConfig& config);
std::pair<Forest, SelectionResult> train_grrf(const Dataset& d,
                                              const ImportanceVector& pre_imp,
                                              const ForestConfig& config);

ImportanceVector importance(const Forest& f);

// Unweighted majority vote; ties go to the smallest class index.
int predict_forest(const Forest& f, const std::vector<double>& row);

// Misclassification rate of the forest over the given rows of d.
double forest_error_rate(const Forest& f, const Dataset& d,
                         const std::vector<std::size_t>& rows);

std::string to_string(ForestMode m);

}  // namespace grrf
