#include "grrf/forest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "grrf/errors.hpp"
#include "grrf/parallel.hpp"

namespace grrf {

ForestConfig ForestConfig::defaults_for(ForestMode m) {
  ForestConfig c;
  c.mode = m;
  if (m == ForestMode::rf) {
    c.sample_mode = SampleMode::bootstrap;
    c.sample_fraction = 1.0;
  } else {
    c.sample_mode = SampleMode::without_replacement;
    c.sample_fraction = 0.63;
  }
  return c;
}

void ForestConfig::validate() const {
  if (ntree < 1) throw InvalidParameter("ntree must be >= 1");
  if (min_node < 2) throw InvalidParameter("min_node must be >= 2");
  if (!(sample_fraction > 0.0) || sample_fraction > 1.0)
    throw InvalidParameter("sample fraction must be in (0,1]");
  if (mode == ForestMode::rrf && (!(lambda > 0.0) || lambda > 1.0))
    throw InvalidParameter("lambda must be in (0,1]");
  if (mode == ForestMode::grrf) {
    if (gamma < 0.0 || gamma > 1.0)
      throw InvalidParameter("gamma must be in [0,1]");
    if (!(lambda0 > 0.0) || lambda0 > 1.0)
      throw InvalidParameter("lambda0 must be in (0,1]");
  }
}

namespace {

std::vector<std::size_t> all_rows(const Dataset& d) {
  std::vector<std::size_t> rows(d.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

std::vector<std::size_t> draw_training_rows(const std::vector<std::size_t>& rows,
                                            const ForestConfig& cfg, Rng& rng) {
  const bool replacement = cfg.sample_mode == SampleMode::bootstrap;
  auto positions = sample_positions(rows.size(), cfg.sample_fraction, replacement, rng);
  std::vector<std::size_t> out;
  out.reserve(positions.size());
  for (std::size_t p : positions) out.push_back(rows[p]);
  return out;
}

Tree build_rf_tree(const Dataset& d, const std::vector<std::size_t>& rows,
                   const ForestConfig& cfg, std::uint64_t stream_seed) {
  Rng rng(stream_seed);
  auto sample = draw_training_rows(rows, cfg, rng);
  GrowthConfig gc;
  gc.mtry = cfg.mtry;
  gc.min_node = cfg.min_node;
  gc.criterion_mode = CriterionMode::plain;
  return grow_tree(d, sample, nullptr, gc, rng);
}

}  // namespace

Forest train_rf_with_streams(const Dataset& d,
                             const std::vector<std::size_t>& rows,
                             const ForestConfig& config,
                             const std::vector<std::uint64_t>& stream_seeds) {
  config.validate();
  d.validate();
  if (stream_seeds.size() != static_cast<std::size_t>(config.ntree))
    throw InvalidParameter("stream_seeds size must equal ntree");

  Forest f;
  f.config = config;
  f.num_features = static_cast<int>(d.cols());
  f.num_classes = d.num_classes();
  f.trees.resize(static_cast<std::size_t>(config.ntree));

  parallel_for(static_cast<std::size_t>(config.ntree), resolve_threads(config.threads),
               [&](std::size_t t) {
                 f.trees[t] = build_rf_tree(d, rows, config, stream_seeds[t]);
               });
  return f;
}

Forest train_rf(const Dataset& d, const std::vector<std::size_t>& rows,
                const ForestConfig& config) {
  if (config.mode != ForestMode::rf)
    throw InvalidParameter("train_rf requires mode=rf");
  Rng root(config.seed);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(config.ntree));
  for (int t = 0; t < config.ntree; ++t)
    seeds[static_cast<std::size_t>(t)] = root.derive(static_cast<std::uint64_t>(t)).seed();
  return train_rf_with_streams(d, rows, config, seeds);
}

Forest train_rf(const Dataset& d, const ForestConfig& config) {
  return train_rf(d, all_rows(d), config);
}

namespace {

// Shared by rrf and grrf; the two differ only in the penalty vector, so
// equal penalties imply identical forests stream for stream.
std::pair<Forest, SelectionResult> train_regularized(
    const Dataset& d, const std::vector<std::size_t>& rows,
    const std::vector<double>& penalties, const ForestConfig& config) {
  config.validate();
  d.validate();
  if (penalties.size() != d.cols())
    throw InvalidParameter("penalty vector size must equal feature count");

  Forest f;
  f.config = config;
  f.num_features = static_cast<int>(d.cols());
  f.num_classes = d.num_classes();
  f.trees.reserve(static_cast<std::size_t>(config.ntree));

  GrowthConfig gc;
  gc.mtry = config.mtry;
  gc.min_node = config.min_node;
  gc.criterion_mode = CriterionMode::regularized;
  gc.penalties = penalties;

  SelectedSet F(d.cols());
  Rng root(config.seed);
  for (int t = 0; t < config.ntree; ++t) {
    Rng rng = root.derive(static_cast<std::uint64_t>(t));
    auto sample = draw_training_rows(rows, config, rng);
    f.trees.push_back(grow_tree(d, sample, &F, gc, rng, t));
  }

  SelectionResult sel;
  sel.config = config;
  sel.per_feature = F.entries();
  sel.selected.reserve(F.size());
  for (const auto& e : F.entries()) sel.selected.push_back(e.feature);
  return {std::move(f), std::move(sel)};
}

}  // namespace

std::pair<Forest, SelectionResult> train_rrf(const Dataset& d,
                                             const std::vector<std::size_t>& rows,
                                             const ForestConfig& config) {
  if (config.mode != ForestMode::rrf)
    throw InvalidParameter("train_rrf requires mode=rrf");
  config.validate();
  std::vector<double> penalties(d.cols(), config.lambda);
  return train_regularized(d, rows, penalties, config);
}

std::pair<Forest, SelectionResult> train_rrf(const Dataset& d,
                                             const ForestConfig& config) {
  return train_rrf(d, all_rows(d), config);
}

std::vector<double> guided_penalties(const ImportanceVector& imp, double gamma,
                                     double lambda0) {
  std::vector<double> out(imp.normalized.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = (1.0 - gamma) * lambda0 + gamma * imp.normalized[i];
  return out;
}

std::pair<Forest, SelectionResult> train_grrf(const Dataset& d,
                                              const std::vector<std::size_t>& rows,
                                              const ImportanceVector& pre_imp,
                                              const ForestConfig& config) {
  if (config.mode != ForestMode::grrf)
    throw InvalidParameter("train_grrf requires mode=grrf");
  config.validate();
  if (pre_imp.normalized.size() != d.cols())
    throw InvalidParameter("importance vector size must equal feature count");
  auto penalties = guided_penalties(pre_imp, config.gamma, config.lambda0);
  return train_regularized(d, rows, penalties, config);
}

std::pair<Forest, SelectionResult> train_grrf(const Dataset& d,
                                              const ImportanceVector& pre_imp,
                                              const ForestConfig& config) {
  return train_grrf(d, all_rows(d), pre_imp, config);
}

ImportanceVector importance(const Forest& f) {
  ImportanceVector imp;
  imp.raw.assign(static_cast<std::size_t>(f.num_features), 0.0);
  for (const Tree& t : f.trees)
    for (const TreeNode& node : t.nodes)
      if (node.kind == TreeNode::Kind::internal)
        imp.raw[static_cast<std::size_t>(node.feature)] += node.split_gain;
  const double ntree = static_cast<double>(f.trees.size());
  for (double& v : imp.raw) v /= ntree;

  const double max_raw = imp.raw.empty()
                             ? 0.0
                             : *std::max_element(imp.raw.begin(), imp.raw.end());
  imp.normalized.assign(imp.raw.size(), 0.0);
  if (max_raw > 0.0) {
    for (std::size_t i = 0; i < imp.raw.size(); ++i)
      imp.normalized[i] = imp.raw[i] / max_raw;
  } else {
    imp.all_zero = true;
  }
  return imp;
}

int predict_forest(const Forest& f, const std::vector<double>& row) {
  std::vector<int> votes(static_cast<std::size_t>(f.num_classes), 0);
  for (const Tree& t : f.trees) ++votes[static_cast<std::size_t>(predict_tree(t, row))];
  int best = 0;
  for (std::size_t c = 1; c < votes.size(); ++c)
    if (votes[c] > votes[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  return best;
}

double forest_error_rate(const Forest& f, const Dataset& d,
                         const std::vector<std::size_t>& rows) {
  if (rows.empty()) throw InvalidParameter("forest_error_rate: empty row set");
  std::size_t wrong = 0;
  for (std::size_t r : rows)
    if (predict_forest(f, d.row_values(r)) != d.label(r)) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(rows.size());
}

std::string to_string(ForestMode m) {
  switch (m) {
    case ForestMode::rf: return "rf";
    case ForestMode::rrf: return "rrf";
    case ForestMode::grrf: return "grrf";
  }
  return "rf";
}

}  // namespace grrf
