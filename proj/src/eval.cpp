#include "grrf/eval.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "grrf/errors.hpp"
#include "grrf/parallel.hpp"
#include "grrf/rng.hpp"

namespace grrf {

namespace {

std::string trim_number(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Substream tags for one replicate.
enum : std::uint64_t { kSplitStream = 0, kSelectorStream = 1, kClassifierStream = 2, kPrelimStream = 3 };

ForestConfig make_config(ForestMode mode, const ProtocolConfig& pc,
                         std::uint64_t seed) {
  ForestConfig cfg = ForestConfig::defaults_for(mode);
  cfg.ntree = pc.ntree;
  cfg.mtry = pc.mtry;
  cfg.min_node = pc.min_node;
  cfg.seed = seed;
  cfg.threads = 1;  // parallelism lives at the replicate level
  if (mode != ForestMode::rf) cfg.sample_fraction = pc.subsample_fraction;
  return cfg;
}

std::vector<int> run_selector(const Dataset& d,
                              const std::vector<std::size_t>& train_rows,
                              const SelectorSpec& method,
                              const ProtocolConfig& pc, Rng& replicate_rng) {
  switch (method.kind) {
    case SelectorSpec::Kind::all: {
      std::vector<int> all(d.cols());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      return all;
    }
    case SelectorSpec::Kind::rrf: {
      ForestConfig cfg = make_config(ForestMode::rrf, pc,
                                     replicate_rng.derive(kSelectorStream).seed());
      cfg.lambda = method.lambda;
      return train_rrf(d, train_rows, cfg).second.selected;
    }
    case SelectorSpec::Kind::grrf: {
      ForestConfig prelim = make_config(ForestMode::rf, pc,
                                        replicate_rng.derive(kPrelimStream).seed());
      const ImportanceVector imp = importance(train_rf(d, train_rows, prelim));
      ForestConfig cfg = make_config(ForestMode::grrf, pc,
                                     replicate_rng.derive(kSelectorStream).seed());
      cfg.gamma = method.gamma;
      return train_grrf(d, train_rows, imp, cfg).second.selected;
    }
  }
  return {};
}

void aggregate(RunReport& report) {
  double size_sum = 0.0, err_sum = 0.0;
  int ok = 0;
  for (const auto& rec : report.per_replicate) {
    if (rec.failed) {
      ++report.failed_count;
      continue;
    }
    size_sum += static_cast<double>(rec.subset_size);
    err_sum += rec.error_rate;
    ++ok;
  }
  if (ok == 0) {
    report.mean_size = std::numeric_limits<double>::quiet_NaN();
    report.mean_error = std::numeric_limits<double>::quiet_NaN();
    report.stderr_error = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  report.mean_size = size_sum / ok;
  report.mean_error = err_sum / ok;
  if (ok < 2) {
    report.stderr_error = 0.0;
    return;
  }
  double ss = 0.0;
  for (const auto& rec : report.per_replicate) {
    if (rec.failed) continue;
    const double dev = rec.error_rate - report.mean_error;
    ss += dev * dev;
  }
  report.stderr_error = std::sqrt(ss / (ok - 1)) / std::sqrt(static_cast<double>(ok));
}

}  // namespace

std::string SelectorSpec::label() const {
  switch (kind) {
    case Kind::all: return "all";
    case Kind::rrf: return "rrf(lambda=" + trim_number(lambda) + ")";
    case Kind::grrf: return "grrf(gamma=" + trim_number(gamma) + ")";
  }
  return "all";
}

double SelectorSpec::parameter() const {
  switch (kind) {
    case Kind::all: return std::numeric_limits<double>::quiet_NaN();
    case Kind::rrf: return lambda;
    case Kind::grrf: return gamma;
  }
  return 0.0;
}

RunReport run_protocol(const Dataset& d, const SelectorSpec& method,
                       const ProtocolConfig& pc) {
  if (pc.replicates < 1) throw InvalidParameter("replicates must be >= 1");
  if (method.kind == SelectorSpec::Kind::rrf &&
      (!(method.lambda > 0.0) || method.lambda > 1.0))
    throw InvalidParameter("lambda must be in (0,1]");
  if (method.kind == SelectorSpec::Kind::grrf &&
      (method.gamma < 0.0 || method.gamma > 1.0))
    throw InvalidParameter("gamma must be in [0,1]");
  d.validate();
  // fail fast on degenerate partitions; the parallel loop must not throw
  (void)train_test_split(d, pc.train_fraction, pc.seed);

  RunReport report;
  report.method = method.label();
  report.parameter = method.parameter();
  report.per_replicate.resize(static_cast<std::size_t>(pc.replicates));

  const Rng protocol_rng(pc.seed);
  parallel_for(
      static_cast<std::size_t>(pc.replicates), resolve_threads(pc.threads),
      [&](std::size_t r) {
        // replicate seeds depend only on (pc.seed, r), never on the method
        Rng replicate_rng = protocol_rng.derive(r);
        ReplicateRecord rec;
        rec.replicate = static_cast<int>(r);
        rec.seed = replicate_rng.seed();

        const SplitPlan plan = train_test_split(
            d, pc.train_fraction, replicate_rng.derive(kSplitStream).seed());
        rec.selected = run_selector(d, plan.train_indices, method, pc, replicate_rng);
        rec.subset_size = rec.selected.size();
        if (rec.selected.empty()) {
          rec.failed = true;
          rec.error_rate = std::numeric_limits<double>::quiet_NaN();
        } else {
          const Dataset projected = project(d, rec.selected);
          ForestConfig cls = make_config(
              ForestMode::rf, pc, replicate_rng.derive(kClassifierStream).seed());
          const Forest classifier = train_rf(projected, plan.train_indices, cls);
          rec.error_rate = forest_error_rate(classifier, projected, plan.test_indices);
        }
        report.per_replicate[r] = std::move(rec);
      });

  aggregate(report);
  return report;
}

GroupMetrics friedman_group_metrics(const std::vector<int>& selected) {
  std::unordered_set<int> seen;
  for (int idx : selected) {
    if (idx < 0 || idx > 14)
      throw InvalidParameter("feature index outside the Friedman layout: " +
                             std::to_string(idx));
    if (!seen.insert(idx).second)
      throw InvalidParameter("duplicate feature index: " + std::to_string(idx));
  }
  GroupMetrics m;
  for (int g = 0; g < 5; ++g) {
    const int members = static_cast<int>(seen.count(g)) + static_cast<int>(seen.count(g + 10));
    if (members >= 1) ++m.groups_identified;
    m.irrelevant_or_redundant += std::max(0, members - 1);
  }
  for (int f = 5; f <= 9; ++f) m.irrelevant_or_redundant += static_cast<int>(seen.count(f));
  return m;
}

std::vector<RunReport> sensitivity_sweep(const Dataset& d,
                                         SelectorSpec::Kind kind,
                                         const std::vector<double>& grid,
                                         const ProtocolConfig& pc) {
  if (grid.empty()) throw InvalidParameter("parameter grid is empty");
  if (kind == SelectorSpec::Kind::all)
    throw InvalidParameter("sweep requires rrf or grrf");
  std::vector<RunReport> reports;
  reports.reserve(grid.size());
  for (double value : grid) {
    SelectorSpec spec;
    spec.kind = kind;
    if (kind == SelectorSpec::Kind::rrf) spec.lambda = value;
    else spec.gamma = value;
    reports.push_back(run_protocol(d, spec, pc));
  }
  return reports;
}

void write_report_csv(std::ostream& out, const std::vector<RunReport>& reports) {
  out << "# irrelevant_or_redundant (Friedman layout) = |selected inside {X6..X10}|"
         " + sum over groups {Xi,Xi+10} of max(0, members_selected - 1)\n";
  out << "# failed replicates (empty subsets) carry error_rate=NA and are"
         " excluded from the mean rows\n";
  out << "method,parameter,replicate,seed,subset_size,error_rate\n";
  const auto param_str = [](double p) {
    return std::isnan(p) ? std::string("") : trim_number(p);
  };
  for (const auto& rep : reports) {
    for (const auto& rec : rep.per_replicate) {
      out << rep.method << ',' << param_str(rep.parameter) << ','
          << rec.replicate << ',' << rec.seed << ',' << rec.subset_size << ','
          << (rec.failed ? "NA" : trim_number(rec.error_rate)) << '\n';
    }
  }
  for (const auto& rep : reports) {
    out << rep.method << ',' << param_str(rep.parameter) << ",mean,,"
        << (std::isnan(rep.mean_size) ? "NA" : trim_number(rep.mean_size)) << ','
        << (std::isnan(rep.mean_error) ? "NA" : trim_number(rep.mean_error)) << '\n';
  }
}

nlohmann::json report_summary_json(const std::vector<RunReport>& reports) {
  nlohmann::json methods = nlohmann::json::array();
  for (const auto& rep : reports) {
    nlohmann::json j{{"method", rep.method},
                     {"replicates", rep.per_replicate.size()},
                     {"failed", rep.failed_count}};
    if (std::isnan(rep.parameter)) j["parameter"] = nullptr;
    else j["parameter"] = rep.parameter;
    if (std::isnan(rep.mean_size)) {
      j["mean_size"] = nullptr;
      j["mean_error"] = nullptr;
      j["stderr_error"] = nullptr;
    } else {
      j["mean_size"] = rep.mean_size;
      j["mean_error"] = rep.mean_error;
      j["stderr_error"] = rep.stderr_error;
    }
    methods.push_back(std::move(j));
  }
  return nlohmann::json{{"schema_version", 1},
                        {"kind", "report_summary"},
                        {"methods", std::move(methods)}};
}

}  // namespace grrf
