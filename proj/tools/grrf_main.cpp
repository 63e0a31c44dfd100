// Command-line surface for the feature-selection engine: dataset synthesis,
// RRF/GRRF subset selection, RF importance, the evaluation protocol,
// parameter sweeps, and the exhaustive gain-count verifier.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grrf/bound.hpp"
#include "grrf/dataset.hpp"
#include "grrf/errors.hpp"
#include "grrf/eval.hpp"
#include "grrf/forest.hpp"
#include "grrf/parallel.hpp"
#include "grrf/serialize.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;    // a verification reported FAIL
constexpr int kExitParse = 2;   // flag or input parsing problems
constexpr int kExitRange = 3;   // parameter outside its documented range

struct DataArgs {
  std::string input;
  std::string label = "y";
  bool no_header = false;
};

void add_data_options(CLI::App* cmd, DataArgs& args) {
  cmd->add_option("--input", args.input, "input CSV file")->required();
  cmd->add_option("--label", args.label,
                  "label column, a header name or 0-based index")
      ->capture_default_str();
  cmd->add_flag("--no-header", args.no_header,
                "treat the first line as data, not a header");
}

struct ForestArgs {
  int ntree = 1000;
  int mtry = 0;
  double subsample = 0.63;
  int min_node = 2;
  std::uint64_t seed = 42;
  int threads = 0;
  CLI::Option* seed_opt = nullptr;
};

void add_forest_options(CLI::App* cmd, ForestArgs& args, bool with_subsample) {
  cmd->add_option("--ntree", args.ntree, "number of trees, >= 1")
      ->capture_default_str();
  cmd->add_option("--mtry", args.mtry,
                  "features examined per node; 0 = ceil(sqrt(P))")
      ->capture_default_str();
  if (with_subsample)
    cmd->add_option("--subsample", args.subsample,
                    "rrf/grrf per-tree sample fraction, in (0,1]")
        ->capture_default_str();
  cmd->add_option("--min-node", args.min_node, "minimum rows to split, >= 2")
      ->capture_default_str();
  args.seed_opt = cmd->add_option("--seed", args.seed,
                                  "RNG seed (env GRRF_SEED when not given)")
                      ->capture_default_str();
  cmd->add_option("--threads", args.threads,
                  "worker threads; 0 = all hardware threads")
      ->capture_default_str();
}

std::uint64_t resolve_seed(const ForestArgs& args) {
  if (args.seed_opt != nullptr && args.seed_opt->count() > 0) return args.seed;
  if (const char* env = std::getenv("GRRF_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw grrf::CsvError("GRRF_SEED is not a valid integer: " + std::string(env));
    }
  }
  return args.seed;
}

void check_range(bool ok, const std::string& message) {
  if (!ok) throw grrf::InvalidParameter(message);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
  if (path.empty()) return std::cout;
  file.open(path);
  if (!file) throw grrf::CsvError("cannot write file: " + path);
  return file;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> grid;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(tok, &pos);
      if (pos != tok.size()) throw std::invalid_argument(tok);
      grid.push_back(v);
    } catch (const std::exception&) {
      throw grrf::CsvError("grid value is not a number: '" + tok + "'");
    }
  }
  if (grid.empty()) throw grrf::CsvError("empty parameter grid");
  return grid;
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs {
  std::size_t n = 0;
  ForestArgs forest;  // only seed is used
  std::string out;
};

int cmd_synth(const SynthArgs& a) {
  check_range(a.n >= 2, "--n must be >= 2");
  const grrf::Dataset d = grrf::generate_friedman(a.n, resolve_seed(a.forest));
  if (a.out.empty()) {
    grrf::write_csv(d, std::cout);
  } else {
    grrf::write_csv(d, a.out);
    std::cout << "wrote " << d.rows() << " rows x " << d.cols()
              << " features to " << a.out << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// select

struct SelectArgs {
  DataArgs data;
  ForestArgs forest;
  bool use_rrf = false;
  bool use_grrf = false;
  double lambda = 1.0;
  double gamma = -1.0;
  std::string out;
};

int cmd_select(const SelectArgs& a) {
  if (!a.use_rrf && !a.use_grrf) {
    std::cerr << "select: one of --rrf or --grrf is required\n";
    return kExitParse;
  }
  const std::uint64_t seed = resolve_seed(a.forest);
  check_range(a.forest.ntree >= 1, "--ntree must be >= 1");
  check_range(a.forest.subsample > 0.0 && a.forest.subsample <= 1.0,
              "--subsample must be in (0,1]");

  const grrf::Dataset d = grrf::load_csv(a.data.input, a.data.label, !a.data.no_header);

  grrf::ForestConfig cfg = grrf::ForestConfig::defaults_for(
      a.use_rrf ? grrf::ForestMode::rrf : grrf::ForestMode::grrf);
  cfg.ntree = a.forest.ntree;
  cfg.mtry = a.forest.mtry;
  cfg.sample_fraction = a.forest.subsample;
  cfg.min_node = a.forest.min_node;
  cfg.seed = seed;

  grrf::SelectionResult result;
  if (a.use_rrf) {
    check_range(a.lambda > 0.0 && a.lambda <= 1.0, "--lambda must be in (0,1]");
    cfg.lambda = a.lambda;
    result = grrf::train_rrf(d, cfg).second;
  } else {
    check_range(a.gamma >= 0.0 && a.gamma <= 1.0, "--gamma must be in [0,1]");
    cfg.gamma = a.gamma;
    // preliminary ordinary RF provides the guiding importance scores
    grrf::ForestConfig prelim = grrf::ForestConfig::defaults_for(grrf::ForestMode::rf);
    prelim.ntree = a.forest.ntree;
    prelim.mtry = a.forest.mtry;
    prelim.min_node = a.forest.min_node;
    prelim.threads = a.forest.threads;
    prelim.seed = grrf::Rng(seed).derive(1).seed();
    const grrf::ImportanceVector imp = grrf::importance(grrf::train_rf(d, prelim));
    result = grrf::train_grrf(d, imp, cfg).second;
  }

  std::cout << "selected " << result.subset_size() << " of " << d.cols()
            << " features (" << grrf::to_string(cfg.mode) << ", seed=" << seed
            << "):\n";
  for (int idx : result.selected)
    std::cout << "  " << d.feature_names[static_cast<std::size_t>(idx)] << '\n';

  const nlohmann::json j = grrf::selection_to_json(result, d.feature_names);
  if (a.out.empty()) std::cout << j.dump(2) << '\n';
  else grrf::write_json_file(j, a.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// importance

struct ImportanceArgs {
  DataArgs data;
  ForestArgs forest;
  std::string out;
};

int cmd_importance(const ImportanceArgs& a) {
  const std::uint64_t seed = resolve_seed(a.forest);
  check_range(a.forest.ntree >= 1, "--ntree must be >= 1");
  const grrf::Dataset d = grrf::load_csv(a.data.input, a.data.label, !a.data.no_header);

  grrf::ForestConfig cfg = grrf::ForestConfig::defaults_for(grrf::ForestMode::rf);
  cfg.ntree = a.forest.ntree;
  cfg.mtry = a.forest.mtry;
  cfg.min_node = a.forest.min_node;
  cfg.threads = a.forest.threads;
  cfg.seed = seed;

  const grrf::ImportanceVector imp = grrf::importance(grrf::train_rf(d, cfg));

  std::vector<std::size_t> order(imp.raw.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (imp.raw[x] != imp.raw[y]) return imp.raw[x] > imp.raw[y];
    return x < y;
  });
  std::cout << "feature,raw,normalized\n";
  for (std::size_t i : order)
    std::cout << d.feature_names[i] << ',' << imp.raw[i] << ','
              << imp.normalized[i] << '\n';
  if (imp.all_zero)
    std::cout << "# no split occurred anywhere; normalized scores undefined\n";

  if (!a.out.empty())
    grrf::write_json_file(grrf::importance_to_json(imp, d.feature_names), a.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  DataArgs data;
  ForestArgs forest;
  bool use_all = false;
  bool use_rrf = false;
  bool use_grrf = false;
  double lambda = 1.0;
  double gamma = -1.0;
  int replicates = 100;
  double train_fraction = 2.0 / 3.0;
  bool friedman_groups = false;
  std::string out_csv;
  std::string out_json;
};

grrf::ProtocolConfig protocol_config(const ForestArgs& f, int replicates,
                                     double train_fraction) {
  grrf::ProtocolConfig pc;
  pc.replicates = replicates;
  pc.seed = resolve_seed(f);
  pc.train_fraction = train_fraction;
  pc.ntree = f.ntree;
  pc.mtry = f.mtry;
  pc.subsample_fraction = f.subsample;
  pc.min_node = f.min_node;
  pc.threads = f.threads;
  return pc;
}

int cmd_eval(const EvalArgs& a) {
  if (!a.use_all && !a.use_rrf && !a.use_grrf) {
    std::cerr << "eval: one of --all, --rrf or --grrf is required\n";
    return kExitParse;
  }
  check_range(a.replicates >= 1, "--replicates must be >= 1");
  check_range(a.train_fraction > 0.0 && a.train_fraction < 1.0,
              "--train-fraction must be in (0,1)");
  check_range(a.forest.ntree >= 1, "--ntree must be >= 1");
  check_range(a.forest.subsample > 0.0 && a.forest.subsample <= 1.0,
              "--subsample must be in (0,1]");

  const grrf::Dataset d = grrf::load_csv(a.data.input, a.data.label, !a.data.no_header);
  if (a.friedman_groups && d.cols() != 15)
    throw grrf::InvalidParameter(
        "--friedman-groups needs the 15-feature Friedman layout");

  grrf::SelectorSpec spec;
  if (a.use_all) spec.kind = grrf::SelectorSpec::Kind::all;
  if (a.use_rrf) {
    check_range(a.lambda > 0.0 && a.lambda <= 1.0, "--lambda must be in (0,1]");
    spec.kind = grrf::SelectorSpec::Kind::rrf;
    spec.lambda = a.lambda;
  }
  if (a.use_grrf) {
    check_range(a.gamma >= 0.0 && a.gamma <= 1.0, "--gamma must be in [0,1]");
    spec.kind = grrf::SelectorSpec::Kind::grrf;
    spec.gamma = a.gamma;
  }

  const grrf::ProtocolConfig pc = protocol_config(a.forest, a.replicates, a.train_fraction);
  const grrf::RunReport report = grrf::run_protocol(d, spec, pc);
  const std::vector<grrf::RunReport> reports{report};

  std::ofstream file;
  grrf::write_report_csv(open_output(file, a.out_csv), reports);

  nlohmann::json summary = grrf::report_summary_json(reports);
  if (a.friedman_groups) {
    double sum_groups = 0.0, sum_irr = 0.0;
    int ok = 0;
    for (const auto& rec : report.per_replicate) {
      if (rec.failed) continue;
      const grrf::GroupMetrics m = grrf::friedman_group_metrics(rec.selected);
      sum_groups += m.groups_identified;
      sum_irr += m.irrelevant_or_redundant;
      ++ok;
    }
    if (ok > 0) {
      summary["friedman"] = {{"mean_groups_identified", sum_groups / ok},
                             {"mean_irrelevant_or_redundant", sum_irr / ok}};
    }
  }
  if (!a.out_json.empty()) grrf::write_json_file(summary, a.out_json);
  else if (!a.out_csv.empty()) std::cout << summary.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  DataArgs data;
  ForestArgs forest;
  bool use_rrf = false;
  bool use_grrf = false;
  std::string grid_spec;
  int replicates = 20;
  double train_fraction = 2.0 / 3.0;
  std::string out;
  std::string out_json;
};

int cmd_sweep(const SweepArgs& a) {
  if (!a.use_rrf && !a.use_grrf) {
    std::cerr << "sweep: one of --rrf or --grrf is required\n";
    return kExitParse;
  }
  check_range(a.replicates >= 1, "--replicates must be >= 1");
  const std::vector<double> grid = parse_grid(a.grid_spec);
  for (double v : grid) {
    if (a.use_rrf)
      check_range(v > 0.0 && v <= 1.0, "--grid lambda values must be in (0,1]");
    else
      check_range(v >= 0.0 && v <= 1.0, "--grid gamma values must be in [0,1]");
  }

  const grrf::Dataset d = grrf::load_csv(a.data.input, a.data.label, !a.data.no_header);
  const grrf::ProtocolConfig pc = protocol_config(a.forest, a.replicates, a.train_fraction);
  const auto kind = a.use_rrf ? grrf::SelectorSpec::Kind::rrf
                              : grrf::SelectorSpec::Kind::grrf;
  const std::vector<grrf::RunReport> reports = grrf::sensitivity_sweep(d, kind, grid, pc);

  std::ofstream file;
  grrf::write_report_csv(open_output(file, a.out), reports);
  if (!a.out_json.empty())
    grrf::write_json_file(grrf::report_summary_json(reports), a.out_json);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify-bound

struct VerifyBoundArgs {
  std::int64_t n = 0;
  std::int64_t max_n = 0;
  bool use_float = false;
  std::string out;
};

int cmd_verify_bound(const VerifyBoundArgs& a) {
  check_range(a.n >= 2 || a.max_n >= 2, "--n (or --max-n) must be >= 2");
  std::int64_t lo = a.n >= 2 ? a.n : 2;
  std::int64_t hi = a.n >= 2 ? a.n : a.max_n;
  if (a.max_n >= 2) hi = a.max_n;

  std::ofstream file;
  std::ostream& out = open_output(file, a.out);
  out << "n,bound,max_distinct,result\n";
  bool all_pass = true;
  for (std::int64_t n = lo; n <= hi; ++n) {
    const std::int64_t bound = grrf::theorem_bound(n);
    std::size_t max_count = 0;
    for (std::int64_t n1 = 0; n1 <= n; ++n1) {
      const auto e = grrf::enumerate_distinct({n, n1, n - n1}, !a.use_float);
      max_count = std::max(max_count, e.count);
    }
    const bool pass = static_cast<std::int64_t>(max_count) <= bound;
    all_pass = all_pass && pass;
    out << n << ',' << bound << ',' << max_count << ','
        << (pass ? "PASS" : "FAIL") << '\n';
  }
  return all_pass ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regularized random forest feature selection", "grrf"};
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* c_synth = app.add_subcommand(
      "synth", "generate the Friedman simulation dataset as CSV");
  c_synth->add_option("--n", synth.n, "number of instances, >= 2")->required();
  synth.forest.seed_opt =
      c_synth->add_option("--seed", synth.forest.seed,
                          "RNG seed (env GRRF_SEED when not given)")
          ->capture_default_str();
  c_synth->add_option("--out", synth.out, "output CSV path (default stdout)");

  SelectArgs select;
  CLI::App* c_select = app.add_subcommand(
      "select", "select a feature subset with RRF or GRRF");
  add_data_options(c_select, select.data);
  auto* rrf_flag = c_select->add_flag("--rrf", select.use_rrf,
                                      "regularized mode with a constant penalty");
  c_select->add_flag("--grrf", select.use_grrf,
                     "importance-guided mode with per-feature penalties")
      ->excludes(rrf_flag);
  c_select->add_option("--lambda", select.lambda,
                       "rrf penalty coefficient, in (0,1]")
      ->capture_default_str();
  c_select->add_option("--gamma", select.gamma,
                       "grrf importance coefficient, in [0,1]");
  add_forest_options(c_select, select.forest, true);
  c_select->add_option("--out", select.out,
                       "selection JSON path (default stdout)");

  ImportanceArgs imp;
  CLI::App* c_importance = app.add_subcommand(
      "importance", "train an ordinary RF and report importance scores");
  add_data_options(c_importance, imp.data);
  add_forest_options(c_importance, imp.forest, false);
  c_importance->add_option("--out", imp.out, "importance JSON path");

  EvalArgs eval;
  CLI::App* c_eval = app.add_subcommand(
      "eval", "repeated 2/3-1/3 split evaluation of a selector");
  add_data_options(c_eval, eval.data);
  auto* eval_all = c_eval->add_flag("--all", eval.use_all,
                                    "baseline: keep all features");
  auto* eval_rrf = c_eval->add_flag("--rrf", eval.use_rrf, "evaluate RRF")
                       ->excludes(eval_all);
  c_eval->add_flag("--grrf", eval.use_grrf, "evaluate GRRF")
      ->excludes(eval_all)
      ->excludes(eval_rrf);
  c_eval->add_option("--lambda", eval.lambda, "rrf penalty coefficient, in (0,1]")
      ->capture_default_str();
  c_eval->add_option("--gamma", eval.gamma, "grrf importance coefficient, in [0,1]");
  c_eval->add_option("--replicates", eval.replicates, "number of replicates, >= 1")
      ->capture_default_str();
  c_eval->add_option("--train-fraction", eval.train_fraction,
                     "train split fraction, in (0,1)")
      ->capture_default_str();
  c_eval->add_flag("--friedman-groups", eval.friedman_groups,
                   "also report Friedman group-recovery metrics (needs P=15)");
  add_forest_options(c_eval, eval.forest, true);
  c_eval->add_option("--out-csv", eval.out_csv, "report CSV path (default stdout)");
  c_eval->add_option("--out-json", eval.out_json, "summary JSON path");

  SweepArgs sweep;
  CLI::App* c_sweep = app.add_subcommand(
      "sweep", "evaluate a selector over a parameter grid");
  add_data_options(c_sweep, sweep.data);
  auto* sweep_rrf = c_sweep->add_flag("--rrf", sweep.use_rrf, "sweep lambda");
  c_sweep->add_flag("--grrf", sweep.use_grrf, "sweep gamma")->excludes(sweep_rrf);
  c_sweep->add_option("--grid", sweep.grid_spec,
                      "comma-separated parameter values, e.g. 0.9,0.5,0.1")
      ->required();
  c_sweep->add_option("--replicates", sweep.replicates, "replicates per grid point")
      ->capture_default_str();
  c_sweep->add_option("--train-fraction", sweep.train_fraction,
                      "train split fraction, in (0,1)")
      ->capture_default_str();
  add_forest_options(c_sweep, sweep.forest, true);
  c_sweep->add_option("--out", sweep.out, "report CSV path (default stdout)");
  c_sweep->add_option("--out-json", sweep.out_json, "summary JSON path");

  VerifyBoundArgs vb;
  CLI::App* c_verify = app.add_subcommand(
      "verify-bound", "exhaustively check the distinct-gain bound");
  c_verify->add_option("--n", vb.n, "node size to check, >= 2");
  c_verify->add_option("--max-n", vb.max_n, "check every node size 2..max-n");
  c_verify->add_flag("--float", vb.use_float,
                     "use floating-point enumeration instead of exact rationals");
  c_verify->add_option("--out", vb.out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitParse;
  }

  try {
    if (app.got_subcommand(c_synth)) return cmd_synth(synth);
    if (app.got_subcommand(c_select)) return cmd_select(select);
    if (app.got_subcommand(c_importance)) return cmd_importance(imp);
    if (app.got_subcommand(c_eval)) return cmd_eval(eval);
    if (app.got_subcommand(c_sweep)) return cmd_sweep(sweep);
    if (app.got_subcommand(c_verify)) return cmd_verify_bound(vb);
  } catch (const grrf::InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRange;
  } catch (const grrf::CsvError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitOk;
}
