// Times RF training and the evaluation protocol on the serial reference
// path (threads=1) against the OpenMP path, and checks that both produce
// identical results.

#include <chrono>
#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "grrf/dataset.hpp"
#include "grrf/eval.hpp"
#include "grrf/forest.hpp"
#include "grrf/parallel.hpp"
#include "grrf/serialize.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP benchmark"};
  std::size_t n = 1000;
  int ntree = 200;
  int threads = 0;
  int replicates = 8;
  std::uint64_t seed = 42;
  app.add_option("--n", n, "instances in the synthetic dataset");
  app.add_option("--ntree", ntree, "trees per forest");
  app.add_option("--threads", threads, "parallel worker count; 0 = all");
  app.add_option("--replicates", replicates, "protocol replicates to time");
  app.add_option("--seed", seed, "RNG seed");
  CLI11_PARSE(app, argc, argv);

  const int nthreads = grrf::resolve_threads(threads);
  std::cout << "openmp: " << (grrf::openmp_enabled() ? "yes" : "no")
            << ", workers: " << nthreads << '\n';

  const grrf::Dataset d = grrf::generate_friedman(n, seed);

  grrf::ForestConfig cfg = grrf::ForestConfig::defaults_for(grrf::ForestMode::rf);
  cfg.ntree = ntree;
  cfg.seed = seed;

  cfg.threads = 1;
  auto t0 = std::chrono::steady_clock::now();
  const grrf::Forest serial = grrf::train_rf(d, cfg);
  const double rf_serial = seconds_since(t0);

  cfg.threads = nthreads;
  t0 = std::chrono::steady_clock::now();
  const grrf::Forest parallel = grrf::train_rf(d, cfg);
  const double rf_parallel = seconds_since(t0);

  const bool rf_match = grrf::forest_to_json(serial) == grrf::forest_to_json(parallel);
  std::cout << "train_rf      serial " << rf_serial << " s, parallel "
            << rf_parallel << " s, speedup " << rf_serial / rf_parallel
            << ", identical: " << (rf_match ? "yes" : "NO") << '\n';

  grrf::ProtocolConfig pc;
  pc.replicates = replicates;
  pc.seed = seed;
  pc.ntree = ntree / 2;
  grrf::SelectorSpec spec;
  spec.kind = grrf::SelectorSpec::Kind::grrf;
  spec.gamma = 0.5;

  pc.threads = 1;
  t0 = std::chrono::steady_clock::now();
  const grrf::RunReport serial_report = grrf::run_protocol(d, spec, pc);
  const double eval_serial = seconds_since(t0);

  pc.threads = nthreads;
  t0 = std::chrono::steady_clock::now();
  const grrf::RunReport parallel_report = grrf::run_protocol(d, spec, pc);
  const double eval_parallel = seconds_since(t0);

  bool eval_match = serial_report.per_replicate.size() ==
                    parallel_report.per_replicate.size();
  for (std::size_t i = 0; eval_match && i < serial_report.per_replicate.size(); ++i) {
    const auto& a = serial_report.per_replicate[i];
    const auto& b = parallel_report.per_replicate[i];
    eval_match = a.selected == b.selected && a.error_rate == b.error_rate;
  }
  std::cout << "run_protocol  serial " << eval_serial << " s, parallel "
            << eval_parallel << " s, speedup " << eval_serial / eval_parallel
            << ", identical: " << (eval_match ? "yes" : "NO") << '\n';

  return rf_match && eval_match ? 0 : 1;
}
