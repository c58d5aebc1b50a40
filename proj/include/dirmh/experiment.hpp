#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dirmh/config.hpp"
#include "dirmh/diagnostics.hpp"

namespace dirmh {

// Outcome of one (kernel, seed) run.
struct RunResult {
  std::string label;
  std::uint64_t seed = 0;
  std::string directory;  // run directory under ExperimentConfig::output_dir
  DiagnosticsReport report;
  bool failed = false;
  std::string error;
};

struct ExperimentResult {
  std::vector<RunResult> runs;  // kernel-major, seed-minor order
  std::string summary_path;
  bool any_failed = false;
};

// Resolves the worker count: explicit `requested` wins, then the
// DIRMH_THREADS environment variable, then hardware concurrency; the result
// is clamped to [1, job_count]. Throws ConfigError when DIRMH_THREADS is not
// a positive integer.
int resolve_thread_count(int requested, std::size_t job_count);

// Runs every (kernel, seed) pair concurrently. Each run writes chain.csv,
// report.json, trace.svg and acf.svg (plus adaptation.csv and sigma.svg for
// adaptive kernels) into "<label>_seed<seed>/"; a summary.csv with one row
// per successful run is assembled at the end. Per-run errors are recorded in
// the result without aborting the other runs.
ExperimentResult run_experiment(const ExperimentConfig& config, int max_threads = 0);

}  // namespace dirmh
