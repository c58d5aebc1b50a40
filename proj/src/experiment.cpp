#include "dirmh/experiment.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "dirmh/adaptive.hpp"
#include "dirmh/chain_io.hpp"
#include "dirmh/errors.hpp"
#include "dirmh/svg.hpp"

namespace dirmh {

namespace {

namespace fs = std::filesystem;

std::string format17(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
}

// Rows of the full-trajectory matrix that survive burn-in and thinning, using
// the same rule as run_chain (row j holds the state after step j + 1).
Eigen::MatrixXd apply_burn_thin(const Eigen::MatrixXd& states, long burn_in, long thin) {
  const long n = states.rows();
  const long kept = (n - burn_in - 1) / thin + 1;
  Eigen::MatrixXd out(kept, states.cols());
  long row = 0;
  for (long j = burn_in; j < n; j += thin) out.row(row++) = states.row(j);
  return out;
}

struct Job {
  const KernelEntry* entry = nullptr;
  std::uint64_t seed = 0;
};

RunResult execute_job(const Job& job, const ExperimentConfig& config,
                      const TargetDensity& target, const fs::path& out_root) {
  RunResult result;
  result.label = job.entry->label;
  result.seed = job.seed;
  const fs::path run_dir =
      out_root / (job.entry->label + "_seed" + std::to_string(job.seed));
  result.directory = run_dir.string();
  try {
    ensure_directory(run_dir);
    const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(target.dim());

    Eigen::MatrixXd states;
    std::vector<std::uint8_t> accepted;
    if (job.entry->adaptive) {
      AdaptState init;
      init.batch_index = 1;
      init.log_sigma = config.adaptation.log_sigma0;
      init.clamp = config.adaptation.clamp;
      init.target_rate = config.adaptation.a;
      init.batch_size = config.adaptation.batch_size;
      AdaptiveRun run = run_adaptive_chain(job.seed, target, job.entry->kernel, init,
                                           x0, config.n_steps);
      states = apply_burn_thin(run.chain.states, config.burn_in, config.thin);
      accepted = std::move(run.chain.accepted);
      write_adaptation_csv(run.trace, (run_dir / "adaptation.csv").string());
      write_sigma_svg(run.trace, (run_dir / "sigma.svg").string());
    } else {
      Chain chain = run_chain(job.seed, target, job.entry->kernel, x0, config.n_steps,
                              config.burn_in, config.thin);
      states = std::move(chain.states);
      accepted = std::move(chain.accepted);
    }

    result.report = compute_report(states, accepted, config.batch_size);
    emit_chain_csv(states, (run_dir / "chain.csv").string());
    std::ofstream report_file(run_dir / "report.json", std::ios::binary);
    if (!report_file) throw IoError("cannot write " + (run_dir / "report.json").string());
    report_file << report_to_json(result.report);
    write_trace_svg(states, (run_dir / "trace.svg").string());
    write_acf_svg(states, (run_dir / "acf.svg").string());
  } catch (const std::exception& e) {
    result.failed = true;
    result.error = e.what();
  }
  return result;
}

void write_summary(const fs::path& path, const std::vector<RunResult>& runs, int dim) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << "label,seed,acceptance,mess,msjd";
  for (int j = 1; j <= dim; ++j) out << ",ess_x" << j;
  for (int j = 1; j <= dim; ++j) out << ",iact_x" << j;
  out << "\n";
  for (const RunResult& run : runs) {
    if (run.failed) continue;
    out << run.label << ',' << run.seed << ',' << format17(run.report.acceptance_rate)
        << ',' << format17(run.report.mess) << ',' << format17(run.report.msjd);
    for (long j = 0; j < run.report.ess.size(); ++j) {
      out << ',' << format17(run.report.ess[j]);
    }
    for (long j = 0; j < run.report.iact.size(); ++j) {
      out << ',' << format17(run.report.iact[j]);
    }
    out << "\n";
  }
  if (!out) throw IoError("failed while writing " + path.string());
}

}  // namespace

int resolve_thread_count(int requested, std::size_t job_count) {
  long threads = requested;
  if (threads <= 0) {
    if (const char* env = std::getenv("DIRMH_THREADS")) {
      char* end = nullptr;
      threads = std::strtol(env, &end, 10);
      if (end == env || *end != '\0' || threads < 1) {
        throw ConfigError("DIRMH_THREADS", "must be a positive integer");
      }
    } else {
      threads = static_cast<long>(std::thread::hardware_concurrency());
      if (threads < 1) threads = 1;
    }
  }
  if (job_count < 1) job_count = 1;
  if (threads > static_cast<long>(job_count)) threads = static_cast<long>(job_count);
  return static_cast<int>(threads);
}

ExperimentResult run_experiment(const ExperimentConfig& config, int max_threads) {
  const std::unique_ptr<TargetDensity> target = build_target(config.target);
  const fs::path out_root(config.output_dir);
  ensure_directory(out_root);

  std::vector<Job> jobs;
  for (const KernelEntry& entry : config.kernels) {
    for (const std::uint64_t seed : config.seeds) {
      jobs.push_back(Job{&entry, seed});
    }
  }

  ExperimentResult result;
  result.runs.resize(jobs.size());
  const int n_threads = resolve_thread_count(max_threads, jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) break;
      result.runs[i] = execute_job(jobs[i], config, *target, out_root);
    }
  };
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  for (const RunResult& run : result.runs) {
    if (run.failed) result.any_failed = true;
  }
  const fs::path summary = out_root / "summary.csv";
  write_summary(summary, result.runs, target->dim());
  result.summary_path = summary.string();
  return result;
}

}  // namespace dirmh
