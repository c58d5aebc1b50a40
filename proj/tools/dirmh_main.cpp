#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dirmh/chain_io.hpp"
#include "dirmh/config.hpp"
#include "dirmh/diagnostics.hpp"
#include "dirmh/errors.hpp"
#include "dirmh/experiment.hpp"
#include "dirmh/svg.hpp"

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

// Input problems (unreadable/malformed user-supplied files) count as config
// errors; failures after inputs are validated are runtime errors.
int cmd_run(const std::string& config_path) {
  dirmh::ExperimentConfig config;
  try {
    config = dirmh::load_config_file(config_path);
  } catch (const dirmh::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  const dirmh::ExperimentResult result = dirmh::run_experiment(config);
  for (const dirmh::RunResult& run : result.runs) {
    if (run.failed) {
      std::cerr << run.label << " seed " << run.seed << ": FAILED: " << run.error
                << "\n";
    } else {
      std::cout << run.label << " seed " << run.seed
                << ": acceptance=" << run.report.acceptance_rate
                << " mess=" << run.report.mess << " msjd=" << run.report.msjd << "\n";
    }
  }
  std::cout << "wrote " << result.summary_path << "\n";
  return result.any_failed ? kExitRuntime : kExitOk;
}

int cmd_diagnose(const std::string& chain_path, long batch_size) {
  Eigen::MatrixXd states;
  try {
    states = dirmh::read_chain_csv(chain_path);
  } catch (const dirmh::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  const dirmh::DiagnosticsReport report = dirmh::compute_report(states, {}, batch_size);
  std::cout << dirmh::report_to_json(report);
  return kExitOk;
}

int cmd_plot(const std::string& chain_path, const std::string& out_dir) {
  Eigen::MatrixXd states;
  try {
    states = dirmh::read_chain_csv(chain_path);
  } catch (const dirmh::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw dirmh::IoError("cannot create directory " + out_dir + ": " + ec.message());
  }
  dirmh::write_trace_svg(states, (fs::path(out_dir) / "trace.svg").string());
  dirmh::write_acf_svg(states, (fs::path(out_dir) / "acf.svg").string());
  std::cout << "wrote " << (fs::path(out_dir) / "trace.svg").string() << " and "
            << (fs::path(out_dir) / "acf.svg").string() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dirmh: directional Metropolis-Hastings benchmark driver"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "dirmh 0.1.0");

  std::string config_path;
  CLI::App* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  run->add_option("config", config_path, "Path to the experiment config (JSON)")
      ->required();

  std::string chain_path;
  long batch_size = 0;
  CLI::App* diagnose =
      app.add_subcommand("diagnose", "Recompute diagnostics from a chain CSV");
  diagnose->add_option("chain", chain_path, "Path to chain.csv")->required();
  diagnose
      ->add_option("--batch-size", batch_size,
                   "Batch size for batch-means estimators (default: floor(sqrt(n)))")
      ->check(CLI::NonNegativeNumber);

  std::string plot_chain_path;
  std::string out_dir;
  CLI::App* plot = app.add_subcommand("plot", "Render trace and ACF SVGs from a chain CSV");
  plot->add_option("chain", plot_chain_path, "Path to chain.csv")->required();
  plot->add_option("--out", out_dir, "Output directory for the SVGs")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) return cmd_run(config_path);
    if (diagnose->parsed()) return cmd_diagnose(chain_path, batch_size);
    if (plot->parsed()) return cmd_plot(plot_chain_path, out_dir);
    std::cerr << "error: no subcommand\n";
    return kExitConfig;
  } catch (const dirmh::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const dirmh::InvalidCovariance& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
