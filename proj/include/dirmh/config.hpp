#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dirmh/adaptive.hpp"
#include "dirmh/kernels.hpp"
#include "dirmh/targets.hpp"

namespace dirmh {

enum class TargetKind { kGaussian, kBanana, kGlmCsv, kGlmSimulate };

struct TargetSpec {
  TargetKind kind = TargetKind::kBanana;

  // gaussian
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  // banana
  double banana_b = 0.03;
  int banana_d = 2;

  // glm (csv or simulated)
  std::string csv_path;
  GlmFamily family = GlmFamily::kNormal;
  double dispersion = 1.0;
  double v_beta = 100.0;
  double v_u = 100.0;
  std::uint64_t data_seed = 0;
  int glm_n = 0;
  int glm_p = 0;
};

struct KernelEntry {
  std::string label;
  KernelConfig kernel;
  bool adaptive = false;
};

struct AdaptationBlock {
  bool enabled = false;
  double a = 0.45;         // target acceptance rate
  long batch_size = 100;   // B
  double clamp = 2.0;      // M
  double log_sigma0 = 2.0; // initial log_sigma (defaults to M)
};

struct ExperimentConfig {
  TargetSpec target;
  std::vector<KernelEntry> kernels;
  std::vector<std::uint64_t> seeds;
  long n_steps = 0;
  long burn_in = 0;
  long thin = 1;
  long batch_size = 0;  // 0 = floor(sqrt(n)) at diagnostics time
  AdaptationBlock adaptation;
  std::string output_dir = "out";
};

// Parses and validates a JSON config document. Defaults: burn_in 0, thin 1,
// adaptation a=0.45, B=100, M=2, log_sigma0=M, output_dir "out". Unknown keys
// anywhere are ConfigErrors carrying the offending field path.
ExperimentConfig parse_config(const std::string& json_text);

// Reads `path` and delegates to parse_config. Throws IoError when the file
// cannot be read.
ExperimentConfig load_config_file(const std::string& path);

// Instantiates the configured target (loading or simulating GLM data).
std::unique_ptr<TargetDensity> build_target(const TargetSpec& spec);

}  // namespace dirmh
