#include "dirmh/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace dirmh {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigError(path, message);
}

void check_keys(const json& obj, const std::string& path,
                const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(path, "must be an object");
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
    }
  }
}

const json& require(const json& obj, const std::string& path, const std::string& key) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing");
  return *it;
}

double as_number(const json& value, const std::string& path) {
  if (!value.is_number()) fail(path, "must be a number");
  return value.get<double>();
}

long as_integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) fail(path, "must be an integer");
  return value.get<long>();
}

bool as_bool(const json& value, const std::string& path) {
  if (!value.is_boolean()) fail(path, "must be a boolean");
  return value.get<bool>();
}

std::string as_string(const json& value, const std::string& path) {
  if (!value.is_string()) fail(path, "must be a string");
  return value.get<std::string>();
}

double optional_number(const json& obj, const std::string& path, const std::string& key,
                       double fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, path + "." + key);
}

bool safe_label(const std::string& label) {
  if (label.empty()) return false;
  for (const char c : label) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

TargetSpec parse_target(const json& obj) {
  const std::string path = "target";
  if (!obj.is_object()) fail(path, "must be an object");
  const std::string kind = as_string(require(obj, path, "kind"), path + ".kind");

  TargetSpec spec;
  if (kind == "gaussian") {
    spec.kind = TargetKind::kGaussian;
    check_keys(obj, path, {"kind", "mean", "cov"});
    const json& mean = require(obj, path, "mean");
    if (!mean.is_array() || mean.empty()) fail(path + ".mean", "must be a non-empty array");
    spec.mean.resize(static_cast<long>(mean.size()));
    for (std::size_t i = 0; i < mean.size(); ++i) {
      spec.mean[static_cast<long>(i)] = as_number(mean[i], path + ".mean");
    }
    const json& cov = require(obj, path, "cov");
    const long d = spec.mean.size();
    if (!cov.is_array() || static_cast<long>(cov.size()) != d) {
      fail(path + ".cov", "must be a " + std::to_string(d) + "-row matrix");
    }
    spec.cov.resize(d, d);
    for (long i = 0; i < d; ++i) {
      const json& row = cov[static_cast<std::size_t>(i)];
      if (!row.is_array() || static_cast<long>(row.size()) != d) {
        fail(path + ".cov", "rows must have length " + std::to_string(d));
      }
      for (long j = 0; j < d; ++j) {
        spec.cov(i, j) = as_number(row[static_cast<std::size_t>(j)], path + ".cov");
      }
    }
  } else if (kind == "banana") {
    spec.kind = TargetKind::kBanana;
    check_keys(obj, path, {"kind", "B", "d"});
    spec.banana_b = as_number(require(obj, path, "B"), path + ".B");
    spec.banana_d = static_cast<int>(as_integer(require(obj, path, "d"), path + ".d"));
    if (!(spec.banana_b > 0.0)) fail(path + ".B", "must be > 0");
    if (spec.banana_d < 2) fail(path + ".d", "must be >= 2");
  } else if (kind == "glm" || kind == "glm_simulate") {
    const json& family = require(obj, path, "family");
    spec.family = family_from_name(as_string(family, path + ".family"));
    spec.dispersion = optional_number(obj, path, "dispersion", 1.0);
    spec.v_beta = optional_number(obj, path, "v_beta", 100.0);
    spec.v_u = optional_number(obj, path, "v_u", 100.0);
    if (!(spec.dispersion > 0.0)) fail(path + ".dispersion", "must be > 0");
    if (!(spec.v_beta > 0.0)) fail(path + ".v_beta", "must be > 0");
    if (!(spec.v_u > 0.0)) fail(path + ".v_u", "must be > 0");
    if (kind == "glm") {
      spec.kind = TargetKind::kGlmCsv;
      check_keys(obj, path, {"kind", "csv", "family", "dispersion", "v_beta", "v_u"});
      spec.csv_path = as_string(require(obj, path, "csv"), path + ".csv");
      if (!std::filesystem::exists(spec.csv_path)) {
        fail(path + ".csv", "file does not exist: " + spec.csv_path);
      }
    } else {
      spec.kind = TargetKind::kGlmSimulate;
      check_keys(obj, path,
                 {"kind", "family", "n", "p", "data_seed", "dispersion", "v_beta", "v_u"});
      spec.glm_n = static_cast<int>(as_integer(require(obj, path, "n"), path + ".n"));
      spec.glm_p = static_cast<int>(as_integer(require(obj, path, "p"), path + ".p"));
      const long seed = as_integer(require(obj, path, "data_seed"), path + ".data_seed");
      if (seed < 0) fail(path + ".data_seed", "must be >= 0");
      spec.data_seed = static_cast<std::uint64_t>(seed);
      if (spec.glm_n < 1) fail(path + ".n", "must be >= 1");
      if (spec.glm_p < 1) fail(path + ".p", "must be >= 1");
    }
  } else {
    fail(path + ".kind", "unknown target kind '" + kind + "'");
  }
  return spec;
}

KernelEntry parse_kernel(const json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "must be an object");
  check_keys(obj, path, {"label", "flavor", "h", "s", "t", "adaptive", "numeric_grad_step"});

  KernelEntry entry;
  entry.label = as_string(require(obj, path, "label"), path + ".label");
  if (!safe_label(entry.label)) {
    fail(path + ".label", "must be non-empty and use only [A-Za-z0-9_-]");
  }

  const std::string flavor = as_string(require(obj, path, "flavor"), path + ".flavor");
  double h = 0.0;
  double s = 1.0;
  const double t = as_number(require(obj, path, "t"), path + ".t");
  if (!(t > 0.0)) fail(path + ".t", "must be > 0");

  if (flavor == "RWMH") {
    entry.kernel.flavor = KernelFlavor::kRwmh;
    h = optional_number(obj, path, "h", 0.0);
    s = optional_number(obj, path, "s", 1.0);
    if (h != 0.0) fail(path + ".h", "must be 0 for RWMH");
    if (s != 1.0) fail(path + ".s", "must be 1 for RWMH");
  } else if (flavor == "MALA") {
    entry.kernel.flavor = KernelFlavor::kMala;
    h = as_number(require(obj, path, "h"), path + ".h");
    s = optional_number(obj, path, "s", 1.0);
    if (s != 1.0) fail(path + ".s", "must be 1 for MALA");
  } else if (flavor == "DMH") {
    entry.kernel.flavor = KernelFlavor::kDmh;
    h = as_number(require(obj, path, "h"), path + ".h");
    s = as_number(require(obj, path, "s"), path + ".s");
  } else {
    fail(path + ".flavor", "must be one of RWMH, MALA, DMH");
  }
  if (!(h >= 0.0)) fail(path + ".h", "must be >= 0");
  if (!(s > 0.0)) fail(path + ".s", "must be > 0");
  entry.kernel.shape = ProposalShape{h, s, t};

  if (const auto it = obj.find("numeric_grad_step"); it != obj.end()) {
    const double step = as_number(*it, path + ".numeric_grad_step");
    if (!(step > 0.0)) fail(path + ".numeric_grad_step", "must be > 0");
    entry.kernel.numeric_grad_step = step;
  }
  if (const auto it = obj.find("adaptive"); it != obj.end()) {
    entry.adaptive = as_bool(*it, path + ".adaptive");
  }
  entry.kernel.validate();
  return entry;
}

AdaptationBlock parse_adaptation(const json& obj) {
  const std::string path = "adaptation";
  check_keys(obj, path, {"enabled", "a", "B", "M", "log_sigma0"});
  AdaptationBlock block;
  if (const auto it = obj.find("enabled"); it != obj.end()) {
    block.enabled = as_bool(*it, path + ".enabled");
  } else {
    block.enabled = true;  // presence of the block turns adaptation on
  }
  block.a = optional_number(obj, path, "a", 0.45);
  if (!(block.a > 0.0) || !(block.a < 1.0)) fail(path + ".a", "must be in (0, 1)");
  if (const auto it = obj.find("B"); it != obj.end()) {
    block.batch_size = as_integer(*it, path + ".B");
  }
  if (block.batch_size < 1) fail(path + ".B", "must be >= 1");
  block.clamp = optional_number(obj, path, "M", 2.0);
  if (!(block.clamp > 0.0)) fail(path + ".M", "must be > 0");
  block.log_sigma0 = optional_number(obj, path, "log_sigma0", block.clamp);
  if (std::abs(block.log_sigma0) > block.clamp) {
    fail(path + ".log_sigma0", "must lie in [-M, M]");
  }
  return block;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
  check_keys(doc, "",
             {"target", "kernels", "seeds", "n_steps", "burn_in", "thin", "batch_size",
              "adaptation", "output_dir"});

  ExperimentConfig config;
  config.target = parse_target(require(doc, "", "target"));

  const json& kernels = require(doc, "", "kernels");
  if (!kernels.is_array() || kernels.empty()) fail("kernels", "must be a non-empty array");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < kernels.size(); ++i) {
    const std::string path = "kernels[" + std::to_string(i) + "]";
    KernelEntry entry = parse_kernel(kernels[i], path);
    if (!labels.insert(entry.label).second) {
      fail(path + ".label", "duplicate label '" + entry.label + "'");
    }
    config.kernels.push_back(std::move(entry));
  }

  const json& seeds = require(doc, "", "seeds");
  if (!seeds.is_array() || seeds.empty()) fail("seeds", "must be a non-empty array");
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const std::string path = "seeds[" + std::to_string(i) + "]";
    const long seed = as_integer(seeds[i], path);
    if (seed < 0) fail(path, "must be >= 0");
    config.seeds.push_back(static_cast<std::uint64_t>(seed));
  }

  config.n_steps = as_integer(require(doc, "", "n_steps"), "n_steps");
  if (config.n_steps < 1) fail("n_steps", "must be >= 1");
  if (const auto it = doc.find("burn_in"); it != doc.end()) {
    config.burn_in = as_integer(*it, "burn_in");
  }
  if (config.burn_in < 0 || config.burn_in >= config.n_steps) {
    fail("burn_in", "must satisfy 0 <= burn_in < n_steps");
  }
  if (const auto it = doc.find("thin"); it != doc.end()) {
    config.thin = as_integer(*it, "thin");
  }
  if (config.thin < 1) fail("thin", "must be >= 1");
  if (const auto it = doc.find("batch_size"); it != doc.end()) {
    config.batch_size = as_integer(*it, "batch_size");
    if (config.batch_size < 1) fail("batch_size", "must be >= 1");
  }
  if (const auto it = doc.find("adaptation"); it != doc.end()) {
    config.adaptation = parse_adaptation(*it);
  }
  if (const auto it = doc.find("output_dir"); it != doc.end()) {
    config.output_dir = as_string(*it, "output_dir");
    if (config.output_dir.empty()) fail("output_dir", "must be non-empty");
  }

  for (std::size_t i = 0; i < config.kernels.size(); ++i) {
    if (config.kernels[i].adaptive) {
      if (!config.adaptation.enabled) {
        fail("kernels[" + std::to_string(i) + "].adaptive",
             "requires an enabled adaptation block");
      }
      if (config.n_steps < config.adaptation.batch_size) {
        fail("n_steps", "must be >= adaptation.B for adaptive kernels");
      }
    }
  }
  return config;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::unique_ptr<TargetDensity> build_target(const TargetSpec& spec) {
  switch (spec.kind) {
    case TargetKind::kGaussian:
      return std::make_unique<GaussianTarget>(gaussian_target(spec.mean, spec.cov));
    case TargetKind::kBanana:
      return std::make_unique<BananaTarget>(spec.banana_b, spec.banana_d);
    case TargetKind::kGlmCsv:
      return std::make_unique<GlmPosterior>(load_glm_csv(
          spec.csv_path, spec.family, spec.dispersion, spec.v_beta, spec.v_u));
    case TargetKind::kGlmSimulate:
      return std::make_unique<GlmPosterior>(
          simulate_glm_data(spec.data_seed, spec.glm_n, spec.glm_p, spec.family,
                            spec.dispersion, spec.v_beta, spec.v_u));
  }
  throw ConfigError("target.kind", "unknown target kind");
}

}  // namespace dirmh
