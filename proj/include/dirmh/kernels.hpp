#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dirmh/proposal.hpp"
#include "dirmh/targets.hpp"

namespace dirmh {

// The three kernels share one proposal/accept code path; flavors are presets:
//   kRwmh forces h = 0, s = 1 (random walk, symmetric proposal),
//   kMala forces s = 1 (isotropic gradient drift; classic MALA at t = h^2),
//   kDmh leaves h, s, t free (directional covariance).
enum class KernelFlavor { kDmh, kMala, kRwmh };

struct KernelConfig {
  KernelFlavor flavor = KernelFlavor::kDmh;
  ProposalShape shape;
  // When set, gradients come from central differences with this step.
  std::optional<double> numeric_grad_step;

  static KernelConfig rwmh(double t);
  static KernelConfig mala(double h, double t);
  static KernelConfig dmh(double h, double s, double t);

  // Throws std::invalid_argument if the shape violates the flavor's preset
  // or the h >= 0, s > 0, t > 0 constraints.
  void validate() const;
};

struct StepResult {
  Eigen::VectorXd next;
  bool accepted = false;
  double log_hastings_ratio = 0.0;
};

// One realized chain. `states` holds the post-burn-in, thinned states (one
// row per kept state); `accepted` has one flag per raw step.
struct Chain {
  Eigen::MatrixXd states;
  std::vector<std::uint8_t> accepted;
  std::uint64_t seed = 0;
  KernelConfig config;

  double acceptance_rate() const;
};

// log f(y) - log f(x) + log q(y -> x) - log q(x -> y). Non-finite log f(y)
// yields -inf (certain rejection) without touching the reverse density.
// RWMH skips the symmetric q terms (and any gradient evaluation).
double log_hastings_ratio(const TargetDensity& target, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y, const KernelConfig& config);

// One MH transition from x. Consumes dim(target) normal draws for the
// proposal followed by exactly one uniform draw for the accept test.
StepResult mh_step(std::mt19937_64& rng, const TargetDensity& target,
                   const Eigen::VectorXd& x, const KernelConfig& config);

// Runs n_steps transitions from x0 under a freshly seeded generator.
// Throws InvalidStart if log f(x0) is not finite.
Chain run_chain(std::uint64_t seed, const TargetDensity& target,
                const KernelConfig& config, const Eigen::VectorXd& x0,
                long n_steps, long burn_in = 0, long thin = 1);

}  // namespace dirmh
