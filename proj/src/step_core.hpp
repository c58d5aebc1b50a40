#pragma once

// Internal single-step machinery shared by run_chain and run_adaptive_chain.
// Not part of the public headers.

#include <random>

#include "dirmh/kernels.hpp"

namespace dirmh::detail {

// Cached evaluations at the current state, carried across steps so each
// transition costs one fresh target evaluation (plus one gradient).
struct LocalState {
  double log_f = 0.0;
  Eigen::VectorXd grad;  // unused for RWMH
};

LocalState make_local(const TargetDensity& target, const Eigen::VectorXd& x,
                      const KernelConfig& config);

// One transition from x with cached values `local`; on acceptance `local` is
// updated in place to describe the new state.
StepResult step_from(std::mt19937_64& rng, const TargetDensity& target,
                     const Eigen::VectorXd& x, LocalState& local,
                     const KernelConfig& config);

Eigen::VectorXd gradient_of(const TargetDensity& target, const Eigen::VectorXd& x,
                            const KernelConfig& config);

}  // namespace dirmh::detail
