#pragma once

#include <cstdint>
#include <vector>

#include "dirmh/kernels.hpp"

namespace dirmh {

// State of the batchwise scale adaptation. The adapted quantity is
// log_sigma = log of the proposal standard deviation sigma; the kernel runs
// each batch with effective t = exp(2 * log_sigma). `clamp` keeps log_sigma
// inside [-clamp, clamp] so the adaptation diminishes but never escapes.
struct AdaptState {
  long batch_index = 1;     // 1-based index of the next batch to run
  double log_sigma = 0.0;
  double clamp = 2.0;       // M
  double target_rate = 0.45;  // a
  long batch_size = 100;    // B
};

// Adaptation step size delta(b) = min(0.01, b^{-1/2}). Throws
// InvalidBatchIndex for b < 1.
double adapt_delta(long batch_index);

// Moves log_sigma up by delta(b) when the batch acceptance is >= the target
// rate, down otherwise, then clamps to [-M, M] and advances the batch index.
AdaptState update_scale(const AdaptState& state, double batch_acceptance);

struct AdaptTraceRow {
  long batch_index = 0;      // 1-based
  double log_sigma = 0.0;    // value in force during this batch
  double batch_acceptance = 0.0;
};

struct AdaptiveRun {
  Chain chain;  // full chain: burn_in 0, thin 1
  std::vector<AdaptTraceRow> trace;  // one row per completed batch
};

// Runs n_steps transitions, applying update_scale at every completed batch
// boundary. config.shape.t is ignored; each batch uses t = exp(2 log_sigma).
// The random stream layout is identical to run_chain under the same seed.
AdaptiveRun run_adaptive_chain(std::uint64_t seed, const TargetDensity& target,
                               const KernelConfig& config, const AdaptState& initial,
                               const Eigen::VectorXd& x0, long n_steps);

}  // namespace dirmh
