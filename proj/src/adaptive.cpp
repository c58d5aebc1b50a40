#include "dirmh/adaptive.hpp"

#include <algorithm>
#include <cmath>

#include "step_core.hpp"

namespace dirmh {

double adapt_delta(long batch_index) {
  if (batch_index < 1) {
    throw InvalidBatchIndex("batch index must be >= 1");
  }
  return std::min(0.01, 1.0 / std::sqrt(static_cast<double>(batch_index)));
}

AdaptState update_scale(const AdaptState& state, double batch_acceptance) {
  const double delta = adapt_delta(state.batch_index);
  AdaptState next = state;
  next.log_sigma += batch_acceptance >= state.target_rate ? delta : -delta;
  next.log_sigma = std::clamp(next.log_sigma, -state.clamp, state.clamp);
  next.batch_index = state.batch_index + 1;
  return next;
}

AdaptiveRun run_adaptive_chain(std::uint64_t seed, const TargetDensity& target,
                               const KernelConfig& config, const AdaptState& initial,
                               const Eigen::VectorXd& x0, long n_steps) {
  config.validate();
  if (initial.batch_size < 1 || n_steps < initial.batch_size) {
    throw std::invalid_argument("need batch_size >= 1 and n_steps >= batch_size");
  }
  if (!(initial.clamp > 0.0) || std::abs(initial.log_sigma) > initial.clamp) {
    throw std::invalid_argument("need clamp > 0 and |log_sigma| <= clamp");
  }
  if (x0.size() != target.dim()) {
    throw InvalidStart("start point dimension does not match the target");
  }
  if (!std::isfinite(target.log_density(x0))) {
    throw InvalidStart("target log density is not finite at the start point");
  }

  std::mt19937_64 rng(seed);
  KernelConfig batch_config = config;
  AdaptState adapt = initial;
  batch_config.shape.t = std::exp(2.0 * adapt.log_sigma);
  detail::LocalState local = detail::make_local(target, x0, batch_config);

  AdaptiveRun run;
  run.chain.seed = seed;
  run.chain.config = config;
  run.chain.accepted.resize(static_cast<std::size_t>(n_steps));
  run.chain.states.resize(n_steps, target.dim());
  run.trace.reserve(static_cast<std::size_t>(n_steps / adapt.batch_size));

  Eigen::VectorXd x = x0;
  long batch_accepts = 0;
  for (long i = 1; i <= n_steps; ++i) {
    StepResult step = detail::step_from(rng, target, x, local, batch_config);
    run.chain.accepted[static_cast<std::size_t>(i - 1)] = step.accepted ? 1 : 0;
    batch_accepts += step.accepted ? 1 : 0;
    x = std::move(step.next);
    run.chain.states.row(i - 1) = x;

    if (i % adapt.batch_size == 0) {
      const double rate =
          static_cast<double>(batch_accepts) / static_cast<double>(adapt.batch_size);
      run.trace.push_back({adapt.batch_index, adapt.log_sigma, rate});
      adapt = update_scale(adapt, rate);
      batch_config.shape.t = std::exp(2.0 * adapt.log_sigma);
      batch_accepts = 0;
    }
  }
  return run;
}

}  // namespace dirmh
