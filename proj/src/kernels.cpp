#include "dirmh/kernels.hpp"

#include <cmath>
#include <limits>

#include "step_core.hpp"

namespace dirmh {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

namespace detail {

Eigen::VectorXd gradient_of(const TargetDensity& target, const Eigen::VectorXd& x,
                            const KernelConfig& config) {
  if (config.numeric_grad_step) {
    return numeric_gradient(target, x, *config.numeric_grad_step);
  }
  return target.grad_log_density(x);
}

LocalState make_local(const TargetDensity& target, const Eigen::VectorXd& x,
                      const KernelConfig& config) {
  LocalState local;
  local.log_f = target.log_density(x);
  if (config.flavor == KernelFlavor::kRwmh) {
    local.grad = Eigen::VectorXd::Zero(x.size());
  } else {
    local.grad = gradient_of(target, x, config);
  }
  return local;
}

StepResult step_from(std::mt19937_64& rng, const TargetDensity& target,
                     const Eigen::VectorXd& x, LocalState& local,
                     const KernelConfig& config) {
  const bool rwmh = config.flavor == KernelFlavor::kRwmh;
  const Eigen::VectorXd y = sample_proposal(rng, x, local.grad, config.shape);
  // The accept variate is always drawn immediately after the proposal so the
  // stream layout does not depend on the flavor or on rejection shortcuts.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double u = unif(rng);

  StepResult result;
  const double log_f_y = target.log_density(y);
  if (!std::isfinite(log_f_y)) {
    result.next = x;
    result.accepted = false;
    result.log_hastings_ratio = kNegInf;
    return result;
  }

  double ratio = log_f_y - local.log_f;
  Eigen::VectorXd grad_y;
  if (!rwmh) {
    grad_y = gradient_of(target, y, config);
    ratio += proposal_log_density(y, grad_y, x, config.shape) -
             proposal_log_density(x, local.grad, y, config.shape);
  }

  result.log_hastings_ratio = ratio;
  result.accepted = !std::isnan(ratio) && std::log(u) <= ratio;
  if (result.accepted) {
    result.next = y;
    local.log_f = log_f_y;
    if (!rwmh) local.grad = std::move(grad_y);
  } else {
    result.next = x;
  }
  return result;
}

}  // namespace detail

KernelConfig KernelConfig::rwmh(double t) {
  KernelConfig config;
  config.flavor = KernelFlavor::kRwmh;
  config.shape = ProposalShape{0.0, 1.0, t};
  config.validate();
  return config;
}

KernelConfig KernelConfig::mala(double h, double t) {
  KernelConfig config;
  config.flavor = KernelFlavor::kMala;
  config.shape = ProposalShape{h, 1.0, t};
  config.validate();
  return config;
}

KernelConfig KernelConfig::dmh(double h, double s, double t) {
  KernelConfig config;
  config.flavor = KernelFlavor::kDmh;
  config.shape = ProposalShape{h, s, t};
  config.validate();
  return config;
}

void KernelConfig::validate() const {
  if (!(shape.h >= 0.0) || !(shape.s > 0.0) || !(shape.t > 0.0) ||
      !std::isfinite(shape.h) || !std::isfinite(shape.s) || !std::isfinite(shape.t)) {
    throw std::invalid_argument("kernel shape requires h >= 0, s > 0, t > 0");
  }
  if (flavor == KernelFlavor::kRwmh && (shape.h != 0.0 || shape.s != 1.0)) {
    throw std::invalid_argument("RWMH requires h = 0 and s = 1");
  }
  if (flavor == KernelFlavor::kMala && shape.s != 1.0) {
    throw std::invalid_argument("MALA requires s = 1");
  }
  if (numeric_grad_step && !(*numeric_grad_step > 0.0)) {
    throw std::invalid_argument("numeric gradient step must be positive");
  }
}

double Chain::acceptance_rate() const {
  if (accepted.empty()) return 0.0;
  long count = 0;
  for (const auto flag : accepted) count += flag;
  return static_cast<double>(count) / static_cast<double>(accepted.size());
}

double log_hastings_ratio(const TargetDensity& target, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& y, const KernelConfig& config) {
  config.validate();
  const double log_f_y = target.log_density(y);
  if (!std::isfinite(log_f_y)) return kNegInf;
  const double log_f_x = target.log_density(x);
  if (config.flavor == KernelFlavor::kRwmh) {
    return log_f_y - log_f_x;
  }
  const Eigen::VectorXd grad_x = detail::gradient_of(target, x, config);
  const Eigen::VectorXd grad_y = detail::gradient_of(target, y, config);
  // Pairing the two differences keeps the ratio exactly antisymmetric in
  // floating point: each difference negates exactly when x and y swap, and
  // rounding the final sum is sign-symmetric.
  return (log_f_y - log_f_x) + (proposal_log_density(y, grad_y, x, config.shape) -
                                proposal_log_density(x, grad_x, y, config.shape));
}

StepResult mh_step(std::mt19937_64& rng, const TargetDensity& target,
                   const Eigen::VectorXd& x, const KernelConfig& config) {
  config.validate();
  detail::LocalState local = detail::make_local(target, x, config);
  return detail::step_from(rng, target, x, local, config);
}

Chain run_chain(std::uint64_t seed, const TargetDensity& target,
                const KernelConfig& config, const Eigen::VectorXd& x0, long n_steps,
                long burn_in, long thin) {
  config.validate();
  if (n_steps < 1 || burn_in < 0 || burn_in >= n_steps || thin < 1) {
    throw std::invalid_argument("need n_steps >= 1, 0 <= burn_in < n_steps, thin >= 1");
  }
  if (x0.size() != target.dim()) {
    throw InvalidStart("start point dimension does not match the target");
  }
  if (!std::isfinite(target.log_density(x0))) {
    throw InvalidStart("target log density is not finite at the start point");
  }

  std::mt19937_64 rng(seed);
  detail::LocalState local = detail::make_local(target, x0, config);

  Chain chain;
  chain.seed = seed;
  chain.config = config;
  chain.accepted.resize(static_cast<std::size_t>(n_steps));
  const long kept = (n_steps - burn_in - 1) / thin + 1;
  chain.states.resize(kept, target.dim());

  Eigen::VectorXd x = x0;
  long row = 0;
  for (long i = 1; i <= n_steps; ++i) {
    StepResult step = detail::step_from(rng, target, x, local, config);
    chain.accepted[static_cast<std::size_t>(i - 1)] = step.accepted ? 1 : 0;
    x = std::move(step.next);
    if (i > burn_in && (i - burn_in - 1) % thin == 0) {
      chain.states.row(row++) = x;
    }
  }
  return chain;
}

}  // namespace dirmh
