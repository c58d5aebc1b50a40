#pragma once

#include <Eigen/Core>
#include <random>

#include "dirmh/errors.hpp"

namespace dirmh {

// Gradient norms below this threshold are treated as zero: the proposal then
// falls back to an isotropic step with no drift, so density evaluations stay
// finite near stationary points of the target.
inline constexpr double kGradEps = 1e-12;

// Normalized gradient direction. `g` is only meaningful when `degenerate`
// is false.
struct Direction {
  Eigen::VectorXd g;
  bool degenerate = false;
};

// Parameters of the directional proposal
//   N(x + h * grad, t * (I + (s - 1) g g^T)),   g = grad / |grad|.
// h >= 0 is the drift step, s > 0 weights the variance along the gradient
// direction, t > 0 scales the whole covariance.
struct ProposalShape {
  double h = 0.0;
  double s = 1.0;
  double t = 1.0;
};

// Normalizes `grad` to unit length; flags directions with |grad| < kGradEps
// as degenerate. Throws InvalidGradient if `grad` has non-finite entries.
Direction unit_gradient(const Eigen::VectorXd& grad);

// Dense proposal covariance t * (I + (s - 1) g g^T). Intended for reports and
// tests; the sampling path never materializes it. Throws DegenerateDirection
// for degenerate directions.
Eigen::MatrixXd covariance_matrix(const Direction& dir, const ProposalShape& shape);

// v^T Sigma^{-1} v evaluated through the rank-one closed form
//   (1/t) * (|v|^2 + (1/s - 1) (g . v)^2),
// O(d) time, no matrix storage.
double quadratic_form(const Eigen::VectorXd& v, const Direction& dir,
                      const ProposalShape& shape);

// Draws one proposal point. Consumes exactly d standard normal variates from
// `rng` (in coordinate order) and nothing else. With a degenerate gradient the
// draw is x + sqrt(t) * z; otherwise
//   x + h * grad + sqrt(t) * (z + (sqrt(s) - 1) (g . z) g).
Eigen::VectorXd sample_proposal(std::mt19937_64& rng, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& grad,
                                const ProposalShape& shape);

// Log density of proposing `to` from `from` whose local gradient is
// `grad_at_from`. Uses log det Sigma = log s + d log t and the closed-form
// quadratic form; degenerate gradients use the isotropic N(from, t I) density.
double proposal_log_density(const Eigen::VectorXd& from,
                            const Eigen::VectorXd& grad_at_from,
                            const Eigen::VectorXd& to,
                            const ProposalShape& shape);

// Reference construction used by tests: completes g to an orthonormal basis
// with classical Gram-Schmidt (standard basis vectors, skipping the one most
// parallel to g, with one re-orthogonalization pass). Column 0 is g itself.
// Throws DegenerateDirection for degenerate input and OracleFailure if the
// construction loses rank.
Eigen::MatrixXd orthonormal_completion(const Direction& dir);

}  // namespace dirmh
