#include "dirmh/proposal.hpp"

#include <cmath>
#include <numbers>

namespace dirmh {

namespace {

void check_shape(const ProposalShape& shape) {
  if (!(shape.s > 0.0) || !(shape.t > 0.0) || !(shape.h >= 0.0) ||
      !std::isfinite(shape.s) || !std::isfinite(shape.t) || !std::isfinite(shape.h)) {
    throw std::invalid_argument("proposal shape requires h >= 0, s > 0, t > 0");
  }
}

// Proposal mean with the shared degenerate-direction rule: no drift when the
// gradient is (near) zero, and `h == 0` short-circuits so that zero-drift
// kernels reproduce x bit for bit.
Eigen::VectorXd proposal_mean(const Eigen::VectorXd& x, const Eigen::VectorXd& grad,
                              const ProposalShape& shape, bool degenerate) {
  if (degenerate || shape.h == 0.0) return x;
  return x + shape.h * grad;
}

}  // namespace

Direction unit_gradient(const Eigen::VectorXd& grad) {
  if (!grad.allFinite()) {
    throw InvalidGradient("gradient has non-finite entries");
  }
  Direction dir;
  const double norm = grad.norm();
  if (norm < kGradEps) {
    dir.degenerate = true;
    dir.g = Eigen::VectorXd::Zero(grad.size());
    return dir;
  }
  dir.degenerate = false;
  dir.g = grad / norm;
  return dir;
}

Eigen::MatrixXd covariance_matrix(const Direction& dir, const ProposalShape& shape) {
  check_shape(shape);
  if (dir.degenerate) {
    throw DegenerateDirection("covariance_matrix requires a non-degenerate direction");
  }
  const Eigen::Index d = dir.g.size();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(d, d);
  sigma.noalias() += (shape.s - 1.0) * dir.g * dir.g.transpose();
  return shape.t * sigma;
}

double quadratic_form(const Eigen::VectorXd& v, const Direction& dir,
                      const ProposalShape& shape) {
  check_shape(shape);
  if (dir.degenerate) {
    return v.squaredNorm() / shape.t;
  }
  const double along = dir.g.dot(v);
  return (v.squaredNorm() + (1.0 / shape.s - 1.0) * along * along) / shape.t;
}

Eigen::VectorXd sample_proposal(std::mt19937_64& rng, const Eigen::VectorXd& x,
                                const Eigen::VectorXd& grad,
                                const ProposalShape& shape) {
  check_shape(shape);
  const Direction dir = unit_gradient(grad);
  const Eigen::Index d = x.size();
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(d);
  for (Eigen::Index i = 0; i < d; ++i) z[i] = normal(rng);

  Eigen::VectorXd y = proposal_mean(x, grad, shape, dir.degenerate);
  const double root_t = std::sqrt(shape.t);
  if (!dir.degenerate && shape.s != 1.0) {
    // sqrt(t) * (I + (sqrt(s) - 1) g g^T) z has covariance t (I + (s-1) g g^T).
    z += (std::sqrt(shape.s) - 1.0) * dir.g.dot(z) * dir.g;
  }
  y += root_t * z;
  return y;
}

double proposal_log_density(const Eigen::VectorXd& from,
                            const Eigen::VectorXd& grad_at_from,
                            const Eigen::VectorXd& to,
                            const ProposalShape& shape) {
  check_shape(shape);
  const Direction dir = unit_gradient(grad_at_from);
  const Eigen::Index d = from.size();
  const Eigen::VectorXd v = to - proposal_mean(from, grad_at_from, shape, dir.degenerate);

  double log_det = static_cast<double>(d) * std::log(shape.t);
  if (!dir.degenerate) log_det += std::log(shape.s);

  const double quad = quadratic_form(v, dir, shape);
  return -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi) -
         0.5 * log_det - 0.5 * quad;
}

Eigen::MatrixXd orthonormal_completion(const Direction& dir) {
  if (dir.degenerate) {
    throw DegenerateDirection("orthonormal_completion requires a non-degenerate direction");
  }
  const Eigen::Index d = dir.g.size();
  Eigen::MatrixXd basis(d, d);
  basis.col(0) = dir.g;

  // Skip the standard basis vector most parallel to g, keep the rest in order.
  Eigen::Index skip = 0;
  dir.g.cwiseAbs().maxCoeff(&skip);

  Eigen::Index col = 1;
  for (Eigen::Index j = 0; j < d && col < d; ++j) {
    if (j == skip) continue;
    Eigen::VectorXd v = Eigen::VectorXd::Unit(d, j);
    // Two projection passes for numerical orthogonality.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index k = 0; k < col; ++k) {
        v -= basis.col(k).dot(v) * basis.col(k);
      }
    }
    const double norm = v.norm();
    if (norm < 1e-8) {
      throw OracleFailure("Gram-Schmidt column collapsed");
    }
    basis.col(col++) = v / norm;
  }
  if (col != d) {
    throw OracleFailure("Gram-Schmidt produced too few columns");
  }
  return basis;
}

}  // namespace dirmh
