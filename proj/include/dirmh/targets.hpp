#pragma once

#include <Eigen/Core>
#include <atomic>
#include <cstdint>
#include <string>

#include "dirmh/errors.hpp"

namespace dirmh {

// Unnormalized log target density with analytic gradient. Implementations are
// immutable after construction and safe to evaluate from multiple threads.
class TargetDensity {
 public:
  virtual ~TargetDensity() = default;
  virtual int dim() const = 0;
  virtual double log_density(const Eigen::VectorXd& x) const = 0;
  virtual Eigen::VectorXd grad_log_density(const Eigen::VectorXd& x) const = 0;
};

// Multivariate normal N(mean, cov), up to an additive constant.
class GaussianTarget final : public TargetDensity {
 public:
  GaussianTarget(Eigen::VectorXd mean, const Eigen::MatrixXd& cov);

  int dim() const override { return static_cast<int>(mean_.size()); }
  double log_density(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd grad_log_density(const Eigen::VectorXd& x) const override;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd precision_;
};

// Throws InvalidCovariance unless `cov` is symmetric positive definite.
GaussianTarget gaussian_target(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);

// Banana-shaped density on R^d (d >= 2) with curvature parameter b > 0:
//   log f(x) = -x1^2/200 - (x2 + b x1^2 - 100 b)^2 / 2 - (x3^2 + ... + xd^2) / 2.
class BananaTarget final : public TargetDensity {
 public:
  BananaTarget(double b, int dim);

  double bananicity() const { return b_; }
  int dim() const override { return dim_; }
  double log_density(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd grad_log_density(const Eigen::VectorXd& x) const override;

 private:
  double b_;
  int dim_;
};

BananaTarget banana_target(double b, int dim);

enum class GlmFamily { kNormal, kBernoulli, kPoisson };

std::string family_name(GlmFamily family);
GlmFamily family_from_name(const std::string& name);  // throws ConfigError

// Data and priors for an exponential-family GLM with identity link and a
// shared intercept u:
//   eta_i = x_i^T beta + u,
//   log posterior = sum_i [y_i eta_i - psi(eta_i)] / a_i
//                   - |beta|^2 / (2 v_beta) - u^2 / (2 v_u).
struct GlmData {
  Eigen::MatrixXd X;           // n x p design matrix
  Eigen::VectorXd y;           // n responses
  GlmFamily family = GlmFamily::kNormal;
  Eigen::VectorXd dispersion;  // a(phi) per observation; empty means all ones
  double v_beta = 100.0;
  double v_u = 100.0;

  int n() const { return static_cast<int>(X.rows()); }
  int p() const { return static_cast<int>(X.cols()); }
  // Throws ConfigError on shape mismatches or family-incompatible responses.
  void validate() const;
};

// Log posterior and its gradient over the stacked state (beta, u).
// `overflow_counter`, when non-null, is incremented every time a Poisson
// linear predictor had to be clamped before exponentiation.
double glm_log_posterior(const GlmData& data, const Eigen::VectorXd& beta, double u,
                         std::atomic<long>* overflow_counter = nullptr);
Eigen::VectorXd glm_grad_log_posterior(const GlmData& data, const Eigen::VectorXd& beta,
                                       double u,
                                       std::atomic<long>* overflow_counter = nullptr);

// TargetDensity adapter: the sampled state is the (p+1)-vector (beta, u).
class GlmPosterior final : public TargetDensity {
 public:
  explicit GlmPosterior(GlmData data);

  int dim() const override { return data_.p() + 1; }
  double log_density(const Eigen::VectorXd& state) const override;
  Eigen::VectorXd grad_log_density(const Eigen::VectorXd& state) const override;

  const GlmData& data() const { return data_; }
  long overflow_count() const { return overflow_count_.load(); }

 private:
  GlmData data_;
  mutable std::atomic<long> overflow_count_{0};
};

// Central finite differences, one coordinate at a time.
Eigen::VectorXd numeric_gradient(const TargetDensity& target, const Eigen::VectorXd& x,
                                 double step = 1e-5);

// Reads GLM data from CSV with header row `y,x1,...,xp`. Throws IoError on
// filesystem problems and ConfigError on malformed content.
GlmData load_glm_csv(const std::string& path, GlmFamily family,
                     double dispersion = 1.0, double v_beta = 100.0,
                     double v_u = 100.0);

// Simulated benchmark data: predictors i.i.d. N(0,1), true coefficients and
// intercept Uniform(-1,1), responses drawn from the family at eta with
// standard normal noise for the normal family.
GlmData simulate_glm_data(std::uint64_t seed, int n, int p, GlmFamily family,
                          double dispersion = 1.0, double v_beta = 100.0,
                          double v_u = 100.0);

}  // namespace dirmh
