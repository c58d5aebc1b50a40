#include "dirmh/targets.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <vector>

namespace dirmh {

namespace {

// Largest Poisson linear predictor passed to exp() without clamping.
constexpr double kPoissonEtaCap = 700.0;

// psi(eta): cumulant function of the family, evaluated stably.
double cumulant(GlmFamily family, double eta, std::atomic<long>* overflow_counter) {
  switch (family) {
    case GlmFamily::kNormal:
      return 0.5 * eta * eta;
    case GlmFamily::kBernoulli:
      // log(1 + e^eta) without overflow for large |eta|.
      return std::max(eta, 0.0) + std::log1p(std::exp(-std::abs(eta)));
    case GlmFamily::kPoisson:
      if (eta > kPoissonEtaCap) {
        if (overflow_counter) overflow_counter->fetch_add(1, std::memory_order_relaxed);
        eta = kPoissonEtaCap;
      }
      return std::exp(eta);
  }
  return 0.0;  // unreachable
}

// psi'(eta): mean function of the family.
double cumulant_prime(GlmFamily family, double eta, std::atomic<long>* overflow_counter) {
  switch (family) {
    case GlmFamily::kNormal:
      return eta;
    case GlmFamily::kBernoulli:
      return eta >= 0.0 ? 1.0 / (1.0 + std::exp(-eta))
                        : std::exp(eta) / (1.0 + std::exp(eta));
    case GlmFamily::kPoisson:
      if (eta > kPoissonEtaCap) {
        if (overflow_counter) overflow_counter->fetch_add(1, std::memory_order_relaxed);
        eta = kPoissonEtaCap;
      }
      return std::exp(eta);
  }
  return 0.0;  // unreachable
}

double dispersion_at(const GlmData& data, int i) {
  return data.dispersion.size() == 0 ? 1.0 : data.dispersion[i];
}

}  // namespace

GaussianTarget::GaussianTarget(Eigen::VectorXd mean, const Eigen::MatrixXd& cov)
    : mean_(std::move(mean)) {
  const Eigen::Index d = mean_.size();
  if (cov.rows() != d || cov.cols() != d) {
    throw InvalidCovariance("covariance shape does not match the mean");
  }
  if (!cov.allFinite() || !cov.isApprox(cov.transpose(), 1e-12)) {
    throw InvalidCovariance("covariance must be finite and symmetric");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw InvalidCovariance("covariance is not positive definite");
  }
  precision_ = llt.solve(Eigen::MatrixXd::Identity(d, d));
}

double GaussianTarget::log_density(const Eigen::VectorXd& x) const {
  const Eigen::VectorXd r = x - mean_;
  return -0.5 * r.dot(precision_ * r);
}

Eigen::VectorXd GaussianTarget::grad_log_density(const Eigen::VectorXd& x) const {
  return -precision_ * (x - mean_);
}

GaussianTarget gaussian_target(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
  return GaussianTarget(mean, cov);
}

BananaTarget::BananaTarget(double b, int dim) : b_(b), dim_(dim) {
  if (!(b > 0.0) || dim < 2) {
    throw std::invalid_argument("banana target requires b > 0 and dim >= 2");
  }
}

double BananaTarget::log_density(const Eigen::VectorXd& x) const {
  const double ridge = x[1] + b_ * x[0] * x[0] - 100.0 * b_;
  double value = -x[0] * x[0] / 200.0 - 0.5 * ridge * ridge;
  for (int j = 2; j < dim_; ++j) value -= 0.5 * x[j] * x[j];
  return value;
}

Eigen::VectorXd BananaTarget::grad_log_density(const Eigen::VectorXd& x) const {
  Eigen::VectorXd grad(dim_);
  const double ridge = x[1] + b_ * x[0] * x[0] - 100.0 * b_;
  grad[0] = -x[0] / 100.0 - 2.0 * b_ * x[0] * ridge;
  grad[1] = -ridge;
  for (int j = 2; j < dim_; ++j) grad[j] = -x[j];
  return grad;
}

BananaTarget banana_target(double b, int dim) { return BananaTarget(b, dim); }

std::string family_name(GlmFamily family) {
  switch (family) {
    case GlmFamily::kNormal: return "normal";
    case GlmFamily::kBernoulli: return "bernoulli";
    case GlmFamily::kPoisson: return "poisson";
  }
  return "unknown";
}

GlmFamily family_from_name(const std::string& name) {
  if (name == "normal") return GlmFamily::kNormal;
  if (name == "bernoulli") return GlmFamily::kBernoulli;
  if (name == "poisson") return GlmFamily::kPoisson;
  throw ConfigError("family", "unknown GLM family '" + name + "'");
}

void GlmData::validate() const {
  if (X.rows() == 0 || X.cols() == 0) {
    throw ConfigError("glm", "design matrix must be non-empty");
  }
  if (y.size() != X.rows()) {
    throw ConfigError("glm", "response length does not match the design matrix");
  }
  if (dispersion.size() != 0 && dispersion.size() != X.rows()) {
    throw ConfigError("glm", "dispersion length does not match the design matrix");
  }
  for (Eigen::Index i = 0; i < dispersion.size(); ++i) {
    if (!(dispersion[i] > 0.0)) {
      throw ConfigError("glm", "dispersion entries must be positive");
    }
  }
  if (!(v_beta > 0.0) || !(v_u > 0.0)) {
    throw ConfigError("glm", "prior variances must be positive");
  }
  if (!X.allFinite() || !y.allFinite()) {
    throw ConfigError("glm", "data must be finite");
  }
  if (family == GlmFamily::kBernoulli) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y[i] != 0.0 && y[i] != 1.0) {
        throw ConfigError("glm", "bernoulli responses must be 0 or 1");
      }
    }
  }
  if (family == GlmFamily::kPoisson) {
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      if (y[i] < 0.0 || y[i] != std::floor(y[i])) {
        throw ConfigError("glm", "poisson responses must be non-negative integers");
      }
    }
  }
}

double glm_log_posterior(const GlmData& data, const Eigen::VectorXd& beta, double u,
                         std::atomic<long>* overflow_counter) {
  const Eigen::VectorXd eta = (data.X * beta).array() + u;
  double value = 0.0;
  for (int i = 0; i < data.n(); ++i) {
    value += (data.y[i] * eta[i] - cumulant(data.family, eta[i], overflow_counter)) /
             dispersion_at(data, i);
  }
  value -= beta.squaredNorm() / (2.0 * data.v_beta);
  value -= u * u / (2.0 * data.v_u);
  return value;
}

Eigen::VectorXd glm_grad_log_posterior(const GlmData& data, const Eigen::VectorXd& beta,
                                       double u, std::atomic<long>* overflow_counter) {
  const Eigen::VectorXd eta = (data.X * beta).array() + u;
  Eigen::VectorXd weights(data.n());
  for (int i = 0; i < data.n(); ++i) {
    weights[i] = (data.y[i] - cumulant_prime(data.family, eta[i], overflow_counter)) /
                 dispersion_at(data, i);
  }
  Eigen::VectorXd grad(data.p() + 1);
  grad.head(data.p()) = data.X.transpose() * weights - beta / data.v_beta;
  grad[data.p()] = weights.sum() - u / data.v_u;
  return grad;
}

GlmPosterior::GlmPosterior(GlmData data) : data_(std::move(data)) { data_.validate(); }

double GlmPosterior::log_density(const Eigen::VectorXd& state) const {
  return glm_log_posterior(data_, state.head(data_.p()), state[data_.p()],
                           &overflow_count_);
}

Eigen::VectorXd GlmPosterior::grad_log_density(const Eigen::VectorXd& state) const {
  return glm_grad_log_posterior(data_, state.head(data_.p()), state[data_.p()],
                                &overflow_count_);
}

Eigen::VectorXd numeric_gradient(const TargetDensity& target, const Eigen::VectorXd& x,
                                 double step) {
  if (!(step > 0.0)) {
    throw std::invalid_argument("finite-difference step must be positive");
  }
  Eigen::VectorXd grad(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    probe[j] = x[j] + step;
    const double up = target.log_density(probe);
    probe[j] = x[j] - step;
    const double down = target.log_density(probe);
    probe[j] = x[j];
    grad[j] = (up - down) / (2.0 * step);
  }
  return grad;
}

GlmData load_glm_csv(const std::string& path, GlmFamily family, double dispersion,
                     double v_beta, double v_u) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open GLM data file: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw ConfigError("csv", "empty GLM data file: " + path);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  std::stringstream head(line);
  std::string cell;
  while (std::getline(head, cell, ',')) header.push_back(cell);
  if (header.empty() || header[0] != "y") {
    throw ConfigError("csv", "first column must be named 'y'");
  }
  const int p = static_cast<int>(header.size()) - 1;
  if (p < 1) {
    throw ConfigError("csv", "need at least one predictor column");
  }
  for (int j = 1; j <= p; ++j) {
    if (header[j] != "x" + std::to_string(j)) {
      throw ConfigError("csv", "predictor columns must be named x1..xp in order");
    }
  }

  std::vector<std::vector<double>> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        throw ConfigError("csv", "non-numeric cell at line " + std::to_string(line_no));
      }
      if (used != cell.size()) {
        throw ConfigError("csv", "non-numeric cell at line " + std::to_string(line_no));
      }
      row.push_back(value);
    }
    if (static_cast<int>(row.size()) != p + 1) {
      throw ConfigError("csv", "wrong column count at line " + std::to_string(line_no));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) {
    throw ConfigError("csv", "no data rows in " + path);
  }

  GlmData data;
  data.family = family;
  data.v_beta = v_beta;
  data.v_u = v_u;
  const int n = static_cast<int>(rows.size());
  data.X.resize(n, p);
  data.y.resize(n);
  for (int i = 0; i < n; ++i) {
    data.y[i] = rows[i][0];
    for (int j = 0; j < p; ++j) data.X(i, j) = rows[i][j + 1];
  }
  data.dispersion = Eigen::VectorXd::Constant(n, dispersion);
  data.validate();
  return data;
}

GlmData simulate_glm_data(std::uint64_t seed, int n, int p, GlmFamily family,
                          double dispersion, double v_beta, double v_u) {
  if (n < 1 || p < 1) {
    throw std::invalid_argument("simulate_glm_data requires n >= 1, p >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(-1.0, 1.0);

  GlmData data;
  data.family = family;
  data.v_beta = v_beta;
  data.v_u = v_u;
  data.X.resize(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) data.X(i, j) = normal(rng);
  }
  Eigen::VectorXd beta(p);
  for (int j = 0; j < p; ++j) beta[j] = uniform(rng);
  const double u = uniform(rng);
  const Eigen::VectorXd eta = (data.X * beta).array() + u;

  data.y.resize(n);
  for (int i = 0; i < n; ++i) {
    switch (family) {
      case GlmFamily::kNormal:
        data.y[i] = eta[i] + normal(rng);
        break;
      case GlmFamily::kBernoulli: {
        std::bernoulli_distribution flip(cumulant_prime(GlmFamily::kBernoulli, eta[i], nullptr));
        data.y[i] = flip(rng) ? 1.0 : 0.0;
        break;
      }
      case GlmFamily::kPoisson: {
        std::poisson_distribution<long> draw(std::exp(std::min(eta[i], 30.0)));
        data.y[i] = static_cast<double>(draw(rng));
        break;
      }
    }
  }
  data.dispersion = Eigen::VectorXd::Constant(n, dispersion);
  data.validate();
  return data;
}

}  // namespace dirmh
