#include "dirmh/diagnostics.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace dirmh {

namespace {

// Threshold below which the autocorrelation sum is cut off.
constexpr double kAcfCutoff = 0.05;

double series_mean(const Eigen::VectorXd& series) { return series.mean(); }

// Biased (1/n) autocovariance at the given lag around a precomputed mean.
double autocovariance(const Eigen::VectorXd& series, long lag, double mean) {
  const long n = series.size();
  double sum = 0.0;
  for (long t = 0; t + lag < n; ++t) {
    sum += (series[t] - mean) * (series[t + lag] - mean);
  }
  return sum / static_cast<double>(n);
}

// splitmix64 finalizer; used to derive independent per-sample seeds.
std::uint64_t mix_seed(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

double autocorrelation(const Eigen::VectorXd& series, long lag) {
  const long n = series.size();
  if (lag < 0) throw std::invalid_argument("lag must be non-negative");
  if (lag >= n) throw InsufficientData("lag must be smaller than the series length");
  const double mean = series_mean(series);
  const double c0 = autocovariance(series, 0, mean);
  if (!(c0 > 0.0)) throw ConstantSeries("series has zero variance");
  return autocovariance(series, lag, mean) / c0;
}

IactEstimate iact(const Eigen::VectorXd& series) {
  const long n = series.size();
  if (n < 10) throw InsufficientData("iact needs at least 10 samples");
  const double mean = series_mean(series);
  const double c0 = autocovariance(series, 0, mean);
  if (!(c0 > 0.0)) throw ConstantSeries("series has zero variance");

  const long cap = n / 2;
  IactEstimate estimate;
  double sum = 0.0;
  estimate.truncated = true;
  for (long k = 1; k <= cap; ++k) {
    const double rho = autocovariance(series, k, mean) / c0;
    if (rho < kAcfCutoff) {
      estimate.truncated = false;
      break;
    }
    sum += rho;
  }
  estimate.value = 1.0 + 2.0 * sum;
  return estimate;
}

double batch_means_variance(const Eigen::VectorXd& series, long batch_size) {
  const long n = series.size();
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  const long m = n / batch_size;
  if (m < 2) throw InsufficientData("batch means need at least 2 complete batches");

  Eigen::VectorXd means(m);
  for (long j = 0; j < m; ++j) {
    means[j] = series.segment(j * batch_size, batch_size).mean();
  }
  const double grand = means.mean();
  double ss = 0.0;
  for (long j = 0; j < m; ++j) {
    const double d = means[j] - grand;
    ss += d * d;
  }
  return static_cast<double>(batch_size) * ss / static_cast<double>(m - 1);
}

double ess_univariate(const Eigen::VectorXd& series, long batch_size) {
  const long n = series.size();
  if (n < 2) throw InsufficientData("ess needs at least 2 samples");
  const double mean = series_mean(series);
  double ss = 0.0;
  for (long t = 0; t < n; ++t) {
    const double d = series[t] - mean;
    ss += d * d;
  }
  const double sample_var = ss / static_cast<double>(n - 1);
  if (!(sample_var > 0.0)) throw ConstantSeries("series has zero variance");
  const double asym_var = batch_means_variance(series, batch_size);
  if (!(asym_var > 0.0) || !std::isfinite(asym_var)) {
    throw SingularEstimate("batch means variance is not positive");
  }
  return static_cast<double>(n) * sample_var / asym_var;
}

double mess(const Eigen::MatrixXd& chain, long batch_size) {
  const long n = chain.rows();
  const long p = chain.cols();
  if (p < 1) throw std::invalid_argument("chain must have at least one column");
  if (batch_size < 1) throw std::invalid_argument("batch size must be >= 1");
  if (n < 2) throw InsufficientData("mess needs at least 2 samples");
  const long m = n / batch_size;
  if (m < 2) throw InsufficientData("batch means need at least 2 complete batches");

  const Eigen::RowVectorXd mean = chain.colwise().mean();
  Eigen::MatrixXd centered = chain.rowwise() - mean;
  const Eigen::MatrixXd lambda =
      centered.transpose() * centered / static_cast<double>(n - 1);

  Eigen::MatrixXd batch_means(m, p);
  for (long j = 0; j < m; ++j) {
    batch_means.row(j) = chain.middleRows(j * batch_size, batch_size).colwise().mean();
  }
  const Eigen::RowVectorXd grand = batch_means.colwise().mean();
  Eigen::MatrixXd centered_means = batch_means.rowwise() - grand;
  const Eigen::MatrixXd sigma = static_cast<double>(batch_size) *
                                (centered_means.transpose() * centered_means) /
                                static_cast<double>(m - 1);

  const double det_lambda = lambda.determinant();
  const double det_sigma = sigma.determinant();
  if (!(det_lambda > 0.0) || !std::isfinite(det_lambda)) {
    throw SingularEstimate("sample covariance is singular");
  }
  if (!(det_sigma > 0.0) || !std::isfinite(det_sigma)) {
    throw SingularEstimate("batch means covariance is singular");
  }
  return static_cast<double>(n) *
         std::pow(det_lambda / det_sigma, 1.0 / static_cast<double>(p));
}

double msjd(const Eigen::MatrixXd& chain) {
  const long n = chain.rows();
  if (n < 2) throw InsufficientData("msjd needs at least 2 samples");
  double sum = 0.0;
  for (long i = 0; i + 1 < n; ++i) {
    sum += (chain.row(i + 1) - chain.row(i)).squaredNorm();
  }
  return sum / static_cast<double>(n - 1);
}

long default_batch_size(long n) {
  return static_cast<long>(std::floor(std::sqrt(static_cast<double>(n))));
}

DriftEstimate drift_ratio_estimate(const TargetDensity& target,
                                   const KernelConfig& config,
                                   const Eigen::VectorXd& x, double tau, long n_mc,
                                   std::uint64_t seed) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (n_mc < 2) throw std::invalid_argument("n_mc must be >= 2");
  config.validate();

  const double base_norm = x.norm();
  const std::uint64_t stream_base = mix_seed(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (long i = 0; i < n_mc; ++i) {
    std::mt19937_64 rng(mix_seed(stream_base + static_cast<std::uint64_t>(i)));
    const StepResult step = mh_step(rng, target, x, config);
    const double value = std::exp(tau * (step.next.norm() - base_norm));
    sum += value;
    sum_sq += value * value;
  }
  DriftEstimate estimate;
  const double n = static_cast<double>(n_mc);
  estimate.mean = sum / n;
  const double var = std::max(0.0, (sum_sq - n * estimate.mean * estimate.mean) / (n - 1.0));
  estimate.std_error = std::sqrt(var / n);
  return estimate;
}

DiagnosticsReport compute_report(const Eigen::MatrixXd& states,
                                 const std::vector<std::uint8_t>& accepted,
                                 long batch_size) {
  const long n = states.rows();
  const long p = states.cols();
  if (batch_size <= 0) batch_size = default_batch_size(n);

  DiagnosticsReport report;
  report.n = n;
  if (accepted.empty()) {
    // Recover the rate from the move fraction between consecutive rows.
    long moves = 0;
    for (long i = 0; i + 1 < n; ++i) {
      if (states.row(i + 1) != states.row(i)) ++moves;
    }
    report.acceptance_rate =
        n > 1 ? static_cast<double>(moves) / static_cast<double>(n - 1) : 0.0;
  } else {
    long count = 0;
    for (const auto flag : accepted) count += flag;
    report.acceptance_rate = static_cast<double>(count) / static_cast<double>(accepted.size());
  }

  report.iact.resize(p);
  report.ess.resize(p);
  for (long j = 0; j < p; ++j) {
    report.iact[j] = iact(states.col(j)).value;
    report.ess[j] = ess_univariate(states.col(j), batch_size);
  }
  report.mess = mess(states, batch_size);
  report.msjd = msjd(states);
  return report;
}

DiagnosticsReport compute_report(const Chain& chain, long batch_size) {
  return compute_report(chain.states, chain.accepted, batch_size);
}

std::string report_to_json(const DiagnosticsReport& report) {
  nlohmann::json doc;
  doc["acceptance_rate"] = report.acceptance_rate;
  doc["iact"] = std::vector<double>(report.iact.data(), report.iact.data() + report.iact.size());
  doc["ess"] = std::vector<double>(report.ess.data(), report.ess.data() + report.ess.size());
  doc["mess"] = report.mess;
  doc["msjd"] = report.msjd;
  doc["n"] = report.n;
  return doc.dump(2) + "\n";
}

}  // namespace dirmh
