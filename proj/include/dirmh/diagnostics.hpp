#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "dirmh/kernels.hpp"

namespace dirmh {

// Lag-k autocorrelation with the biased (1/n) covariance normalizer.
// Throws ConstantSeries when the series has zero variance and
// InsufficientData when lag >= n.
double autocorrelation(const Eigen::VectorXd& series, long lag);

struct IactEstimate {
  double value = 1.0;
  // True when no autocorrelation below 0.05 was found up to lag n/2,
  // so the sum was truncated at the cap.
  bool truncated = false;
};

// Integrated autocorrelation time 1 + 2 * sum_{i=1..l} acf(i), where l is the
// last lag before the first autocorrelation below 0.05; capped at n/2.
IactEstimate iact(const Eigen::VectorXd& series);

// Nonoverlapping batch means estimate of the asymptotic variance:
// batch_size * sample variance of the batch means. Uses the first
// m = floor(n / batch_size) complete batches; requires m >= 2.
double batch_means_variance(const Eigen::VectorXd& series, long batch_size);

// n * (sample variance) / (batch means variance).
double ess_univariate(const Eigen::VectorXd& series, long batch_size);

// Multivariate effective sample size
//   n * (det Lambda / det Sigma)^(1/p)
// with Lambda the sample covariance and Sigma the multivariate batch means
// estimate. Throws SingularEstimate when either determinant is non-positive
// or non-finite.
double mess(const Eigen::MatrixXd& chain, long batch_size);

// Mean squared jumping distance: mean over consecutive rows of |x_{i+1}-x_i|^2.
double msjd(const Eigen::MatrixXd& chain);

// Default diagnostics batch size floor(sqrt(n)).
long default_batch_size(long n);

struct DriftEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

// Monte-Carlo probe of the geometric drift ratio E[exp(tau (|X1| - |x|))]
// for one MH transition started at x, using n_mc independent streams derived
// from `seed`. Values below 1 indicate inward drift of exp(tau |x|).
DriftEstimate drift_ratio_estimate(const TargetDensity& target,
                                   const KernelConfig& config,
                                   const Eigen::VectorXd& x, double tau, long n_mc,
                                   std::uint64_t seed = 0);

struct DiagnosticsReport {
  double acceptance_rate = 0.0;
  Eigen::VectorXd iact;  // per coordinate
  Eigen::VectorXd ess;   // per coordinate
  double mess = 0.0;
  double msjd = 0.0;
  long n = 0;
};

// Bundles the standard per-chain diagnostics. `accepted` may be empty when
// acceptance flags are unavailable (e.g. when re-reading a chain from disk);
// the rate is then derived from the fraction of moves between consecutive
// rows. batch_size <= 0 selects the default floor(sqrt(n)).
DiagnosticsReport compute_report(const Eigen::MatrixXd& states,
                                 const std::vector<std::uint8_t>& accepted,
                                 long batch_size = 0);
DiagnosticsReport compute_report(const Chain& chain, long batch_size = 0);

// Fixed-field JSON rendering (acceptance_rate, iact, ess, mess, msjd, n).
std::string report_to_json(const DiagnosticsReport& report);

}  // namespace dirmh
