#include "dirmh/diagnostics.hpp"

#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "dirmh/kernels.hpp"
#include "dirmh/targets.hpp"
#include "test_util.hpp"

using dirmh::KernelConfig;

namespace {

Eigen::VectorXd make_series(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<long>(values.size()));
  long i = 0;
  for (const double value : values) v[i++] = value;
  return v;
}

Eigen::VectorXd alternating(long n) {
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i) v[i] = (i % 2 == 0) ? 1.0 : -1.0;
  return v;
}

Eigen::VectorXd iid_normals(long n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (long i = 0; i < n; ++i) v[i] = normal(rng);
  return v;
}

Eigen::VectorXd ar1(long n, double rho, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(n);
  v[0] = normal(rng);
  const double innovation = std::sqrt(1.0 - rho * rho);
  for (long i = 1; i < n; ++i) v[i] = rho * v[i - 1] + innovation * normal(rng);
  return v;
}

// 1-d heavy-tailed density f(x) = 1 / (1 + x^2): no exponential moments.
class HeavyTailTarget final : public dirmh::TargetDensity {
 public:
  int dim() const override { return 1; }
  double log_density(const Eigen::VectorXd& x) const override {
    return -std::log1p(x[0] * x[0]);
  }
  Eigen::VectorXd grad_log_density(const Eigen::VectorXd& x) const override {
    Eigen::VectorXd g(1);
    g[0] = -2.0 * x[0] / (1.0 + x[0] * x[0]);
    return g;
  }
};

}  // namespace

TEST_CASE("autocorrelation: frozen lags of 1,2,3,4") {
  const Eigen::VectorXd series = make_series({1.0, 2.0, 3.0, 4.0});
  CHECK(dirmh::autocorrelation(series, 0) == 1.0);
  CHECK(dirmh::autocorrelation(series, 1) == 0.25);
  CHECK(dirmh::autocorrelation(series, 2) == -0.3);
  CHECK(dirmh::autocorrelation(series, 3) == -0.45);

  CHECK_THROWS_AS(dirmh::autocorrelation(series, -1), std::invalid_argument);
  CHECK_THROWS_AS(dirmh::autocorrelation(series, 4), dirmh::InsufficientData);
  CHECK_THROWS_AS(dirmh::autocorrelation(Eigen::VectorXd::Ones(5), 1),
                  dirmh::ConstantSeries);
}

TEST_CASE("iact: alternating series stops at the first lag") {
  const dirmh::IactEstimate est = dirmh::iact(alternating(12));
  CHECK(est.value == 1.0);
  CHECK_FALSE(est.truncated);

  CHECK_THROWS_AS(dirmh::iact(alternating(8)), dirmh::InsufficientData);
  CHECK_THROWS_AS(dirmh::iact(Eigen::VectorXd::Zero(20)), dirmh::ConstantSeries);
}

TEST_CASE("iact: flags truncation when no early lag drops below the cutoff") {
  // Hand-tuned so every lag-1..5 autocorrelation sits just above 0.05
  // (0.0535..0.0623); the negative mass required by mean-centering lives
  // entirely in lags > n/2, so the sum is capped at n/2 and flagged.
  const Eigen::VectorXd series = make_series(
      {2.7, 3.16, -0.7, -0.05, 0.23, 1.13, -0.9, -4.0, 0.99, -2.55});
  for (int lag = 1; lag <= 5; ++lag) {
    CHECK(dirmh::autocorrelation(series, lag) >= 0.05);
  }
  const dirmh::IactEstimate est = dirmh::iact(series);
  CHECK(est.truncated);
  CHECK(est.value == doctest::Approx(1.557704925664587).epsilon(1e-12));
}

TEST_CASE("iact calibration on i.i.d. and AR(1) series") {
  const dirmh::IactEstimate iid = dirmh::iact(iid_normals(100000, 80));
  CHECK(iid.value > 0.9);
  CHECK(iid.value < 1.2);

  const dirmh::IactEstimate correlated = dirmh::iact(ar1(100000, 0.5, 81));
  CHECK(correlated.value > 2.7);  // theoretical (1 + rho) / (1 - rho) = 3
  CHECK(correlated.value < 3.3);
}

TEST_CASE("batch_means_variance: frozen 6-point example") {
  const Eigen::VectorXd series = make_series({1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  // Batches (1,2), (3,4), (5,6): means 1.5, 3.5, 5.5 -> 2 * Var = 2 * 4 = 8.
  CHECK(dirmh::batch_means_variance(series, 2) == 8.0);

  CHECK_THROWS_AS(dirmh::batch_means_variance(series, 0), std::invalid_argument);
  CHECK_THROWS_AS(dirmh::batch_means_variance(series, 4), dirmh::InsufficientData);
}

TEST_CASE("ess_univariate: frozen value and i.i.d. calibration") {
  // Alternating +-1, n = 12, B = 3: sample var 12/11, batch means +-1/3,
  // asymptotic variance 3 * (4/9) / 3 = 4/9, ESS = 12 * (12/11) / (4/9).
  const double expected = 12.0 * (12.0 / 11.0) / (4.0 / 9.0);
  CHECK(dirmh::ess_univariate(alternating(12), 3) ==
        doctest::Approx(expected).epsilon(1e-12));

  const long n = 100000;
  const double ess = dirmh::ess_univariate(iid_normals(n, 82), dirmh::default_batch_size(n));
  CHECK(ess > 0.85 * static_cast<double>(n));
  CHECK(ess < 1.15 * static_cast<double>(n));

  CHECK_THROWS_AS(dirmh::ess_univariate(Eigen::VectorXd::Ones(100), 10),
                  dirmh::ConstantSeries);
}

TEST_CASE("ess and iact loosely invert each other on AR(1) chains") {
  const long n = 100000;
  const Eigen::VectorXd series = ar1(n, 0.5, 83);
  const double ess = dirmh::ess_univariate(series, dirmh::default_batch_size(n));
  const double tau = dirmh::iact(series).value;
  const double product = ess * tau / static_cast<double>(n);
  CHECK(product > 0.65);
  CHECK(product < 1.35);
}

TEST_CASE("mess: permutation and per-coordinate scale invariance") {
  std::mt19937_64 rng(84);
  const long n = 400;
  Eigen::MatrixXd states(n, 3);
  for (long i = 0; i < n; ++i) states.row(i) = dirmh_test::random_vector(rng, 3);
  const long batch = dirmh::default_batch_size(n);
  const double base = dirmh::mess(states, batch);
  CHECK(base > 0.0);

  Eigen::MatrixXd permuted(n, 3);
  permuted.col(0) = states.col(2);
  permuted.col(1) = states.col(0);
  permuted.col(2) = states.col(1);
  CHECK(dirmh::mess(permuted, batch) == doctest::Approx(base).epsilon(1e-12));

  Eigen::MatrixXd scaled = states;
  scaled.col(1) *= 3.0;
  CHECK(dirmh::mess(scaled, batch) == doctest::Approx(base).epsilon(1e-10));

  CHECK_THROWS_AS(dirmh::mess(Eigen::MatrixXd::Ones(100, 2), 10),
                  dirmh::SingularEstimate);
}

TEST_CASE("msjd: frozen value, invariances, and i.i.d. calibration") {
  Eigen::MatrixXd zigzag(6, 1);
  zigzag << 0.0, 1.0, 0.0, 1.0, 0.0, 1.0;
  CHECK(dirmh::msjd(zigzag) == 1.0);

  std::mt19937_64 rng(85);
  Eigen::MatrixXd states(200, 2);
  for (long i = 0; i < 200; ++i) states.row(i) = dirmh_test::random_vector(rng, 2);
  const double base = dirmh::msjd(states);

  Eigen::MatrixXd shifted = states;
  shifted.rowwise() += Eigen::RowVector2d(5.0, -7.0);
  CHECK(dirmh::msjd(shifted) == doctest::Approx(base).epsilon(1e-12));
  CHECK(dirmh::msjd(2.0 * states) == doctest::Approx(4.0 * base).epsilon(1e-12));

  Eigen::MatrixXd big(100000, 3);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::mt19937_64 rng2(86);
  for (long i = 0; i < big.rows(); ++i) {
    for (long j = 0; j < 3; ++j) big(i, j) = normal(rng2);
  }
  const double jump = dirmh::msjd(big);  // E |X - Y|^2 = 2d = 6
  CHECK(jump > 5.7);
  CHECK(jump < 6.3);

  CHECK_THROWS_AS(dirmh::msjd(Eigen::MatrixXd::Zero(1, 2)), dirmh::InsufficientData);
}

TEST_CASE("default_batch_size is floor(sqrt(n))") {
  CHECK(dirmh::default_batch_size(100) == 10);
  CHECK(dirmh::default_batch_size(99) == 9);
  CHECK(dirmh::default_batch_size(10000) == 100);
  CHECK(dirmh::default_batch_size(1) == 1);
}

TEST_CASE("drift ratio: tau -> 0 limit and determinism") {
  Eigen::VectorXd mean(2);
  mean << 0.0, 0.0;
  const dirmh::GaussianTarget target =
      dirmh::gaussian_target(mean, Eigen::MatrixXd::Identity(2, 2));
  const KernelConfig config = KernelConfig::rwmh(0.25);
  Eigen::VectorXd x(2);
  x << 2.0, 0.0;

  const dirmh::DriftEstimate tiny =
      dirmh::drift_ratio_estimate(target, config, x, 1e-8, 2000, 1);
  CHECK(tiny.mean > 1.0 - 1e-6);
  CHECK(tiny.mean < 1.0 + 1e-6);

  const dirmh::DriftEstimate a = dirmh::drift_ratio_estimate(target, config, x, 0.1, 500, 7);
  const dirmh::DriftEstimate b = dirmh::drift_ratio_estimate(target, config, x, 0.1, 500, 7);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  const dirmh::DriftEstimate c = dirmh::drift_ratio_estimate(target, config, x, 0.1, 500, 8);
  CHECK(a.mean != c.mean);

  CHECK_THROWS_AS(dirmh::drift_ratio_estimate(target, config, x, 0.0, 100, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(dirmh::drift_ratio_estimate(target, config, x, 0.1, 1, 1),
                  std::invalid_argument);
}

TEST_CASE("drift ratio contracts in a light tail and not in a heavy one") {
  Eigen::VectorXd mean(2);
  mean << 0.0, 0.0;
  const dirmh::GaussianTarget gaussian =
      dirmh::gaussian_target(mean, Eigen::MatrixXd::Identity(2, 2));
  Eigen::VectorXd far(2);
  far << 20.0, 0.0;

  // Small drift step keeps the reverse proposal density healthy in the tail,
  // so the chain contracts: the estimate sits well below one.
  const dirmh::DriftEstimate contracting = dirmh::drift_ratio_estimate(
      gaussian, KernelConfig::dmh(0.05, 1.0, 0.25), far, 0.1, 4000, 11);
  CHECK(contracting.mean + 3.0 * contracting.std_error < 1.0);

  // Heavy tails admit no exponential drift: a random walk started far out
  // moves either way, so the ratio is not below one.
  const HeavyTailTarget heavy;
  Eigen::VectorXd start(1);
  start << 50.0;
  const dirmh::DriftEstimate flat = dirmh::drift_ratio_estimate(
      heavy, KernelConfig::rwmh(1.0), start, 0.1, 4000, 12);
  CHECK(flat.mean + 3.0 * flat.std_error >= 1.0);
}

TEST_CASE("compute_report bundles the individual estimators") {
  const dirmh::BananaTarget target = dirmh::banana_target(0.03, 2);
  const dirmh::Chain chain = dirmh::run_chain(90, target, KernelConfig::dmh(0.1, 0.5, 1.0),
                                              Eigen::VectorXd::Zero(2), 2000);
  const long batch = 40;
  const dirmh::DiagnosticsReport report = dirmh::compute_report(chain, batch);

  CHECK(report.n == 2000);
  CHECK(report.acceptance_rate == chain.acceptance_rate());
  CHECK(report.msjd == dirmh::msjd(chain.states));
  CHECK(report.mess == dirmh::mess(chain.states, batch));
  for (long j = 0; j < 2; ++j) {
    CHECK(report.iact[j] == dirmh::iact(chain.states.col(j)).value);
    CHECK(report.ess[j] == dirmh::ess_univariate(chain.states.col(j), batch));
  }
}

TEST_CASE("compute_report without flags falls back to the move fraction") {
  Eigen::MatrixXd states(12, 2);
  for (long i = 0; i < 12; ++i) {
    const double v = static_cast<double>(i / 2);  // pairs of repeated rows
    states(i, 0) = v;
    states(i, 1) = v * v - 3.0;  // varies with v but not affinely
  }
  const dirmh::DiagnosticsReport report = dirmh::compute_report(states, {}, 3);
  // Rows change 5 times out of 11 consecutive pairs (wherever i/2 increments).
  CHECK(report.acceptance_rate == doctest::Approx(5.0 / 11.0).epsilon(1e-15));
}

TEST_CASE("report_to_json renders fixed fields in a frozen layout") {
  dirmh::DiagnosticsReport report;
  report.acceptance_rate = 0.5;
  report.iact = make_series({1.0});
  report.ess = make_series({10.0});
  report.mess = 10.0;
  report.msjd = 1.0;
  report.n = 10;

  const std::string expected =
      "{\n"
      "  \"acceptance_rate\": 0.5,\n"
      "  \"ess\": [\n"
      "    10.0\n"
      "  ],\n"
      "  \"iact\": [\n"
      "    1.0\n"
      "  ],\n"
      "  \"mess\": 10.0,\n"
      "  \"msjd\": 1.0,\n"
      "  \"n\": 10\n"
      "}\n";
  CHECK(dirmh::report_to_json(report) == expected);
}
