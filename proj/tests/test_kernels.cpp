#include "dirmh/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dirmh/proposal.hpp"
#include "dirmh/targets.hpp"
#include "test_util.hpp"

using dirmh::KernelConfig;
using dirmh::KernelFlavor;
using dirmh_test::random_vector;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Counts evaluations so tests can assert which code paths run.
class CountingTarget final : public dirmh::TargetDensity {
 public:
  explicit CountingTarget(const dirmh::TargetDensity& inner) : inner_(inner) {}
  int dim() const override { return inner_.dim(); }
  double log_density(const Eigen::VectorXd& x) const override {
    ++log_calls;
    return inner_.log_density(x);
  }
  Eigen::VectorXd grad_log_density(const Eigen::VectorXd& x) const override {
    ++grad_calls;
    return inner_.grad_log_density(x);
  }

  mutable long log_calls = 0;
  mutable long grad_calls = 0;

 private:
  const dirmh::TargetDensity& inner_;
};

// Finite only at a single point: every proposal is certainly rejected.
class PointTarget final : public dirmh::TargetDensity {
 public:
  explicit PointTarget(Eigen::VectorXd point) : point_(std::move(point)) {}
  int dim() const override { return static_cast<int>(point_.size()); }
  double log_density(const Eigen::VectorXd& x) const override {
    return (x.array() == point_.array()).all() ? 0.0 : -kInf;
  }
  Eigen::VectorXd grad_log_density(const Eigen::VectorXd&) const override {
    return Eigen::VectorXd::Zero(point_.size());
  }

 private:
  Eigen::VectorXd point_;
};

bool bitwise_equal(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() &&
         (a.array() == b.array()).all();
}

}  // namespace

TEST_CASE("kernel config factories and validation") {
  const KernelConfig rwmh = KernelConfig::rwmh(2.25);
  CHECK(rwmh.flavor == KernelFlavor::kRwmh);
  CHECK(rwmh.shape.h == 0.0);
  CHECK(rwmh.shape.s == 1.0);
  CHECK(rwmh.shape.t == 2.25);
  rwmh.validate();

  const KernelConfig mala = KernelConfig::mala(0.3, 0.09);
  CHECK(mala.flavor == KernelFlavor::kMala);
  CHECK(mala.shape.h == 0.3);
  CHECK(mala.shape.s == 1.0);
  mala.validate();

  const KernelConfig dmh = KernelConfig::dmh(0.1, 0.5, 1.0);
  CHECK(dmh.flavor == KernelFlavor::kDmh);
  dmh.validate();

  KernelConfig bad = KernelConfig::rwmh(1.0);
  bad.shape.h = 0.1;  // random walk must not drift
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = KernelConfig::mala(0.3, 1.0);
  bad.shape.s = 2.0;  // isotropic flavor must keep s = 1
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = KernelConfig::dmh(0.1, 0.5, 1.0);
  bad.shape.t = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

  bad = KernelConfig::dmh(0.1, 0.5, 1.0);
  bad.numeric_grad_step = -1e-5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("reduction law: DMH with h = 0, s = 1 is RWMH bitwise") {
  const dirmh::BananaTarget target = dirmh::banana_target(0.03, 2);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);

  const dirmh::Chain rwmh = dirmh::run_chain(42, target, KernelConfig::rwmh(1.0), x0, 2000);
  const dirmh::Chain dmh =
      dirmh::run_chain(42, target, KernelConfig::dmh(0.0, 1.0, 1.0), x0, 2000);

  CHECK(bitwise_equal(rwmh.states, dmh.states));
  CHECK(rwmh.accepted == dmh.accepted);
}

TEST_CASE("reduction law: DMH with s = 1, t = h^2 is MALA bitwise") {
  const dirmh::BananaTarget target = dirmh::banana_target(0.03, 2);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);
  const double h = 0.35;

  const dirmh::Chain mala =
      dirmh::run_chain(7, target, KernelConfig::mala(h, h * h), x0, 2000);
  const dirmh::Chain dmh =
      dirmh::run_chain(7, target, KernelConfig::dmh(h, 1.0, h * h), x0, 2000);

  CHECK(bitwise_equal(mala.states, dmh.states));
  CHECK(mala.accepted == dmh.accepted);
}

TEST_CASE("run_chain is deterministic under a fixed seed") {
  const dirmh::BananaTarget target = dirmh::banana_target(0.03, 2);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);
  const KernelConfig config = KernelConfig::dmh(0.1, 0.5, 1.0);

  const dirmh::Chain a = dirmh::run_chain(1234, target, config, x0, 500);
  const dirmh::Chain b = dirmh::run_chain(1234, target, config, x0, 500);
  CHECK(bitwise_equal(a.states, b.states));
  CHECK(a.accepted == b.accepted);

  const dirmh::Chain c = dirmh::run_chain(1235, target, config, x0, 500);
  CHECK_FALSE(bitwise_equal(a.states, c.states));
}

TEST_CASE("hastings ratio is exactly antisymmetric for every flavor") {
  const dirmh::BananaTarget target = dirmh::banana_target(0.03, 2);
  const KernelConfig configs[] = {KernelConfig::rwmh(1.0), KernelConfig::mala(0.3, 0.5),
                                  KernelConfig::dmh(0.3, 0.5, 0.7)};
  std::mt19937_64 rng(31);
  for (const KernelConfig& config : configs) {
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::VectorXd x = random_vector(rng, 2, 3.0);
      const Eigen::VectorXd y = random_vector(rng, 2, 3.0);
      const double forward = dirmh::log_hastings_ratio(target, x, y, config);
      const double backward = dirmh::log_hastings_ratio(target, y, x, config);
      CHECK(forward == -backward);
    }

    // One endpoint with an exactly zero gradient (degenerate direction).
    Eigen::VectorXd apex(2);
    apex << 0.0, 3.0;
    REQUIRE(target.grad_log_density(apex).norm() == 0.0);
    const Eigen::VectorXd other = random_vector(rng, 2, 2.0);
    const double forward = dirmh::log_hastings_ratio(target, apex, other, config);
    const double backward = dirmh::log_hastings_ratio(target, other, apex, config);
    CHECK(forward == -backward);
  }
}

TEST_CASE("MALA hastings ratio matches a hand-computed 1-d value") {
  Eigen::VectorXd mean(1);
  mean << 0.0;
  const dirmh::GaussianTarget target =
      dirmh::gaussian_target(mean, Eigen::MatrixXd::Identity(1, 1));
  const double h = 0.1;
  const double t = 0.04;
  const KernelConfig config = KernelConfig::mala(h, t);

  Eigen::VectorXd x(1), y(1);
  x << 0.5;
  y << -0.3;
  // Unnormalized target: log f = -v^2 / 2; proposal N(v + h * (-v), t).
  const auto q = [&](double from, double to) {
    const double m = from - h * from;
    return -0.5 * std::log(2.0 * std::numbers::pi * t) -
           (to - m) * (to - m) / (2.0 * t);
  };
  const double expected =
      (-0.5 * y[0] * y[0]) - (-0.5 * x[0] * x[0]) + q(y[0], x[0]) - q(x[0], y[0]);
  CHECK(dirmh::log_hastings_ratio(target, x, y, config) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("RWMH ratio is the bare log density difference and skips gradients") {
  const dirmh::BananaTarget banana = dirmh::banana_target(0.03, 2);
  const CountingTarget target(banana);
  Eigen::VectorXd x(2), y(2);
  x << 1.0, 2.0;
  y << -0.5, 0.5;
  const double r = dirmh::log_hastings_ratio(target, x, y, KernelConfig::rwmh(1.0));
  CHECK(r == banana.log_density(y) - banana.log_density(x));
  CHECK(target.grad_calls == 0);

  const dirmh::Chain chain =
      dirmh::run_chain(3, target, KernelConfig::rwmh(1.0), Eigen::VectorXd::Zero(2), 200);
  CHECK(target.grad_calls == 0);
  CHECK(chain.states.rows() == 200);
}

TEST_CASE("numeric gradients drive the kernel when requested") {
  const dirmh::BananaTarget target = dirmh::banana_target(0.03, 2);
  KernelConfig analytic = KernelConfig::dmh(0.3, 0.5, 0.7);
  KernelConfig numeric = analytic;
  numeric.numeric_grad_step = 1e-6;

  std::mt19937_64 rng(63);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::VectorXd x = random_vector(rng, 2, 2.0);
    const Eigen::VectorXd y = random_vector(rng, 2, 2.0);
    const double exact = dirmh::log_hastings_ratio(target, x, y, analytic);
    const double approx = dirmh::log_hastings_ratio(target, x, y, numeric);
    CHECK(approx == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("non-finite proposals are rejected without reverse evaluation") {
  Eigen::VectorXd point = Eigen::VectorXd::Zero(2);
  const PointTarget inner(point);
  const CountingTarget target(inner);
  const KernelConfig config = KernelConfig::dmh(0.5, 2.0, 1.0);

  std::mt19937_64 rng(11);
  Eigen::VectorXd x = point;
  dirmh::StepResult step = dirmh::mh_step(rng, target, x, config);
  CHECK_FALSE(step.accepted);
  CHECK(step.log_hastings_ratio == -kInf);
  CHECK((step.next.array() == point.array()).all());

  // Only the start point's gradient was ever needed.
  const dirmh::Chain chain = dirmh::run_chain(11, target, config, point, 50);
  CHECK(target.grad_calls <= 2);  // one per mh_step/run_chain initialization
  for (const auto flag : chain.accepted) CHECK(flag == 0);
  CHECK((chain.states.rowwise() - point.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("each step consumes d normals plus exactly one uniform") {
  const dirmh::BananaTarget target = dirmh::banana_target(0.03, 2);
  const KernelConfig config = KernelConfig::dmh(0.1, 0.5, 1.0);
  Eigen::VectorXd x(2);
  x << 0.3, 2.4;

  std::mt19937_64 rng(2025);
  const dirmh::StepResult step = dirmh::mh_step(rng, target, x, config);

  // Manual replay: proposal draw, then one uniform, nothing else.
  std::mt19937_64 replay(2025);
  const Eigen::VectorXd grad = target.grad_log_density(x);
  const Eigen::VectorXd y = dirmh::sample_proposal(replay, x, grad, config.shape);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(replay);
  const double ratio = dirmh::log_hastings_ratio(target, x, y, config);
  const bool accepted = !std::isnan(ratio) && std::log(u) <= ratio;

  CHECK(step.accepted == accepted);
  CHECK(step.log_hastings_ratio == doctest::Approx(ratio).epsilon(1e-14));
  CHECK((step.next.array() == (accepted ? y : x).array()).all());

  // Both generators sit at the same stream position afterwards.
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  CHECK(uniform(rng) == uniform(replay));

  // The uniform is consumed even on a certain rejection.
  const PointTarget point_target{Eigen::VectorXd::Zero(2)};
  std::mt19937_64 rng_a(5);
  dirmh::mh_step(rng_a, point_target, Eigen::VectorXd::Zero(2),
                 KernelConfig::rwmh(1.0));
  std::mt19937_64 rng_b(5);
  {
    std::normal_distribution<double> normal(0.0, 1.0);
    normal(rng_b);
    normal(rng_b);
    std::uniform_real_distribution<double>(0.0, 1.0)(rng_b);
  }
  CHECK(uniform(rng_a) == uniform(rng_b));
}

TEST_CASE("run_chain burn-in and thinning keep the documented rows") {
  const dirmh::BananaTarget target = dirmh::banana_target(0.03, 2);
  const KernelConfig config = KernelConfig::rwmh(1.0);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);

  const dirmh::Chain full = dirmh::run_chain(77, target, config, x0, 10);
  REQUIRE(full.states.rows() == 10);
  const dirmh::Chain thinned = dirmh::run_chain(77, target, config, x0, 10, 3, 2);
  // Steps 4, 6, 8, 10 survive: (10 - 3 - 1) / 2 + 1 = 4 rows.
  REQUIRE(thinned.states.rows() == 4);
  CHECK(thinned.accepted.size() == 10);
  for (long k = 0; k < 4; ++k) {
    CHECK((thinned.states.row(k).array() == full.states.row(3 + 2 * k).array()).all());
  }
}

TEST_CASE("run_chain rejects invalid starts and lengths") {
  const dirmh::BananaTarget target = dirmh::banana_target(0.03, 2);
  const KernelConfig config = KernelConfig::rwmh(1.0);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(2);

  CHECK_THROWS_AS(dirmh::run_chain(1, target, config, Eigen::VectorXd::Zero(3), 10),
                  dirmh::InvalidStart);
  const PointTarget point{Eigen::VectorXd::Zero(2)};
  CHECK_THROWS_AS(dirmh::run_chain(1, point, config, Eigen::VectorXd::Ones(2), 10),
                  dirmh::InvalidStart);

  CHECK_THROWS_AS(dirmh::run_chain(1, target, config, x0, 0), std::invalid_argument);
  CHECK_THROWS_AS(dirmh::run_chain(1, target, config, x0, 10, 10), std::invalid_argument);
  CHECK_THROWS_AS(dirmh::run_chain(1, target, config, x0, 10, 0, 0), std::invalid_argument);
}

TEST_CASE("RWMH at the textbook 1-d scale accepts at about 0.44") {
  Eigen::VectorXd mean(1);
  mean << 0.0;
  const dirmh::GaussianTarget target =
      dirmh::gaussian_target(mean, Eigen::MatrixXd::Identity(1, 1));
  // sigma = 2.4 (t = 5.76) is the classic near-optimal 1-d random walk scale.
  const dirmh::Chain chain = dirmh::run_chain(2026, target, KernelConfig::rwmh(5.76),
                                              Eigen::VectorXd::Zero(1), 20000);
  CHECK(chain.acceptance_rate() == doctest::Approx(0.44).epsilon(0.1));
  CHECK(chain.acceptance_rate() > 0.38);
  CHECK(chain.acceptance_rate() < 0.50);
}
