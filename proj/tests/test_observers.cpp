#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlobsv/observers.hpp"
#include "nlobsv/sim.hpp"

using namespace nlobsv;

namespace {

ExperimentConfig example_config(SystemKind kind) {
  ExperimentConfig c;
  c.system = kind;
  c.gains.gamma = kind == SystemKind::kExample1 ? 0.1 : 0.05;
  c.plant_ic = {1.0, 0.5};
  c.observer_ic = {0.0, 0.0};
  c.theta_hat0 = 1.0;
  c.lambda_hat0 = 1.0;
  c.step = 1e-3;
  c.horizon = 20.0;
  return c;
}

BearingParams sample_bearing_params() {
  BearingParams p;
  p.g_air = 2.0;
  p.V_s = 500.0;
  p.theta_true = 0.9;
  p.lambda_true = 1.1;
  return p;
}

}  // namespace

TEST_CASE("lambda_from_phase maps the phase onto the interval") {
  const Interval narrow{0.8, 1.2};
  CHECK(lambda_from_phase(M_PI, narrow) == doctest::Approx(0.8));
  CHECK(lambda_from_phase(0.0, narrow) == doctest::Approx(1.2));
  CHECK(lambda_from_phase(M_PI / 2.0, {0.5, 3.0}) == doctest::Approx(1.75));
  for (double sigma = -10.0; sigma <= 10.0; sigma += 0.037) {
    const double lam = lambda_from_phase(sigma, narrow);
    CHECK(lam >= 0.8);
    CHECK(lam <= 1.2);
  }
}

TEST_CASE("phase_from_lambda inverts lambda_from_phase") {
  const Interval omega{0.5, 3.0};
  for (double lam : {0.5, 0.9, 1.75, 2.4, 3.0}) {
    CHECK(lambda_from_phase(phase_from_lambda(lam, omega), omega) ==
          doctest::Approx(lam).epsilon(1e-12));
  }
}

TEST_CASE("search_phase_rhs freezes on zero error") {
  CHECK(search_phase_rhs(0.0, 0.1) == 0.0);
  CHECK(search_phase_rhs(1.0, 0.1) == doctest::Approx(0.1));
  CHECK(search_phase_rhs(2.0, 150.0) == doctest::Approx(600.0));
}

TEST_CASE("observer gains validate the injected dynamics") {
  ObserverGains gains;
  CHECK_NOTHROW(gains.validate());
  gains.gamma = 0.0;
  CHECK_THROWS_AS(gains.validate(), ConfigError);
  gains = ObserverGains{};
  gains.l = {2.0, -1.0};  // unstable injection
  CHECK_THROWS_AS(gains.validate(), ConfigError);
}

TEST_CASE("example observer freezes adaptation on zero output error") {
  Example1Spec spec;
  ObserverGains gains;
  // xhat1 == y: e = 0.
  const StateVector d = example_observer_rhs({0.5, 0.2, 1.0, 1.0}, 0.5, spec, gains);
  CHECK(d[2] == 0.0);
  CHECK(d[3] == 0.0);
}

TEST_CASE("example observer matches the true derivative at the exact-match point") {
  Example1Spec spec;  // lambda = 2, theta = 1.5
  ObserverGains gains;
  const StateVector x{0.4, -0.2};
  // Pin lambda_hat = 2 (phase) and theta_hat = 1.5: theta*lambda matches.
  const double sigma = phase_from_lambda(2.0, spec.omega_lambda);
  const StateVector d =
      example_observer_rhs({x[0], x[1], 1.5, sigma}, x[0], spec, gains);
  const StateVector dp = example1_rhs(x, 1.5, 2.0);
  CHECK(d[0] == doctest::Approx(dp[0]).epsilon(1e-12));
  CHECK(d[1] == doctest::Approx(dp[1]).epsilon(1e-12));
  CHECK(d[2] == 0.0);
}

TEST_CASE("example observer substitution value") {
  Example1Spec spec;
  ObserverGains gains;
  const double sigma = phase_from_lambda(2.0, spec.omega_lambda);
  const StateVector d = example_observer_rhs({1.0, 0.0, 1.0, sigma}, 0.0, spec, gains);
  CHECK(d[0] == doctest::Approx(0.0));
  CHECK(d[1] == doctest::Approx(1.0));
  CHECK(d[2] == doctest::Approx(-2.0));
}

TEST_CASE("bearing filter is a unit low-pass of phi") {
  CHECK(bearing_filter_rhs({0.0, 3.0}, 3.0)[1] == 0.0);
  CHECK(bearing_filter_rhs({0.0, 0.0}, 1.0)[1] == 1.0);
  CHECK(bearing_filter_rhs({0.5, 0.0}, 0.0)[0] == 0.0);
}

TEST_CASE("bearing filter decays exponentially without input") {
  const RhsFn rhs = [](double, const StateVector& m, StateVector& d) {
    const auto md = bearing_filter_rhs({m[0], m[1]}, 0.0);
    d = {md[0], md[1]};
  };
  RecordSpec rec;
  rec.add_state("m21", 1);
  Trajectory traj = integrate(rhs, {0.0, 1.0}, 0.0, 1.0, 1e-3, rec);
  CHECK(traj.channel("m21").back() == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("bearing observer freezes adaptation on zero output error") {
  const BearingParams p = sample_bearing_params();
  ObserverGains gains;
  gains.gamma_theta = 1e5;
  gains.gamma = 150.0;
  const double y = 0.1;
  const StateVector d =
      bearing_observer_rhs({y, 0.3, 1.0, 0.0, 0.4, 1.0}, y, 2.0, p, gains, 0.2, 0.3);
  CHECK(d[2] == 0.0);
  CHECK(d[5] == 0.0);
}

TEST_CASE("bearing observer is quiescent with zero drive") {
  const BearingParams p = sample_bearing_params();
  ObserverGains gains;
  const double y = 0.05;
  const StateVector d =
      bearing_observer_rhs({y, 0.0, 1.0, 0.0, 0.0, 1.0}, y, 0.0, p, gains, 0.0, 0.0);
  CHECK(d[0] == 0.0);
  CHECK(d[1] == 0.0);
  CHECK(d[2] == 0.0);
}

TEST_CASE("bearing observer theta adaptation scales with the adaptation gain") {
  const BearingParams p = sample_bearing_params();
  ObserverGains gains;
  gains.gamma_theta = 1e5;
  // zeta1 - y = 1, m21 = 2.
  const StateVector d =
      bearing_observer_rhs({1.0, 0.0, 1.0, 0.0, 2.0, 1.0}, 0.0, 0.0, p, gains, 0.0, 0.0);
  CHECK(d[2] == doctest::Approx(-2e5));
}

TEST_CASE("run_example keeps lambda_hat inside its domain and sigma non-decreasing") {
  for (SystemKind kind : {SystemKind::kExample1, SystemKind::kExample2}) {
    RunResult r = run_example(example_config(kind));
    CHECK(r.summary.lambda_in_domain);
    const auto& sigma = r.traj.channel("sigma");
    for (std::size_t k = 1; k < sigma.size(); ++k) CHECK(sigma[k] >= sigma[k - 1]);
  }
}

TEST_CASE("frozen true parameters hold the error system at zero") {
  for (SystemKind kind : {SystemKind::kExample1, SystemKind::kExample2}) {
    ExperimentConfig c = example_config(kind);
    c.horizon = 10.0;
    c.gains.gamma = 1e-300;  // pins the lambda sweep
    c.lambda_hat0 = c.lambda_true;
    c.theta_hat0 = c.theta_true;
    c.observer_ic = c.plant_ic;
    RunResult r = run_example(c);
    CHECK(r.summary.max_abs_e < 1e-8);
  }
}
