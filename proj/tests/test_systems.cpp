#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nlobsv/systems.hpp"

using namespace nlobsv;

namespace {

BearingParams unit_params() {
  BearingParams p;
  p.a = p.b = p.c = p.L = p.J = p.N = 1.0;
  p.g_air = 1.0;
  p.R = 1e-5;
  p.V_s = 3.0;
  return p;
}

}  // namespace

TEST_CASE("example1_rhs substitution values") {
  auto close = [](const StateVector& v, double a, double b) {
    CHECK(v[0] == a);
    CHECK(v[1] == b);
  };
  close(example1_rhs({0.0, 0.0}, 1.5, 2.0), 3.0, 3.0);
  close(example1_rhs({1.0, 0.0}, 0.0, 0.0), -2.0, -1.0);
  close(example1_rhs({1.0, 1.0}, 1.5, 2.0), 2.0, 2.0);
}

TEST_CASE("example1_rhs depends on (theta, lambda) only through the product") {
  const StateVector x{0.7, -0.3};
  CHECK(example1_rhs(x, 1.5, 2.0) == example1_rhs(x, 3.0, 1.0));
  CHECK(example1_rhs(x, 1.5, 2.0) == example1_rhs(x, 2.0, 1.5));
}

TEST_CASE("example2_rhs substitution values") {
  const StateVector a = example2_rhs({0.0, 0.0}, 1.5, 2.0);
  CHECK(a[0] == doctest::Approx(1.5));
  CHECK(a[1] == doctest::Approx(1.5 + std::exp(2.0)));
  const StateVector b = example2_rhs({0.0, 0.0}, 0.0, 0.0);
  CHECK(b[0] == doctest::Approx(0.0));
  CHECK(b[1] == doctest::Approx(1.0));
  const StateVector c = example2_rhs({1.0, 0.0}, 1.0, 0.0);
  CHECK(c[0] == doctest::Approx(-1.0));
  CHECK(c[1] == doctest::Approx(1.0));
}

TEST_CASE("saturate clamps and is odd") {
  CHECK(saturate(5.0, 3.0) == 3.0);
  CHECK(saturate(-5.0, 3.0) == -3.0);
  CHECK(saturate(0.5, 3.0) == 0.5);
  CHECK(saturate(0.0, 3.0) == 0.0);
  std::mt19937 gen(7);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double u = dist(gen);
    CHECK(saturate(-u, 3.0) == -saturate(u, 3.0));
    CHECK(std::abs(saturate(u, 3.0)) <= 3.0);
  }
}

TEST_CASE("bearing_phi vanishes for zero flux and at the symmetric center") {
  const BearingParams p = unit_params();
  CHECK(bearing_phi(0.37, 1.1, 0.0, 0.0, p) == 0.0);
  for (double q : {0.5, 1.0, 2.0}) {
    for (double lam : {0.8, 1.0, 1.2}) {
      CHECK(bearing_phi(0.0, lam, q, q, p) == doctest::Approx(0.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("bearing_phi substitution value") {
  CHECK(bearing_phi(0.0, 1.0, 0.0, 2.0, unit_params()) == doctest::Approx(1.0));
}

TEST_CASE("bearing_phi reports pole proximity") {
  BearingParams p = unit_params();
  // Denominator a(-yL+g)+lambda*b vanishes at y = g + lambda*b/a.
  CHECK_THROWS_AS(bearing_phi(2.0, 1.0, 0.1, 0.1, p), PoleProximityError);
}

TEST_CASE("bearing_phi_dlambda matches central finite differences") {
  const BearingParams p = unit_params();
  const double eps = 1e-6;
  for (double y : {-0.3, 0.0, 0.4}) {
    for (double lam : {0.8, 1.0, 1.2}) {
      const double fd = (bearing_phi(y, lam + eps, 0.7, 1.3, p) -
                         bearing_phi(y, lam - eps, 0.7, 1.3, p)) /
                        (2.0 * eps);
      CHECK(bearing_phi_dlambda(y, lam, 0.7, 1.3, p) ==
            doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("bearing_rhs equilibrium and forcing values") {
  const BearingParams p = unit_params();
  const StateVector zero = bearing_rhs({0, 0, 0, 0}, 0.0, 0.0, 0.0, 1.0, 1.0, p);
  for (double v : zero) CHECK(v == 0.0);

  const StateVector drift = bearing_rhs({0, 1, 0, 0}, 0.0, 0.0, 0.0, 0.9, 1.1, p);
  CHECK(drift[0] == 1.0);
  CHECK(drift[1] == 0.0);
  CHECK(drift[2] == 0.0);
  CHECK(drift[3] == 0.0);

  const StateVector forced = bearing_rhs({0, 0, 0, 0}, M_PI, 0.0, 0.0, 1.0, 1.0, p);
  CHECK(forced[1] == doctest::Approx(1e-3));
}

TEST_CASE("switching_control fixed point and branch values") {
  BearingParams p = unit_params();
  p.selection = MagnetSelection::kMagnet2;
  p.R = 0.0;  // validation not invoked here; matches the hand-computed case
  p.V_s = 1e9;

  std::uint64_t clamps = 0;
  const ControlOutput at_zero = switching_control(0.0, 0.0, 0.0, 0.0, p, &clamps);
  CHECK(at_zero.u1 == 0.0);
  CHECK(at_zero.u2 == 0.0);

  // 2x1 + 2x2hat = 2, J = cL, q = 0: u2 = -100(0 - sqrt(2)).
  const ControlOutput pos = switching_control(1.0, 0.0, 0.0, 0.0, p, &clamps);
  CHECK(pos.u1 == 0.0);
  CHECK(pos.u2 == doctest::Approx(100.0 * std::sqrt(2.0)));
  CHECK(clamps == 0);

  // Negative radicand: clamped to zero with a counted warning.
  const ControlOutput neg = switching_control(-1.0, 0.0, 0.0, 0.0, p, &clamps);
  CHECK(neg.u2 == 0.0);
  CHECK(neg.u1 == doctest::Approx(0.0));
  CHECK(clamps == 1);
}

TEST_CASE("magnet1 selection drives the opposing magnet and never clamps") {
  BearingParams p = unit_params();
  p.R = 0.0;
  p.V_s = 1e9;
  std::uint64_t clamps = 0;
  const ControlOutput pos = switching_control(1.0, 0.0, 0.0, 0.0, p, &clamps);
  CHECK(pos.u2 == 0.0);
  CHECK(pos.u1 == doctest::Approx(100.0 * std::sqrt(2.0)));
  const ControlOutput neg = switching_control(-1.0, 0.0, 0.0, 0.0, p, &clamps);
  CHECK(neg.u1 == 0.0);
  CHECK(neg.u2 == doctest::Approx(100.0 * std::sqrt(2.0)));
  CHECK(clamps == 0);
}

TEST_CASE("high_gain_observer_rhs values") {
  const StateVector a = high_gain_observer_rhs({2.0, 0.0}, 2.0, 0.0);
  CHECK(a[0] == 0.0);
  CHECK(a[1] == 0.0);
  const StateVector b = high_gain_observer_rhs({3.0, 0.0}, 2.0, 0.0);
  CHECK(b[0] == -20.0);
  CHECK(b[1] == -100.0);
  const StateVector c = high_gain_observer_rhs({2.0, 5.0}, 2.0, 2.0);
  CHECK(c[0] == 5.0);
  CHECK(c[1] == 2.0);
}

TEST_CASE("spec validation rejects bad domains") {
  Example1Spec spec;
  spec.omega_lambda = {-1.0, 3.0};  // contains 0
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = Example1Spec{};
  spec.lambda_true = 10.0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  CHECK_NOTHROW(Example1Spec{}.validate());

  BearingParams p;
  p.J = -1.0;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = BearingParams{};
  p.theta_true = 1.5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}
