#include "nlobsv/systems.hpp"

#include <cmath>

namespace nlobsv {

void Example1Spec::validate() const {
  if (omega_lambda.empty() || omega_theta.empty()) {
    throw ConfigError("example spec: empty parameter domain");
  }
  if (!omega_lambda.contains(lambda_true) || !omega_theta.contains(theta_true)) {
    throw ConfigError("example spec: true parameters outside their domains");
  }
  if (omega_lambda.contains(0.0)) {
    throw ConfigError("example spec: omega_lambda must not contain 0");
  }
}

void Example2Spec::validate() const {
  Example1Spec same{lambda_true, theta_true, omega_lambda, omega_theta};
  same.validate();
}

void BearingParams::validate() const {
  const double constants[] = {a, b, c, R, N, L, J, V_s, g_air, h_flux};
  for (double v : constants) {
    if (!(v > 0)) throw ConfigError("bearing params: physical constants must be positive");
  }
  const Interval box{0.8, 1.2};
  if (!box.contains(theta_true) || !box.contains(lambda_true)) {
    throw ConfigError("bearing params: theta, lambda must lie in [0.8, 1.2]");
  }
}

double saturate(double u, double V_s) {
  if (u > V_s) return V_s;
  if (u < -V_s) return -V_s;
  return u;
}

StateVector example1_rhs(const StateVector& x, double theta, double lambda) {
  const double y = x[0];
  const double tl = theta * lambda;
  return {x[1] + tl - 2.0 * y, tl - y};
}

StateVector example2_rhs(const StateVector& x, double theta, double lambda) {
  const double y = x[0];
  return {x[1] + theta - 2.0 * y, theta + std::exp(lambda) - y};
}

namespace {

// Denominators of the two flux-force terms.
inline double denom2(double y, double lambda, const BearingParams& p) {
  return p.a * (y * p.L + p.g_air) + lambda * p.b;
}
inline double denom1(double y, double lambda, const BearingParams& p) {
  return p.a * (-y * p.L + p.g_air) + lambda * p.b;
}

inline void check_poles(double d1, double d2) {
  if (std::abs(d1) < 1e-12 || std::abs(d2) < 1e-12) {
    throw PoleProximityError("bearing phi: flux-force denominator near zero");
  }
}

}  // namespace

double bearing_phi(double y, double lambda, double q1, double q2, const BearingParams& p) {
  const double d2 = denom2(y, lambda, p);
  const double d1 = denom1(y, lambda, p);
  check_poles(d1, d2);
  return p.c * p.L / p.J * (q2 * q2 / (d2 * d2) - q1 * q1 / (d1 * d1));
}

double bearing_phi_dlambda(double y, double lambda, double q1, double q2,
                           const BearingParams& p) {
  const double d2 = denom2(y, lambda, p);
  const double d1 = denom1(y, lambda, p);
  check_poles(d1, d2);
  return p.c * p.L / p.J * (-2.0 * p.b) *
         (q2 * q2 / (d2 * d2 * d2) - q1 * q1 / (d1 * d1 * d1));
}

StateVector bearing_rhs(const StateVector& state, double t, double u1, double u2,
                        double theta, double lambda, const BearingParams& p) {
  const double x2 = state[1];
  const double q1 = state[2];
  const double q2 = state[3];
  const double phi = bearing_phi(state[0], lambda, q1, q2, p);
  const double flux_rate = p.R / p.N * p.h_flux;
  return {x2,
          phi * theta + std::sin(0.5 * t) / 1000.0,
          -flux_rate * q1 + saturate(u1, p.V_s) / p.N,
          -flux_rate * q2 + saturate(u2, p.V_s) / p.N};
}

ControlOutput switching_control(double x1, double x2_hat, double q1, double q2,
                                const BearingParams& p,
                                std::uint64_t* radicand_clamps) {
  const double s = 2.0 * x1 + 2.0 * x2_hat;
  const double jcl = p.J / (p.c * p.L);

  auto drive = [&](double q_own, double radicand) {
    if (radicand < 0.0) {
      radicand = 0.0;
      if (radicand_clamps != nullptr) ++*radicand_clamps;
    }
    return p.N * (p.R * q_own / p.N - 100.0 * (q_own - std::sqrt(radicand)));
  };

  ControlOutput out;
  if (p.selection == MagnetSelection::kMagnet2) {
    if (s > 0.0) {
      out.u2 = drive(q2, s * jcl + q1 * q1);
    } else {
      out.u1 = drive(q1, s * jcl + q2 * q2);
    }
  } else {
    // Drive the magnet whose flux enters phi with the sign opposing s; the
    // radicand uses |s| and is always nonnegative.
    if (s > 0.0) {
      out.u1 = drive(q1, s * jcl + q2 * q2);
    } else {
      out.u2 = drive(q2, -s * jcl + q1 * q1);
    }
  }
  return out;
}

StateVector high_gain_observer_rhs(const StateVector& xhat, double x1,
                                   double phi_nominal) {
  const double e = xhat[0] - x1;
  return {-20.0 * e + xhat[1], -100.0 * e + phi_nominal};
}

}  // namespace nlobsv
