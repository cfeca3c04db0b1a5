#include "nlobsv/observers.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace nlobsv {

void ObserverGains::validate() const {
  if (!(gamma_theta > 0) || !(gamma > 0)) {
    throw ConfigError("observer gains must be positive");
  }
  // Eigenvalues of ((l1,1),(l2,0)): s^2 - l1 s - l2 = 0.
  const double tr = l[0];
  const double det = -l[1];
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * det));
  const double re1 = (tr + disc.real()) / 2.0;
  const double re2 = (tr - disc.real()) / 2.0;
  if (!(re1 < 0.0 && re2 < 0.0)) {
    throw ConfigError("output-injection vector does not make the error dynamics Hurwitz");
  }
}

double lambda_from_phase(double sigma, const Interval& omega_lambda) {
  return omega_lambda.lo + omega_lambda.width() * (std::cos(sigma) + 1.0) / 2.0;
}

double phase_from_lambda(double lambda_hat, const Interval& omega_lambda) {
  if (omega_lambda.empty()) throw ConfigError("lambda domain is empty");
  double u = 2.0 * (lambda_hat - omega_lambda.lo) / omega_lambda.width() - 1.0;
  u = std::clamp(u, -1.0, 1.0);
  return std::acos(u);
}

double search_phase_rhs(double e, double gamma) { return gamma * e * e; }

namespace {

StateVector example_observer_rhs_impl(const StateVector& obs, double y, bool product,
                                      const Interval& omega_lambda, double /*unused*/,
                                      const ObserverGains& gains) {
  const double xh1 = obs[0];
  const double xh2 = obs[1];
  const double th = obs[2];
  const double sigma = obs[3];
  const double lam = lambda_from_phase(sigma, omega_lambda);
  const double e = xh1 - y;

  // Regressed input: B*theta*lambda for the product plant, B*theta plus the
  // exp(lambda) offset for the additive one.
  double b_in, extra2, theta_dot;
  if (product) {
    b_in = th * lam;
    extra2 = 0.0;
    theta_dot = -gains.gamma_theta * e * lam;
  } else {
    b_in = th;
    extra2 = std::exp(lam);
    theta_dot = -gains.gamma_theta * e;
  }

  return {xh2 + b_in - 2.0 * y + gains.l[0] * e,
          b_in + extra2 - y + gains.l[1] * e,
          theta_dot,
          search_phase_rhs(e, gains.gamma)};
}

}  // namespace

StateVector example_observer_rhs(const StateVector& obs, double y,
                                 const Example1Spec& spec, const ObserverGains& gains) {
  return example_observer_rhs_impl(obs, y, true, spec.omega_lambda, 0.0, gains);
}

StateVector example_observer_rhs(const StateVector& obs, double y,
                                 const Example2Spec& spec, const ObserverGains& gains) {
  return example_observer_rhs_impl(obs, y, false, spec.omega_lambda, 0.0, gains);
}

std::array<double, 2> bearing_filter_rhs(const std::array<double, 2>& m, double phi) {
  return {0.0, -m[1] + phi};
}

StateVector bearing_observer_rhs(const StateVector& obs, double y, double t,
                                 const BearingParams& p, const ObserverGains& gains,
                                 double q1, double q2) {
  const double z1 = obs[0];
  const double z2 = obs[1];
  const double th = obs[2];
  const std::array<double, 2> m{obs[3], obs[4]};
  const double sigma = obs[5];

  const Interval omega{0.8, 1.2};
  const double lam = lambda_from_phase(sigma, omega);
  const double phi = bearing_phi(y, lam, q1, q2, p);
  const double e = z1 - y;
  const auto mdot = bearing_filter_rhs(m, phi);

  return {z2 + gains.l[0] * e + m[1] * th,
          gains.l[1] * e + m[1] * th + std::sin(0.5 * t) / 1000.0,
          -gains.gamma_theta * e * m[1],
          mdot[0],
          mdot[1],
          search_phase_rhs(e, gains.gamma)};
}

}  // namespace nlobsv
