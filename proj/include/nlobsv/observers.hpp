#pragma once

// Adaptive observers: certainty-equivalence state copy with output injection,
// gradient adaptation of theta, and an error-driven phase sweep realizing the
// lambda search over its admissible interval.

#include <array>

#include "nlobsv/systems.hpp"

namespace nlobsv {

struct ObserverGains {
  double gamma_theta = 1.0;  // theta adaptation gain (1/s)
  double gamma = 0.1;        // lambda-search gain (1/s)
  std::array<double, 2> l{-2.0, -1.0};  // output-injection vector

  /// Checks positivity of the gains and that the injected linear part
  /// ((l1,1),(l2,0)) is Hurwitz (numerically, via its eigenvalues).
  void validate() const;
};

/// lambda_hat = lo + (hi - lo) * (cos(sigma) + 1) / 2; image is exactly [lo, hi].
double lambda_from_phase(double sigma, const Interval& omega_lambda);

/// A phase whose lambda_from_phase image equals `lambda_hat` (sweep start).
double phase_from_lambda(double lambda_hat, const Interval& omega_lambda);

/// sigma' = gamma * e^2: the sweep advances while output error persists.
double search_phase_rhs(double e, double gamma);

/// Observer state layout for the planar examples: (xh1, xh2, theta_hat, sigma).
inline constexpr std::size_t kExampleObserverDim = 4;

StateVector example_observer_rhs(const StateVector& obs, double y,
                                 const Example1Spec& spec, const ObserverGains& gains);
StateVector example_observer_rhs(const StateVector& obs, double y,
                                 const Example2Spec& spec, const ObserverGains& gains);

/// M-filter first column: m11' = 0, m21' = -m21 + phi.
std::array<double, 2> bearing_filter_rhs(const std::array<double, 2>& m, double phi);

/// Observer state layout for the bearing:
/// (zeta1, zeta2, theta_hat, m11, m21, sigma).
inline constexpr std::size_t kBearingObserverDim = 6;

/// Bearing adaptive observer. The filter and regressor evaluate phi at
/// lambda_hat derived from the phase; e = zeta1 - y.
StateVector bearing_observer_rhs(const StateVector& obs, double y, double t,
                                 const BearingParams& p, const ObserverGains& gains,
                                 double q1, double q2);

}  // namespace nlobsv
