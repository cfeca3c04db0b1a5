#pragma once

// Indistinguishability sets, point-to-curve distances, Monte Carlo
// lower-envelope estimation of the comparison function, the R1 integral and
// the numerical lambda'-UPE check.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nlobsv/ode.hpp"
#include "nlobsv/systems.hpp"

namespace nlobsv {

/// Absolute parametrization mismatch |f(lambda', theta') - f(lambda, theta)|.
struct MismatchFn {
  enum class Kind { kProduct, kExpAdditive, kCustom };

  Kind kind = Kind::kProduct;
  double true_lambda = 2.0;
  double true_theta = 1.5;
  std::function<double(double, double)> custom;  // used when kind == kCustom

  double operator()(double lambda_e, double theta_e) const;
};

/// One explicit branch theta' = psi(lambda') of an indistinguishability curve.
struct ESetBranch {
  std::function<double(double)> psi;
  Interval domain;
};

struct ESetSpec {
  std::vector<ESetBranch> branches;
};

/// E for the product parametrization: theta' = lambda*theta / lambda' on the
/// two hyperbola branches lambda' in [-10,-0.01] and [0.01,10].
ESetSpec eset_product(double lambda_true, double theta_true);

/// E for the exp-additive parametrization:
/// theta' = theta + e^lambda - e^lambda' on lambda' in [-10,10].
ESetSpec eset_exp_additive(double lambda_true, double theta_true);

/// Point-to-curve distance via dense branch sampling plus golden-section
/// refinement (tolerance 1e-6). Precomputes the branch polylines once.
class DistanceCalculator {
 public:
  explicit DistanceCalculator(ESetSpec eset, std::size_t samples_per_branch = 10000);

  double distance(double lambda_e, double theta_e) const;
  const ESetSpec& eset() const { return eset_; }

 private:
  struct BranchCache {
    std::vector<double> xs;
    std::vector<double> ys;
  };
  ESetSpec eset_;
  std::vector<BranchCache> caches_;
};

/// Convenience wrapper for one-off queries.
double distance_to_E(double lambda_e, double theta_e, const ESetSpec& eset);

/// Piecewise-constant non-decreasing suffix-minimum envelope of (d, m) pairs.
struct Envelope {
  std::vector<double> d;  // ascending
  std::vector<double> m;  // suffix minima, non-decreasing

  /// min{ m_i : d_i >= dist }; +inf past the largest sampled distance.
  double value(double dist) const;
};

Envelope extract_lower_envelope(std::vector<std::pair<double, double>> samples);

struct EnvelopeEstimate {
  std::vector<double> d_e;  // per-sample distance to E
  std::vector<double> m_e;  // per-sample mismatch
  Envelope envelope;
  std::uint64_t seed = 0;
  std::string rng = "splitmix64";
  Interval domain_lambda;
  Interval domain_theta;

  /// 100-bin decimated envelope for plotting: (bin right edge, envelope value).
  std::vector<std::pair<double, double>> decimated(std::size_t bins = 100) const;
};

/// n i.i.d. uniform samples of (lambda_e, theta_e); deterministic for a fixed
/// seed and independent of `threads`.
EnvelopeEstimate sample_envelope(const MismatchFn& fn, const ESetSpec& eset,
                                 const Interval& domain_lambda,
                                 const Interval& domain_theta, std::size_t n,
                                 std::uint64_t seed, unsigned threads = 1);

/// Counter-based 64-bit generator stream: value j of stream `seed`.
std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index);
/// Maps a 64-bit word to [0, 1).
double to_unit_interval(std::uint64_t word);

/// R1(t, lambda', lambda, theta): exponentially weighted trajectory integral of
/// the phi sensitivity averaged over the segment s(xi) = lambda' xi + (1-xi) lambda.
/// `traj` must carry channels y, q1, q2 covering [t0, t]; inner integral is a
/// trapezoid on the trajectory grid, outer is 16-point Gauss-Legendre.
double r1_integral(double t, double lambda_prime, double lambda, double theta,
                   const Trajectory& traj, const BearingParams& p);

/// Minimum over window start times of the smallest eigenvalue of the windowed
/// Gram integral of v(t) = (v1, v2) on a uniform grid.
double gram_min_eig_over_windows(const std::vector<double>& times,
                                 const std::vector<double>& v1,
                                 const std::vector<double>& v2, double window_T);

struct UpeRow {
  double lambda_prime = 0.0;
  double theta = 0.0;
  double min_excitation = 0.0;
};

struct UpeReport {
  std::vector<UpeRow> rows;
  double delta = 0.0;
  double window_T = 0.0;
  bool pass = false;
};

/// For each grid pair forms v(t) = (m21(t,[lambda',y]), R1(t,lambda',lambda,theta))
/// along the trajectory and reports the worst windowed Gram excitation.
UpeReport upe_check(const Trajectory& traj, const std::vector<double>& lambda_grid,
                    const std::vector<double>& theta_grid, double window_T,
                    double delta, const BearingParams& p, double lambda_true);

}  // namespace nlobsv
