#include "nlobsv/identifiability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace nlobsv {

double MismatchFn::operator()(double lambda_e, double theta_e) const {
  switch (kind) {
    case Kind::kProduct:
      return std::abs(true_lambda * true_theta - lambda_e * theta_e);
    case Kind::kExpAdditive:
      return std::abs(true_theta + std::exp(true_lambda) - theta_e - std::exp(lambda_e));
    case Kind::kCustom:
      return std::abs(custom(lambda_e, theta_e));
  }
  return 0.0;
}

ESetSpec eset_product(double lambda_true, double theta_true) {
  const double prod = lambda_true * theta_true;
  auto psi = [prod](double lp) { return prod / lp; };
  ESetSpec eset;
  eset.branches.push_back({psi, {-10.0, -0.01}});
  eset.branches.push_back({psi, {0.01, 10.0}});
  return eset;
}

ESetSpec eset_exp_additive(double lambda_true, double theta_true) {
  const double level = theta_true + std::exp(lambda_true);
  ESetSpec eset;
  eset.branches.push_back({[level](double lp) { return level - std::exp(lp); },
                           {-10.0, 10.0}});
  return eset;
}

DistanceCalculator::DistanceCalculator(ESetSpec eset, std::size_t samples_per_branch)
    : eset_(std::move(eset)) {
  if (eset_.branches.empty()) throw ConfigError("distance_to_E: no branches");
  for (const auto& br : eset_.branches) {
    if (br.domain.empty()) throw ConfigError("distance_to_E: empty branch domain");
    BranchCache cache;
    cache.xs.resize(samples_per_branch);
    cache.ys.resize(samples_per_branch);
    const double step = br.domain.width() / static_cast<double>(samples_per_branch - 1);
    for (std::size_t j = 0; j < samples_per_branch; ++j) {
      const double x = br.domain.lo + static_cast<double>(j) * step;
      cache.xs[j] = x;
      cache.ys[j] = br.psi(x);
    }
    caches_.push_back(std::move(cache));
  }
}

namespace {

// Golden-section minimization of f on [a, b] to absolute tolerance tol.
template <class F>
double golden_min(F&& f, double a, double b, double tol) {
  constexpr double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 < f2 ? f1 : f2;
}

}  // namespace

double DistanceCalculator::distance(double lambda_e, double theta_e) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t bi = 0; bi < caches_.size(); ++bi) {
    const auto& cache = caches_[bi];
    const std::size_t n = cache.xs.size();
    std::size_t best_j = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      const double dx = cache.xs[j] - lambda_e;
      const double dy = cache.ys[j] - theta_e;
      const double d2 = dx * dx + dy * dy;
      if (d2 < best_d2) {
        best_d2 = d2;
        best_j = j;
      }
    }
    const auto& br = eset_.branches[bi];
    const double lo = cache.xs[best_j > 0 ? best_j - 1 : 0];
    const double hi = cache.xs[std::min(best_j + 1, n - 1)];
    auto dist2 = [&](double lp) {
      const double dx = lp - lambda_e;
      const double dy = br.psi(lp) - theta_e;
      return dx * dx + dy * dy;
    };
    // Abscissa tolerance 1e-11: on steep branches the distance error scales
    // with the local slope, and this keeps it below the 1e-6 contract.
    const double refined = lo < hi ? golden_min(dist2, lo, hi, 1e-11) : best_d2;
    best = std::min(best, std::sqrt(std::min(refined, best_d2)));
  }
  return best;
}

double distance_to_E(double lambda_e, double theta_e, const ESetSpec& eset) {
  return DistanceCalculator(eset).distance(lambda_e, theta_e);
}

double Envelope::value(double dist) const {
  const auto it = std::lower_bound(d.begin(), d.end(), dist);
  if (it == d.end()) return std::numeric_limits<double>::infinity();
  return m[static_cast<std::size_t>(it - d.begin())];
}

Envelope extract_lower_envelope(std::vector<std::pair<double, double>> samples) {
  if (samples.empty()) throw ConfigError("extract_lower_envelope: empty sample set");
  std::sort(samples.begin(), samples.end());
  Envelope env;
  env.d.resize(samples.size());
  env.m.resize(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    env.d[i] = samples[i].first;
    env.m[i] = samples[i].second;
  }
  for (std::size_t i = env.m.size() - 1; i-- > 0;) {
    env.m[i] = std::min(env.m[i], env.m[i + 1]);
  }
  return env;
}

std::vector<std::pair<double, double>> EnvelopeEstimate::decimated(std::size_t bins) const {
  std::vector<std::pair<double, double>> out;
  if (envelope.d.empty() || bins == 0) return out;
  const double dmax = envelope.d.back();
  out.reserve(bins);
  for (std::size_t k = 1; k <= bins; ++k) {
    const double edge = dmax * static_cast<double>(k) / static_cast<double>(bins);
    out.emplace_back(edge, envelope.value(edge));
  }
  return out;
}

std::uint64_t splitmix64_at(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double to_unit_interval(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

EnvelopeEstimate sample_envelope(const MismatchFn& fn, const ESetSpec& eset,
                                 const Interval& domain_lambda,
                                 const Interval& domain_theta, std::size_t n,
                                 std::uint64_t seed, unsigned threads) {
  if (n < 1) throw ConfigError("sample_envelope: n must be >= 1");
  if (domain_lambda.empty() || domain_theta.empty()) {
    throw ConfigError("sample_envelope: empty sampling domain");
  }
  const DistanceCalculator calc(eset);

  EnvelopeEstimate est;
  est.seed = seed;
  est.domain_lambda = domain_lambda;
  est.domain_theta = domain_theta;
  est.d_e.resize(n);
  est.m_e.resize(n);

  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const double ul = to_unit_interval(splitmix64_at(seed, 2 * i));
      const double ut = to_unit_interval(splitmix64_at(seed, 2 * i + 1));
      const double le = domain_lambda.lo + domain_lambda.width() * ul;
      const double te = domain_theta.lo + domain_theta.width() * ut;
      est.d_e[i] = calc.distance(le, te);
      est.m_e[i] = fn(le, te);
    }
  };

  const unsigned nthreads = std::max(1u, threads);
  if (nthreads == 1 || n < 2 * nthreads) {
    worker(0, n);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n + nthreads - 1) / nthreads;
    for (unsigned t = 0; t < nthreads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(n, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  std::vector<std::pair<double, double>> samples(n);
  for (std::size_t i = 0; i < n; ++i) samples[i] = {est.d_e[i], est.m_e[i]};
  est.envelope = extract_lower_envelope(std::move(samples));
  return est;
}

namespace {

// 16-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr double kGlNodes[16] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318,
    -0.7554044083550030, -0.6178762444026438, -0.4580167776572274,
    -0.2816035507792589, -0.0950125098376374, 0.0950125098376374,
    0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,
    0.9894009349916499};
constexpr double kGlWeights[16] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928,
    0.1246289712555339, 0.1495959888165767, 0.1691565193950025,
    0.1826034150449236, 0.1894506104550685, 0.1894506104550685,
    0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479,
    0.0271524594117541};

// xi-averaged phi sensitivity along the segment s(xi) = lp*xi + (1-xi)*lam.
double xi_averaged_sensitivity(double y, double q1, double q2, double lp, double lam,
                               const BearingParams& p) {
  double acc = 0.0;
  for (int i = 0; i < 16; ++i) {
    const double xi = 0.5 * (kGlNodes[i] + 1.0);  // map to [0, 1]
    const double s = lp * xi + (1.0 - xi) * lam;
    acc += 0.5 * kGlWeights[i] * bearing_phi_dlambda(y, s, q1, q2, p);
  }
  return acc;
}

std::size_t grid_index_of(const Trajectory& traj, double t) {
  if (traj.times.empty()) throw ConfigError("r1_integral: empty trajectory");
  const double t0 = traj.times.front();
  if (t < t0 - 0.5 * traj.step || t > traj.times.back() + 0.5 * traj.step) {
    throw ConfigError("r1_integral: t outside the trajectory window");
  }
  const auto k = static_cast<std::size_t>(std::llround((t - t0) / traj.step));
  if (std::abs(traj.times[k] - t) > 0.25 * traj.step) {
    throw ConfigError("r1_integral: t does not lie on the trajectory grid");
  }
  return k;
}

}  // namespace

double r1_integral(double t, double lambda_prime, double lambda, double theta,
                   const Trajectory& traj, const BearingParams& p) {
  const auto& y = traj.channel("y");
  const auto& q1 = traj.channel("q1");
  const auto& q2 = traj.channel("q2");
  const std::size_t kt = grid_index_of(traj, t);
  if (kt == 0) return 0.0;

  const double dt = traj.step;
  double acc = 0.0;
  double prev = 0.0;
  for (std::size_t k = 0; k <= kt; ++k) {
    const double f =
        xi_averaged_sensitivity(y[k], q1[k], q2[k], lambda_prime, lambda, p) * theta;
    const double w = std::exp(-(traj.times[kt] - traj.times[k]));
    if (k > 0) acc += 0.5 * dt * (prev + w * f);
    prev = w * f;
  }
  return acc;
}

double gram_min_eig_over_windows(const std::vector<double>& times,
                                 const std::vector<double>& v1,
                                 const std::vector<double>& v2, double window_T) {
  const std::size_t n = times.size();
  if (n < 2 || v1.size() != n || v2.size() != n) {
    throw ConfigError("gram: series length mismatch");
  }
  const double dt = times[1] - times[0];
  const auto w = static_cast<std::size_t>(std::llround(window_T / dt));
  if (w < 1 || w >= n) throw ConfigError("gram: window longer than trajectory");

  // Trapezoid prefix integrals of the three Gram entries.
  std::vector<double> p11(n, 0.0), p12(n, 0.0), p22(n, 0.0);
  for (std::size_t k = 1; k < n; ++k) {
    p11[k] = p11[k - 1] + 0.5 * dt * (v1[k - 1] * v1[k - 1] + v1[k] * v1[k]);
    p12[k] = p12[k - 1] + 0.5 * dt * (v1[k - 1] * v2[k - 1] + v1[k] * v2[k]);
    p22[k] = p22[k - 1] + 0.5 * dt * (v2[k - 1] * v2[k - 1] + v2[k] * v2[k]);
  }

  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + w < n; ++k) {
    const double A = p11[k + w] - p11[k];
    const double B = p12[k + w] - p12[k];
    const double C = p22[k + w] - p22[k];
    const double mid = 0.5 * (A + C);
    const double rad = std::sqrt(0.25 * (A - C) * (A - C) + B * B);
    worst = std::min(worst, mid - rad);
  }
  return worst;
}

UpeReport upe_check(const Trajectory& traj, const std::vector<double>& lambda_grid,
                    const std::vector<double>& theta_grid, double window_T,
                    double delta, const BearingParams& p, double lambda_true) {
  if (lambda_grid.empty() || theta_grid.empty()) {
    throw ConfigError("upe_check: empty parameter grid");
  }
  const auto& y = traj.channel("y");
  const auto& q1 = traj.channel("q1");
  const auto& q2 = traj.channel("q2");
  const std::size_t n = traj.size();
  const double dt = traj.step;
  if (window_T > traj.times.back() - traj.times.front()) {
    throw ConfigError("upe_check: window longer than trajectory");
  }

  const double decay = std::exp(-dt);
  UpeReport report;
  report.delta = delta;
  report.window_T = window_T;
  report.pass = true;

  std::vector<double> m21(n), r1_base(n);
  for (double lp : lambda_grid) {
    // m21: unit low-pass of phi(t, y, lambda'); same trapezoid kernel as r1.
    m21[0] = 0.0;
    double prev_phi = bearing_phi(y[0], lp, q1[0], q2[0], p);
    // r1_base: R1 at theta = 1 (R1 is linear in theta).
    r1_base[0] = 0.0;
    double prev_f = xi_averaged_sensitivity(y[0], q1[0], q2[0], lp, lambda_true, p);
    for (std::size_t k = 1; k < n; ++k) {
      const double phi = bearing_phi(y[k], lp, q1[k], q2[k], p);
      m21[k] = decay * m21[k - 1] + 0.5 * dt * (decay * prev_phi + phi);
      prev_phi = phi;
      const double f = xi_averaged_sensitivity(y[k], q1[k], q2[k], lp, lambda_true, p);
      r1_base[k] = decay * r1_base[k - 1] + 0.5 * dt * (decay * prev_f + f);
      prev_f = f;
    }
    for (double th : theta_grid) {
      std::vector<double> r1(n);
      for (std::size_t k = 0; k < n; ++k) r1[k] = th * r1_base[k];
      const double eig = gram_min_eig_over_windows(traj.times, m21, r1, window_T);
      report.rows.push_back({lp, th, eig});
      if (eig < delta) report.pass = false;
    }
  }
  return report;
}

}  // namespace nlobsv
