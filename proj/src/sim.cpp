#include "nlobsv/sim.hpp"

#include <cmath>

namespace nlobsv {

namespace {

void summarize_channels(const Trajectory& traj, const Interval& omega_lambda,
                        RunSummary& s) {
  const auto& e = traj.channel("e");
  const auto& lam = traj.channel("lambda_hat");
  const auto& y = traj.has_channel("y") ? traj.channel("y") : traj.channel("x1");

  double t_last_bad = traj.times.front();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const double ae = std::abs(e[k]);
    s.max_abs_e = std::max(s.max_abs_e, ae);
    s.max_abs_y = std::max(s.max_abs_y, std::abs(y[k]));
    if (ae >= kConvergenceThreshold) t_last_bad = traj.times[k];
    if (!omega_lambda.contains(lam[k])) s.lambda_in_domain = false;
  }
  const double tf = traj.times.back();
  s.converged = tf - t_last_bad >= kConvergenceWindow;
  if (s.converged) s.t_converged = t_last_bad + kConvergenceWindow;
  s.final_lambda_hat = lam.back();
  s.final_theta_hat = traj.channel("theta_hat").back();
}

}  // namespace

RunResult run_example(const ExperimentConfig& config) {
  config.validate();
  const bool product = config.system == SystemKind::kExample1;
  const Example1Spec spec1 = config.example1_spec();
  const Example2Spec spec2 = config.example2_spec();
  const ObserverGains gains = config.gains;
  const Interval omega = config.omega_lambda;

  RhsFn rhs = [&, product](double, const StateVector& x, StateVector& dxdt) {
    const StateVector plant{x[0], x[1]};
    const StateVector obs{x[2], x[3], x[4], x[5]};
    const double y = x[0];
    StateVector dp = product
        ? example1_rhs(plant, spec1.theta_true, spec1.lambda_true)
        : example2_rhs(plant, spec2.theta_true, spec2.lambda_true);
    StateVector dob = product ? example_observer_rhs(obs, y, spec1, gains)
                              : example_observer_rhs(obs, y, spec2, gains);
    dxdt = {dp[0], dp[1], dob[0], dob[1], dob[2], dob[3]};
  };

  StateVector x0{config.plant_ic[0], config.plant_ic[1],
                 config.observer_ic[0], config.observer_ic[1],
                 config.theta_hat0, phase_from_lambda(config.lambda_hat0, omega)};

  RecordSpec rec;
  rec.stride = config.record_stride;
  rec.add_state("x1", 0);
  rec.add_state("x2", 1);
  rec.add_state("xhat1", 2);
  rec.add_state("xhat2", 3);
  rec.add_state("theta_hat", 4);
  rec.add_state("sigma", 5);
  rec.add("lambda_hat",
          [omega](double, const StateVector& x) { return lambda_from_phase(x[5], omega); });
  rec.add("e", [](double, const StateVector& x) { return x[2] - x[0]; });

  RunResult result;
  result.traj = integrate(rhs, x0, 0.0, config.horizon, config.step, rec,
                          {"x1", "x2", "xhat1", "xhat2", "theta_hat", "sigma"});

  RunSummary& s = result.summary;
  s.system = to_string(config.system);
  summarize_channels(result.traj, omega, s);
  MismatchFn fn{product ? MismatchFn::Kind::kProduct : MismatchFn::Kind::kExpAdditive,
                config.lambda_true, config.theta_true, {}};
  s.final_mismatch = fn(s.final_lambda_hat, s.final_theta_hat);
  return result;
}

RunResult run_bearing(const ExperimentConfig& config) {
  config.validate();
  const BearingParams& p = config.bearing;
  const ObserverGains gains = config.gains;
  const Interval omega{0.8, 1.2};
  const double h = config.step;
  const std::size_t n_steps = step_count(0.0, config.horizon, h);
  const std::size_t stride = config.record_stride;

  // State layout: x1 x2 q1 q2 | xh1 xh2 | z1 z2 th m11 m21 sigma.
  const std::vector<std::string> names{"y",  "x2",  "q1",  "q2", "xh1", "xh2",
                                       "z1", "z2",  "th",  "m11", "m21", "sigma"};
  StateVector x{config.plant_ic[0], config.plant_ic[1], config.plant_ic[2],
                config.plant_ic[3], config.plant_ic[0], 0.0,
                config.observer_ic[0], config.observer_ic[1], config.theta_hat0,
                0.0, 0.0, phase_from_lambda(config.lambda_hat0, omega)};

  std::uint64_t clamps = 0;
  double u1 = 0.0;
  double u2 = 0.0;

  RhsFn rhs = [&](double t, const StateVector& s, StateVector& dxdt) {
    const StateVector plant{s[0], s[1], s[2], s[3]};
    const double y = s[0];
    StateVector dp = bearing_rhs(plant, t, u1, u2, p.theta_true, p.lambda_true, p);
    const double phi_nom = bearing_phi(y, 1.0, s[2], s[3], p);
    StateVector dh = high_gain_observer_rhs({s[4], s[5]}, y, phi_nom);
    StateVector dob = bearing_observer_rhs({s[6], s[7], s[8], s[9], s[10], s[11]}, y, t,
                                           p, gains, s[2], s[3]);
    dxdt = {dp[0], dp[1], dp[2], dp[3], dh[0], dh[1],
            dob[0], dob[1], dob[2], dob[3], dob[4], dob[5]};
  };

  Trajectory traj;
  traj.step = h * static_cast<double>(stride);
  traj.names = {"y",  "x2",  "q1",        "q2",         "xh2",   "z1", "z2",
                "m21", "theta_hat", "lambda_hat", "sigma", "e",  "u1", "u2",
                "x2_rec"};
  traj.channels.assign(traj.names.size(), {});

  auto record_point = [&](double t) {
    const double lam = lambda_from_phase(x[11], omega);
    const double vals[] = {x[0], x[1], x[2], x[3], x[5], x[6], x[7], x[10], x[8],
                           lam,  x[11], x[6] - x[0], u1, u2, x[7] + x[10] * x[8]};
    traj.times.push_back(t);
    for (std::size_t i = 0; i < traj.names.size(); ++i) {
      traj.channels[i].push_back(vals[i]);
    }
  };

  std::vector<StateVector> scratch;
  auto check = [&](double t) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!std::isfinite(x[i]) || std::abs(x[i]) > kDivergenceBound) {
        throw IntegrationDivergedError(names[i], t);
      }
    }
  };

  check(0.0);
  for (std::size_t k = 0; k <= n_steps; ++k) {
    const double t = static_cast<double>(k) * h;
    // Control sampled and held at grid points; x2 from the high-gain observer.
    const ControlOutput u = switching_control(x[0], x[5], x[2], x[3], p, &clamps);
    u1 = u.u1;
    u2 = u.u2;
    if (k % stride == 0) record_point(t);
    if (k == n_steps) break;
    rk4_step_inplace(rhs, t, x, h, scratch);
    check(t + h);
  }

  RunResult result;
  result.traj = std::move(traj);
  RunSummary& s = result.summary;
  s.system = to_string(config.system);
  s.radicand_clamps = clamps;
  summarize_channels(result.traj, omega, s);
  s.final_mismatch = std::hypot(s.final_lambda_hat - config.lambda_true,
                                s.final_theta_hat - config.theta_true);
  return result;
}

RunResult run_simulation(const ExperimentConfig& config) {
  return config.system == SystemKind::kBearing ? run_bearing(config)
                                               : run_example(config);
}

}  // namespace nlobsv
