#include "nlobsv/ode.hpp"

#include <cmath>
#include <cstdio>

namespace nlobsv {

IntegrationDivergedError::IntegrationDivergedError(const std::string& channel, double t)
    : std::runtime_error("integration diverged: channel '" + channel + "' at t=" +
                         std::to_string(t)),
      channel_(channel),
      time_(t) {}

const std::vector<double>& Trajectory::channel(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return channels[i];
  }
  throw std::out_of_range("no such channel: " + name);
}

bool Trajectory::has_channel(const std::string& name) const {
  for (const auto& n : names) {
    if (n == name) return true;
  }
  return false;
}

void Trajectory::check_invariants() const {
  for (const auto& c : channels) {
    if (c.size() != times.size()) throw std::logic_error("channel length mismatch");
  }
  for (std::size_t k = 0; k + 1 < times.size(); ++k) {
    const double dt = times[k + 1] - times[k];
    if (std::abs(dt - step) > 1e-9 * std::max(1.0, std::abs(times[k + 1]))) {
      throw std::logic_error("non-uniform time grid");
    }
  }
}

void RecordSpec::add(const std::string& name, ChannelFn fn) {
  names.push_back(name);
  extractors.push_back(std::move(fn));
}

void RecordSpec::add_state(const std::string& name, std::size_t index) {
  add(name, [index](double, const StateVector& x) { return x.at(index); });
}

StateVector rk4_step(const RhsFn& rhs, double t, const StateVector& x, double h) {
  if (!(h > 0)) throw ConfigError("rk4_step: h must be positive");
  std::vector<StateVector> scratch;
  StateVector out = x;
  rk4_step_inplace(rhs, t, out, h, scratch);
  return out;
}

void rk4_step_inplace(const RhsFn& rhs, double t, StateVector& x, double h,
                      std::vector<StateVector>& scratch) {
  const std::size_t n = x.size();
  scratch.resize(5);
  for (auto& s : scratch) s.resize(n);
  StateVector& k1 = scratch[0];
  StateVector& k2 = scratch[1];
  StateVector& k3 = scratch[2];
  StateVector& k4 = scratch[3];
  StateVector& tmp = scratch[4];

  rhs(t, x, k1);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
  rhs(t + 0.5 * h, tmp, k2);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
  rhs(t + 0.5 * h, tmp, k3);
  for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
  rhs(t + h, tmp, k4);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
}

std::size_t step_count(double t0, double tf, double h) {
  if (!(h > 0)) throw ConfigError("step h must be positive");
  if (!(tf > t0)) throw ConfigError("horizon must satisfy tf > t0");
  const double span = tf - t0;
  const auto n = static_cast<std::size_t>(std::llround(span / h));
  if (n < 1 || std::abs(static_cast<double>(n) * h - span) > 1e-9 * std::max(1.0, span)) {
    throw ConfigError("step h does not divide the horizon");
  }
  return n;
}

namespace {

void check_finite(const StateVector& x, double t, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || std::abs(x[i]) > kDivergenceBound) {
      std::string name = i < names.size() ? names[i] : "state[" + std::to_string(i) + "]";
      throw IntegrationDivergedError(name, t);
    }
  }
}

}  // namespace

Trajectory integrate(const RhsFn& rhs, const StateVector& x0, double t0, double tf,
                     double h, const RecordSpec& record,
                     const std::vector<std::string>& state_names) {
  if (record.names.empty()) throw ConfigError("integrate: empty channel map");
  const std::size_t stride = record.stride == 0 ? 1 : record.stride;
  const std::size_t n_steps = step_count(t0, tf, h);

  Trajectory traj;
  traj.step = h * static_cast<double>(stride);
  traj.names = record.names;
  traj.channels.assign(record.names.size(), {});
  const std::size_t n_rec = n_steps / stride + 1;
  traj.times.reserve(n_rec);
  for (auto& c : traj.channels) c.reserve(n_rec);

  StateVector x = x0;
  std::vector<StateVector> scratch;
  check_finite(x, t0, state_names);

  auto record_point = [&](double t) {
    traj.times.push_back(t);
    for (std::size_t i = 0; i < record.extractors.size(); ++i) {
      traj.channels[i].push_back(record.extractors[i](t, x));
    }
  };

  record_point(t0);
  for (std::size_t k = 0; k < n_steps; ++k) {
    const double t = t0 + static_cast<double>(k) * h;
    rk4_step_inplace(rhs, t, x, h, scratch);
    check_finite(x, t + h, state_names);
    if ((k + 1) % stride == 0) record_point(t0 + static_cast<double>(k + 1) * h);
  }
  return traj;
}

}  // namespace nlobsv
