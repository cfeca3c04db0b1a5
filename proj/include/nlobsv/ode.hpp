#pragma once

// Fixed-step RK4 integration with named-channel recording.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlobsv {

/// Plant/observer state. Dimension is fixed over a run; entries must stay
/// finite (the integrator aborts otherwise).
using StateVector = std::vector<double>;

/// Right-hand side written into `dxdt` (same dimension as `x`).
using RhsFn = std::function<void(double t, const StateVector& x, StateVector& dxdt)>;

/// Channel extractor: any scalar signal derived from (t, x).
using ChannelFn = std::function<double(double t, const StateVector& x)>;

/// Raised when a state entry leaves the finite range during integration.
class IntegrationDivergedError : public std::runtime_error {
 public:
  IntegrationDivergedError(const std::string& channel, double t);
  const std::string& channel() const { return channel_; }
  double time() const { return time_; }

 private:
  std::string channel_;
  double time_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Time-indexed record of named signals from one run.
struct Trajectory {
  std::vector<double> times;
  std::vector<std::string> names;
  std::vector<std::vector<double>> channels;  // channels[i].size() == times.size()
  double step = 0.0;                          // grid spacing of `times`

  const std::vector<double>& channel(const std::string& name) const;
  bool has_channel(const std::string& name) const;
  std::size_t size() const { return times.size(); }

  /// Checks equal channel lengths and uniform time grid (1 relative ulp-ish).
  void check_invariants() const;
};

/// Classical RK4 update. Deterministic for identical inputs.
StateVector rk4_step(const RhsFn& rhs, double t, const StateVector& x, double h);

/// In-place variant used by the integration loop; `scratch` holds 5 vectors.
void rk4_step_inplace(const RhsFn& rhs, double t, StateVector& x, double h,
                      std::vector<StateVector>& scratch);

/// Any |entry| above this (or a non-finite entry) aborts the run.
inline constexpr double kDivergenceBound = 1e12;

struct RecordSpec {
  std::vector<std::string> names;
  std::vector<ChannelFn> extractors;
  /// Record every `stride`-th grid point (trajectory spacing = h * stride).
  std::size_t stride = 1;

  void add(const std::string& name, ChannelFn fn);
  /// Record state entry `index` under `name`.
  void add_state(const std::string& name, std::size_t index);
};

/// Repeated rk4_step from t0 to tf; records all channels at every recorded
/// point including t0. `state_names`, when given, label divergence diagnostics.
Trajectory integrate(const RhsFn& rhs, const StateVector& x0, double t0, double tf,
                     double h, const RecordSpec& record,
                     const std::vector<std::string>& state_names = {});

/// Number of RK4 steps implied by (t0, tf, h); throws ConfigError unless h
/// divides the span within one step of rounding.
std::size_t step_count(double t0, double tf, double h);

}  // namespace nlobsv
