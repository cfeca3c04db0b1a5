#pragma once

// Experiment configuration: one JSON document fully describing a run.

#include <cstdint>
#include <string>
#include <vector>

#include "nlobsv/observers.hpp"
#include "nlobsv/systems.hpp"

namespace nlobsv {

enum class SystemKind : std::uint8_t { kExample1, kExample2, kBearing };

std::string to_string(SystemKind kind);
SystemKind system_kind_from_string(const std::string& s);

struct EnvelopeSettings {
  std::size_t n = 10000;
  Interval domain_lambda{0.5, 3.0};
  Interval domain_theta{-10.0, 10.0};
};

struct UpeSettings {
  std::vector<double> lambda_grid;
  std::vector<double> theta_grid;
  double window_T = 20.0;
  double delta = 1e-12;
};

struct ExperimentConfig {
  SystemKind system = SystemKind::kExample1;
  double lambda_true = 2.0;
  double theta_true = 1.5;
  Interval omega_lambda{0.5, 3.0};
  Interval omega_theta{1.0, 3.0};
  ObserverGains gains;
  std::vector<double> plant_ic{0.0, 0.0};   // (x1, x2) or (x1, x2, q1, q2)
  std::vector<double> observer_ic{0.0, 0.0};  // xhat or zeta-hat
  double theta_hat0 = 1.0;
  double lambda_hat0 = 1.0;
  BearingParams bearing;  // used when system == kBearing
  double step = 1e-3;
  double horizon = 100.0;
  std::size_t record_stride = 1;
  std::uint64_t seed = 1;
  EnvelopeSettings envelope;
  UpeSettings upe;
  std::string output_dir = "out";

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  Example1Spec example1_spec() const;
  Example2Spec example2_spec() const;
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a hash of the serialized config, as hex.
std::string config_hash(const ExperimentConfig& config);

}  // namespace nlobsv
