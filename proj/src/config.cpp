#include "nlobsv/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace nlobsv {

using nlohmann::json;

std::string to_string(SystemKind kind) {
  switch (kind) {
    case SystemKind::kExample1: return "example1";
    case SystemKind::kExample2: return "example2";
    case SystemKind::kBearing: return "bearing";
  }
  return "unknown";
}

SystemKind system_kind_from_string(const std::string& s) {
  if (s == "example1") return SystemKind::kExample1;
  if (s == "example2") return SystemKind::kExample2;
  if (s == "bearing") return SystemKind::kBearing;
  throw ConfigError("unknown system kind: " + s);
}

void ExperimentConfig::validate() const {
  if (!(step > 0)) throw ConfigError("step must be positive");
  if (!(horizon > 0)) throw ConfigError("horizon must be positive");
  step_count(0.0, horizon, step);
  if (record_stride == 0) throw ConfigError("record_stride must be >= 1");
  gains.validate();
  if (system == SystemKind::kBearing) {
    bearing.validate();
    if (plant_ic.size() != 4) throw ConfigError("bearing plant_ic must have 4 entries");
    if (observer_ic.size() != 2) throw ConfigError("observer_ic must have 2 entries");
    const Interval box{0.8, 1.2};
    if (!box.contains(lambda_hat0)) {
      throw ConfigError("lambda_hat0 outside [0.8, 1.2]");
    }
  } else {
    if (plant_ic.size() != 2) throw ConfigError("plant_ic must have 2 entries");
    if (observer_ic.size() != 2) throw ConfigError("observer_ic must have 2 entries");
    if (system == SystemKind::kExample1) {
      example1_spec().validate();
    } else {
      example2_spec().validate();
    }
    if (!omega_lambda.contains(lambda_hat0)) {
      throw ConfigError("lambda_hat0 outside omega_lambda");
    }
  }
  if (envelope.n < 1) throw ConfigError("envelope n must be >= 1");
  if (envelope.domain_lambda.empty() || envelope.domain_theta.empty()) {
    throw ConfigError("envelope sampling domain is empty");
  }
  if (!(upe.window_T > 0)) throw ConfigError("upe window must be positive");
}

Example1Spec ExperimentConfig::example1_spec() const {
  return {lambda_true, theta_true, omega_lambda, omega_theta};
}

Example2Spec ExperimentConfig::example2_spec() const {
  return {lambda_true, theta_true, omega_lambda, omega_theta};
}

namespace {

json interval_to_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

Interval interval_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("interval must be [lo, hi]");
  return {j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
  json j;
  j["system"] = to_string(c.system);
  j["true_params"] = {{"lambda", c.lambda_true}, {"theta", c.theta_true}};
  j["domains"] = {{"omega_lambda", interval_to_json(c.omega_lambda)},
                  {"omega_theta", interval_to_json(c.omega_theta)}};
  j["gains"] = {{"gamma_theta", c.gains.gamma_theta},
                {"gamma", c.gains.gamma},
                {"l", json::array({c.gains.l[0], c.gains.l[1]})}};
  j["plant_ic"] = c.plant_ic;
  j["observer_ic"] = {{"state", c.observer_ic},
                      {"theta_hat0", c.theta_hat0},
                      {"lambda_hat0", c.lambda_hat0}};
  if (c.system == SystemKind::kBearing) {
    const auto& p = c.bearing;
    j["bearing_params"] = {
        {"a", p.a},     {"b", p.b},         {"c", p.c},
        {"R", p.R},     {"N", p.N},         {"L", p.L},
        {"J", p.J},     {"V_s", p.V_s},     {"g_air", p.g_air},
        {"h_flux", p.h_flux},
        {"magnet_on_positive", p.selection == MagnetSelection::kMagnet1 ? 1 : 2}};
  }
  j["step"] = c.step;
  j["horizon"] = c.horizon;
  j["record_stride"] = c.record_stride;
  j["seed"] = c.seed;
  j["envelope"] = {{"n", c.envelope.n},
                   {"domain_lambda", interval_to_json(c.envelope.domain_lambda)},
                   {"domain_theta", interval_to_json(c.envelope.domain_theta)}};
  j["upe"] = {{"lambda_grid", c.upe.lambda_grid},
              {"theta_grid", c.upe.theta_grid},
              {"window", c.upe.window_T},
              {"delta", c.upe.delta}};
  j["output_dir"] = c.output_dir;
  return j.dump(2);
}

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  try {
    ExperimentConfig c;
    c.system = system_kind_from_string(j.at("system").get<std::string>());
    const auto& tp = j.at("true_params");
    c.lambda_true = tp.at("lambda").get<double>();
    c.theta_true = tp.at("theta").get<double>();
    if (j.contains("domains")) {
      c.omega_lambda = interval_from_json(j["domains"].at("omega_lambda"));
      c.omega_theta = interval_from_json(j["domains"].at("omega_theta"));
    }
    const auto& g = j.at("gains");
    c.gains.gamma_theta = g.at("gamma_theta").get<double>();
    c.gains.gamma = g.at("gamma").get<double>();
    if (g.contains("l")) {
      c.gains.l[0] = g["l"][0].get<double>();
      c.gains.l[1] = g["l"][1].get<double>();
    }
    c.plant_ic = j.at("plant_ic").get<std::vector<double>>();
    const auto& oic = j.at("observer_ic");
    c.observer_ic = oic.at("state").get<std::vector<double>>();
    c.theta_hat0 = oic.at("theta_hat0").get<double>();
    c.lambda_hat0 = oic.at("lambda_hat0").get<double>();
    if (c.system == SystemKind::kBearing) {
      const auto& bp = j.at("bearing_params");
      auto& p = c.bearing;
      p.a = bp.at("a").get<double>();
      p.b = bp.at("b").get<double>();
      p.c = bp.at("c").get<double>();
      p.R = bp.at("R").get<double>();
      p.N = bp.at("N").get<double>();
      p.L = bp.at("L").get<double>();
      p.J = bp.at("J").get<double>();
      p.V_s = bp.at("V_s").get<double>();
      p.g_air = bp.at("g_air").get<double>();
      p.h_flux = bp.value("h_flux", 1e5);
      const int sel = bp.value("magnet_on_positive", 1);
      if (sel != 1 && sel != 2) throw ConfigError("magnet_on_positive must be 1 or 2");
      p.selection = sel == 1 ? MagnetSelection::kMagnet1 : MagnetSelection::kMagnet2;
      p.theta_true = c.theta_true;
      p.lambda_true = c.lambda_true;
      c.omega_lambda = {0.8, 1.2};
      c.omega_theta = {0.8, 1.2};
    }
    c.step = j.at("step").get<double>();
    c.horizon = j.at("horizon").get<double>();
    c.record_stride = j.value("record_stride", std::size_t{1});
    c.seed = j.value("seed", std::uint64_t{1});
    if (j.contains("envelope")) {
      const auto& e = j["envelope"];
      c.envelope.n = e.at("n").get<std::size_t>();
      c.envelope.domain_lambda = interval_from_json(e.at("domain_lambda"));
      c.envelope.domain_theta = interval_from_json(e.at("domain_theta"));
    }
    if (j.contains("upe")) {
      const auto& u = j["upe"];
      c.upe.lambda_grid = u.at("lambda_grid").get<std::vector<double>>();
      c.upe.theta_grid = u.at("theta_grid").get<std::vector<double>>();
      c.upe.window_T = u.at("window").get<double>();
      c.upe.delta = u.at("delta").get<double>();
    }
    c.output_dir = j.value("output_dir", std::string("out"));
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config field error: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = serialize_config(config);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

}  // namespace nlobsv
