// Experiment runner: simulate the benchmark systems, estimate comparison
// functions by Monte Carlo lower envelopes, run numerical UPE checks, and
// render CSV data as SVG plots.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nlobsv/csv.hpp"
#include "nlobsv/identifiability.hpp"
#include "nlobsv/sim.hpp"
#include "nlobsv/svg.hpp"

namespace fs = std::filesystem;
using namespace nlobsv;

namespace {

enum class LogLevel { kError = 0, kWarn, kInfo, kDebug };

LogLevel g_log_level = LogLevel::kWarn;

void init_log_level() {
  const char* env = std::getenv("NLOBSV_LOG");
  if (env == nullptr) return;
  const std::string v = env;
  if (v == "error") g_log_level = LogLevel::kError;
  else if (v == "warn") g_log_level = LogLevel::kWarn;
  else if (v == "info") g_log_level = LogLevel::kInfo;
  else if (v == "debug") g_log_level = LogLevel::kDebug;
}

void log_at(LogLevel level, const std::string& tag, const std::string& msg) {
  if (level <= g_log_level) std::fprintf(stderr, "[%s] %s\n", tag.c_str(), msg.c_str());
}
void log_info(const std::string& msg) { log_at(LogLevel::kInfo, "info", msg); }
void log_error(const std::string& msg) { log_at(LogLevel::kError, "error", msg); }

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned threads = 1;
};

ExperimentConfig load_and_override(const CommonOpts& opts) {
  ExperimentConfig config = load_config(opts.config_path);
  if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
  if (opts.seed_set) config.seed = opts.seed;
  config.validate();
  fs::create_directories(config.output_dir);
  log_info("config hash " + config_hash(config) + ", seed " + std::to_string(config.seed));
  return config;
}

void write_summary(const ExperimentConfig& config, const RunSummary& s,
                   const std::string& path) {
  nlohmann::json j;
  j["system"] = s.system;
  j["converged"] = s.converged;
  j["t_converged"] = s.t_converged;
  j["final_lambda_hat"] = s.final_lambda_hat;
  j["final_theta_hat"] = s.final_theta_hat;
  j["final_mismatch"] = s.final_mismatch;
  j["max_abs_e"] = s.max_abs_e;
  j["max_abs_y"] = s.max_abs_y;
  j["lambda_in_domain"] = s.lambda_in_domain;
  j["radicand_clamps"] = s.radicand_clamps;
  j["seed"] = config.seed;
  j["config_hash"] = config_hash(config);
  std::ofstream out(path, std::ios::binary);
  out << j.dump(2) << '\n';
}

int cmd_simulate(const CommonOpts& opts) {
  ExperimentConfig config = load_and_override(opts);
  RunResult result = run_simulation(config);
  const fs::path dir = config.output_dir;

  write_trajectory_csv((dir / "trajectory.csv").string(), result.traj);
  write_summary(config, result.summary, (dir / "summary.json").string());

  const auto& t = result.traj.times;
  SvgPlot states("state reconstruction (" + result.summary.system + ")", "t [s]", "x2");
  states.add_line(t, result.traj.channel("x2"), "blue", "x2");
  states.add_line(t,
                  result.traj.has_channel("xhat2") ? result.traj.channel("xhat2")
                                                   : result.traj.channel("x2_rec"),
                  "red", "estimate");
  states.write((dir / "states.svg").string());

  SvgPlot est("parameter estimates (" + result.summary.system + ")", "t [s]", "value");
  est.add_line(t, result.traj.channel("lambda_hat"), "red", "lambda_hat");
  est.add_line(t, result.traj.channel("theta_hat"), "green", "theta_hat");
  est.write((dir / "estimates.svg").string());

  log_info("radicand clamps: " + std::to_string(result.summary.radicand_clamps));
  std::printf("converged=%s lambda_hat=%.6g theta_hat=%.6g mismatch=%.6g\n",
              result.summary.converged ? "true" : "false", result.summary.final_lambda_hat,
              result.summary.final_theta_hat, result.summary.final_mismatch);
  return 0;
}

int cmd_envelope(const CommonOpts& opts) {
  ExperimentConfig config = load_and_override(opts);
  if (config.system == SystemKind::kBearing) {
    throw ConfigError("envelope estimation applies to example1/example2");
  }
  const bool product = config.system == SystemKind::kExample1;
  MismatchFn fn{product ? MismatchFn::Kind::kProduct : MismatchFn::Kind::kExpAdditive,
                config.lambda_true, config.theta_true, {}};
  ESetSpec eset = product ? eset_product(config.lambda_true, config.theta_true)
                          : eset_exp_additive(config.lambda_true, config.theta_true);

  EnvelopeEstimate est =
      sample_envelope(fn, eset, config.envelope.domain_lambda, config.envelope.domain_theta,
                      config.envelope.n, config.seed, opts.threads);

  const fs::path dir = config.output_dir;
  write_csv((dir / "scatter.csv").string(), {"d_e", "m_e"}, {&est.d_e, &est.m_e});
  write_csv((dir / "envelope.csv").string(), {"d", "beta_hat"},
            {&est.envelope.d, &est.envelope.m});

  const auto dec = est.decimated();
  std::vector<double> dd, dm;
  for (const auto& [d, m] : dec) {
    dd.push_back(d);
    dm.push_back(m);
  }
  SvgPlot plot("comparison-function estimate (" + to_string(config.system) + ")",
               "distance to E", "mismatch");
  plot.add_scatter(est.d_e, est.m_e, "steelblue", 1.2, "samples");
  plot.add_line(dd, dm, "red", "lower envelope");
  plot.write((dir / "envelope.svg").string());

  std::printf("n=%zu seed=%llu envelope_at_0=%.6g envelope_max=%.6g\n", est.d_e.size(),
              static_cast<unsigned long long>(est.seed), est.envelope.m.front(),
              est.envelope.m.back());
  return 0;
}

int cmd_upe(const CommonOpts& opts, bool synthetic) {
  if (synthetic) {
    // Closed-form check hook: v = (cos t, sin t) over a 2*pi window has
    // windowed Gram pi * I.
    const double dt = 1e-3;
    std::vector<double> t, v1, v2;
    for (double tt = 0.0; tt <= 4.0 * M_PI + 1e-12; tt += dt) {
      t.push_back(tt);
      v1.push_back(std::cos(tt));
      v2.push_back(std::sin(tt));
    }
    const double eig = gram_min_eig_over_windows(t, v1, v2, 2.0 * M_PI);
    std::printf("synthetic min excitation: %.12g (expected %.12g)\n", eig, M_PI);
    return 0;
  }

  ExperimentConfig config = load_and_override(opts);
  if (config.system != SystemKind::kBearing) {
    throw ConfigError("upe-check requires a bearing config");
  }
  if (config.upe.lambda_grid.empty() || config.upe.theta_grid.empty()) {
    throw ConfigError("upe-check: empty parameter grids");
  }
  log_info("running bearing simulation for the UPE trajectory");
  RunResult result = run_bearing(config);
  UpeReport report =
      upe_check(result.traj, config.upe.lambda_grid, config.upe.theta_grid,
                config.upe.window_T, config.upe.delta, config.bearing, config.lambda_true);

  std::vector<double> lg, tg, me;
  for (const auto& row : report.rows) {
    lg.push_back(row.lambda_prime);
    tg.push_back(row.theta);
    me.push_back(row.min_excitation);
  }
  const fs::path dir = config.output_dir;
  write_csv((dir / "upe.csv").string(), {"lambda_prime", "theta", "min_excitation"},
            {&lg, &tg, &me});

  double worst = report.rows.front().min_excitation;
  for (const auto& row : report.rows) worst = std::min(worst, row.min_excitation);
  std::printf("upe %s: %zu grid pairs, worst excitation %.6g, delta %.6g\n",
              report.pass ? "PASS" : "FAIL", report.rows.size(), worst, report.delta);
  return 0;
}

int cmd_plot(const std::string& csv_path, const std::string& x_col,
             const std::vector<std::string>& y_cols, const std::string& out_path) {
  CsvTable table = read_csv(csv_path);
  const auto& xs = table.column(x_col);
  SvgPlot plot(fs::path(csv_path).filename().string(), x_col, "value");
  const char* colors[] = {"blue", "red", "green", "orange", "purple", "brown"};
  std::size_t i = 0;
  for (const auto& name : y_cols) {
    plot.add_line(xs, table.column(name), colors[i++ % 6], name);
  }
  plot.write(out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  init_log_level();
  CLI::App app{"adaptive-observer benchmark toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  auto add_common = [&](CLI::App* sub, bool config_required = true) {
    sub->add_option("--config", opts.config_path, "experiment config (JSON)")
        ->required(config_required);
    sub->add_option("--out", opts.out_dir, "output directory (overrides config)");
    sub->add_option("--seed", opts.seed, "RNG seed (overrides config)")
        ->each([&](const std::string&) { opts.seed_set = true; });
    sub->add_option("--threads", opts.threads, "worker threads");
  };

  auto* simulate = app.add_subcommand("simulate", "run plant + observer");
  add_common(simulate);

  auto* envelope = app.add_subcommand("envelope", "Monte Carlo envelope estimate");
  add_common(envelope);

  bool synthetic = false;
  auto* upe = app.add_subcommand("upe-check", "numerical persistent-excitation check");
  add_common(upe, false);
  upe->add_flag("--synthetic", synthetic, "closed-form (cos, sin) regressor check");

  std::string plot_csv, plot_x = "t", plot_out = "plot.svg";
  std::vector<std::string> plot_y;
  auto* plot = app.add_subcommand("plot", "re-render an SVG from an existing CSV");
  plot->add_option("--csv", plot_csv, "input CSV")->required();
  plot->add_option("--x", plot_x, "x column");
  plot->add_option("--y", plot_y, "y columns")->required();
  plot->add_option("--svg", plot_out, "output SVG path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(opts);
    if (envelope->parsed()) return cmd_envelope(opts);
    if (upe->parsed()) {
      if (!synthetic && opts.config_path.empty()) {
        throw ConfigError("upe-check requires --config unless --synthetic");
      }
      return cmd_upe(opts, synthetic);
    }
    if (plot->parsed()) return cmd_plot(plot_csv, plot_x, plot_y, plot_out);
  } catch (const ConfigError& e) {
    log_error(e.what());
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const IntegrationDivergedError& e) {
    log_error(e.what());
    std::fprintf(stderr, "numerical divergence: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    log_error(e.what());
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
