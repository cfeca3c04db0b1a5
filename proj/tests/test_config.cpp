#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <string>

#include "nlobsv/config.hpp"
#include "nlobsv/csv.hpp"

using namespace nlobsv;

#ifndef NLOBSV_CONFIG_DIR
#error "NLOBSV_CONFIG_DIR must point at the shipped configs"
#endif

namespace {

const std::string kConfigDir = NLOBSV_CONFIG_DIR;

ExperimentConfig sample_config() {
  ExperimentConfig c;
  c.system = SystemKind::kExample2;
  c.gains.gamma = 0.05;
  c.plant_ic = {1.0, 0.5};
  c.observer_ic = {0.0, 0.0};
  c.step = 1e-3;
  c.horizon = 10.0;
  c.seed = 99;
  c.envelope.n = 123;
  c.upe.lambda_grid = {0.9, 1.1};
  c.upe.theta_grid = {1.0};
  c.output_dir = "scratch";
  return c;
}

}  // namespace

TEST_CASE("system kind names round-trip") {
  for (SystemKind k :
       {SystemKind::kExample1, SystemKind::kExample2, SystemKind::kBearing}) {
    CHECK(system_kind_from_string(to_string(k)) == k);
  }
  CHECK_THROWS_AS(system_kind_from_string("example3"), ConfigError);
}

TEST_CASE("config serialization round-trips") {
  const ExperimentConfig a = sample_config();
  const ExperimentConfig b = parse_config(serialize_config(a));
  CHECK(serialize_config(b) == serialize_config(a));
  CHECK(b.system == a.system);
  CHECK(b.gains.gamma == a.gains.gamma);
  CHECK(b.seed == a.seed);
  CHECK(b.envelope.n == a.envelope.n);
  CHECK(b.upe.lambda_grid == a.upe.lambda_grid);
  CHECK(b.output_dir == a.output_dir);
}

TEST_CASE("config hash is stable and sensitive") {
  const ExperimentConfig a = sample_config();
  ExperimentConfig b = sample_config();
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = 100;
  CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("validation rejects a step that does not divide the horizon") {
  ExperimentConfig c = sample_config();
  c.step = 0.3;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = sample_config();
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("validation enforces per-system state dimensions") {
  ExperimentConfig c = sample_config();
  c.plant_ic = {1.0, 0.5, 0.0};
  CHECK_THROWS_AS(c.validate(), ConfigError);

  c = sample_config();
  c.system = SystemKind::kBearing;
  // Bearing runs carry a 4-dimensional plant state.
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.plant_ic = {0.3, 0.0, 0.0, 0.0};
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("validation pins lambda_hat0 to the search interval") {
  ExperimentConfig c = sample_config();
  c.lambda_hat0 = 5.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("shipped configs load and validate") {
  for (const char* name : {"example1.json", "example2.json", "bearing-sample.json"}) {
    const ExperimentConfig c = load_config(kConfigDir + "/" + name);
    CHECK_NOTHROW(c.validate());
  }
  const ExperimentConfig e1 = load_config(kConfigDir + "/example1.json");
  CHECK(e1.system == SystemKind::kExample1);
  CHECK(e1.gains.gamma == doctest::Approx(0.1));
  CHECK(e1.gains.gamma_theta == doctest::Approx(1.0));
  CHECK(e1.envelope.n == 10000);
  const ExperimentConfig e2 = load_config(kConfigDir + "/example2.json");
  CHECK(e2.gains.gamma == doctest::Approx(0.05));
  CHECK(e2.envelope.n == 40000);
  const ExperimentConfig br = load_config(kConfigDir + "/bearing-sample.json");
  CHECK(br.system == SystemKind::kBearing);
  CHECK(br.gains.gamma_theta == doctest::Approx(1e5));
  CHECK(br.gains.gamma == doctest::Approx(150.0));
  CHECK(br.omega_lambda.lo == doctest::Approx(0.8));
  CHECK(br.omega_lambda.hi == doctest::Approx(1.2));
}

TEST_CASE("missing config file and malformed JSON raise ConfigError") {
  CHECK_THROWS_AS(load_config(kConfigDir + "/no-such.json"), ConfigError);
  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
  CHECK_THROWS_AS(parse_config("{}"), ConfigError);  // missing required fields
}

TEST_CASE("format_number keeps 17 significant digits") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1) == "0.10000000000000001");
  const double v = 0.1;
  CHECK(std::stod(format_number(v)) == v);
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("CSV writing round-trips bit-exactly") {
  const std::string path = "test_config_roundtrip.csv";
  std::vector<double> t{0.0, 0.5, 1.0};
  std::vector<double> x{1.0 / 3.0, -2e-13, 1e12};
  write_csv(path, {"t", "x"}, {&t, &x});
  const CsvTable table = read_csv(path);
  REQUIRE(table.headers.size() == 2);
  CHECK(table.headers[0] == "t");
  CHECK(table.column("t") == t);
  CHECK(table.column("x") == x);
  std::remove(path.c_str());
}

TEST_CASE("trajectory CSV carries a header and one row per sample") {
  Trajectory traj;
  traj.step = 0.5;
  traj.times = {0.0, 0.5, 1.0};
  traj.names = {"a", "b"};
  traj.channels = {{1.0, 2.0, 3.0}, {4.0, 5.0, 6.0}};
  const std::string path = "test_config_traj.csv";
  write_trajectory_csv(path, traj);
  const CsvTable table = read_csv(path);
  REQUIRE(table.headers.size() == 3);
  CHECK(table.headers[0] == "t");
  CHECK(table.column("a").size() == 3);
  CHECK(table.column("b")[2] == 6.0);
  std::remove(path.c_str());
}
