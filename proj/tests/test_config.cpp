#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>

#include "llab/config.hpp"
#include "llab/report.hpp"

using namespace llab;

TEST_CASE("defaults survive an empty config") {
  const auto cfg = parse_config(nlohmann::json::object());
  CHECK(cfg.a_plus == Rational(17, 10));
  CHECK(cfg.a_minus == Rational(41, 100));
  CHECK(cfg.k == 1);
  CHECK(cfg.grid_samples == 32);
  CHECK(cfg.tol_pullback == 1e-6);
  CHECK(cfg.format == "json");
}

TEST_CASE("full config round trip") {
  const auto j = nlohmann::json::parse(R"({
    "spec": {"a_plus": "5/2", "a_minus": "3/4"},
    "bundle": {"k": 2, "base_area": "1/2"},
    "tolerances": {"pullback": "1e-7", "integrator": "1e-10", "root_find": "1e-11"},
    "grid": {"samples": 16},
    "output": {"path": "out.json", "format": "csv"},
    "epsilon": "1/100"
  })");
  const auto cfg = parse_config(j);
  CHECK(cfg.a_plus == Rational(5, 2));
  CHECK(cfg.a_minus == Rational(3, 4));
  CHECK(cfg.k == 2);
  CHECK(cfg.base_area == Rational(1, 2));
  CHECK(cfg.tol_pullback == 1e-7);
  CHECK(cfg.tol_integrator == 1e-10);
  CHECK(cfg.grid_samples == 16);
  CHECK(cfg.output_path == "out.json");
  CHECK(cfg.format == "csv");
  REQUIRE(cfg.epsilon.has_value());
  CHECK(*cfg.epsilon == Rational(1, 100));
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"specs": {}})")), ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"spec": {"aplus": "1/2"}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"grid": {"samples": 16, "x": 1}})")),
                  ConfigError);
}

TEST_CASE("malformed values are schema errors") {
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"spec": {"a_plus": 1.7}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"spec": {"a_plus": "x/y"}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"bundle": {"k": "2"}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"grid": {"samples": 0}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"output": {"format": "xml"}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"({"tolerances": {"pullback": 1e-6}})")),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(nlohmann::json::parse(R"([1,2])")), ConfigError);
}

TEST_CASE("file loading reports missing files and bad JSON") {
  CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);
  const std::string path = "bad_config_test.json";
  std::ofstream(path) << "{ not json";
  CHECK_THROWS_AS(load_config(path), ConfigError);
  std::remove(path.c_str());
}

TEST_CASE("environment variable supplies the default config") {
  const std::string path = "env_config_test.json";
  std::ofstream(path) << R"({"bundle": {"k": 3}})";
  setenv("LLAB_CONFIG", path.c_str(), 1);
  const auto cfg = default_config();
  CHECK(cfg.k == 3);
  unsetenv("LLAB_CONFIG");
  CHECK(default_config().k == 1);
  std::remove(path.c_str());
}

TEST_CASE("report formatting is deterministic") {
  CHECK(format_real(0.25) == "2.500000000000e-01");
  CHECK(format_real(1e-9) == "1.000000000000e-09");
  ResidualRecord rec{"chart", {0.1, 0.2}, 1e-8, 1e-6};
  CHECK(rec.pass());
  const auto j = rec.to_json();
  CHECK(j["check"] == "chart");
  CHECK(j["pass"] == true);
  const auto report = residual_report("verify", {rec, {"flow", {}, 1e-3, 1e-6}});
  CHECK(report["schema"] == 1);
  CHECK(report["pass"] == false);
  // byte-identical across repeated serialization
  CHECK(report.dump() == residual_report("verify", {rec, {"flow", {}, 1e-3, 1e-6}}).dump());
}

TEST_CASE("plot data emission writes stable CSV") {
  std::vector<TrajectorySample> traj{{0.0, {0.1, 0.0, 0.2, 0.0}},
                                     {0.5, {0.15, 0.1, 0.2, 0.3}}};
  const std::string path = "traj_test.csv";
  emit_plot_data(traj, path);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,s,theta,A,phi");
  std::string row1;
  std::getline(in, row1);
  CHECK(row1.substr(0, 18) == "0.000000000000e+00");
  std::remove(path.c_str());
}
