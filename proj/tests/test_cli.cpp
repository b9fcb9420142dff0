#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subreg/commands.hpp"
#include "subreg/io.hpp"

#include <filesystem>
#include <fstream>

using namespace subreg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           fs::path("subreg_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int counter() {
    static int n = 0;
    return n++;
  }
  RunContext ctx() const {
    RunContext c;
    c.out_dir = path.string();
    return c;
  }
};

Json read_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  Json j;
  in >> j;
  return j;
}

int line_count(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  int lines = 0;
  std::string line;
  while (std::getline(in, line)) ++lines;
  return lines;
}

}  // namespace

TEST_CASE("estimate: strong_at of the identity writes value 1") {
  TempDir dir;
  const Json config = Json::parse(R"({
    "operation": "strong_at",
    "map": {"type": "identity"},
    "center_x": [0.0], "center_y": [0.0],
    "radius": 0.5, "grid_step": 0.01
  })");
  CHECK(cmd_estimate(config, dir.ctx()) == 0);
  const Json result = read_json(dir.path / "estimate.json");
  CHECK(result["estimate"]["value"].get<double>() == 1.0);
}

TEST_CASE("estimate: divergence profile of paper_h emits a CSV") {
  TempDir dir;
  const Json config = Json::parse(R"({
    "operation": "divergence",
    "map": {"type": "paper_h"},
    "center_x": [0.0], "center_y": [0.0],
    "radii": [0.1, 0.01], "steps": 201
  })");
  CHECK(cmd_estimate(config, dir.ctx()) == 0);
  CHECK(line_count(dir.path / "divergence.csv") == 3);  // header + 2 radii
  const Json result = read_json(dir.path / "estimate.json");
  const double e0 = result["profile"][0]["value"].get<double>();
  const double e1 = result["profile"][1]["value"].get<double>();
  CHECK(e1 / e0 >= 9.0);
}

TEST_CASE("estimate: the r0 ladder is reported when r0 is omitted") {
  TempDir dir;
  const Json config = Json::parse(R"({
    "operation": "strong_around",
    "map": {"type": "identity"},
    "center_x": [0.0], "center_y": [0.0],
    "window_a": 0.4, "window_b": 0.4, "grid_step": 0.01
  })");
  CHECK(cmd_estimate(config, dir.ctx()) == 0);
  const Json result = read_json(dir.path / "estimate.json");
  REQUIRE(result.contains("r0_ladder"));
  CHECK(result["r0_ladder"].size() == 3);
  for (const Json& entry : result["r0_ladder"]) {
    CHECK(entry["estimate"]["value"].get<double>() == 1.0);
  }
}

TEST_CASE("estimate: config errors throw invalid_argument (exit 2)") {
  TempDir dir;
  CHECK_THROWS_AS(cmd_estimate(Json::parse(R"({"operation":"strong_at"})"),
                               dir.ctx()),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      cmd_estimate(Json::parse(
                       R"({"operation":"strong_at","map":{"type":"nope"},
                           "center_x":[0],"center_y":[0],"radius":1,"grid_step":0.1})"),
                   dir.ctx()),
      std::invalid_argument);
  CHECK_THROWS_AS(
      cmd_estimate(Json::parse(R"({"operation":"strong_at","unknown_key":1,
                                   "map":{"type":"identity"},"center_x":[0],
                                   "center_y":[0],"radius":1,"grid_step":0.1})"),
                   dir.ctx()),
      std::invalid_argument);
}

TEST_CASE("certify: identity with a calm perturbation validates (exit 0)") {
  TempDir dir;
  const Json config = Json::parse(R"({
    "base": {"kind": "strong_at", "map": {"type": "identity"},
             "center_x": [0.0], "center_y": [0.0], "alpha": 1.0,
             "kappa": 1.0},
    "perturbation": {"rule": "calm", "g": {"type": "linear_sin",
                     "linear": 0.0, "sin_coeff": 0.5},
                     "mu": 0.5, "radius": 1.0},
    "eta": 0.05,
    "validate": {"grid_step": 0.001}
  })");
  CHECK(cmd_certify(config, dir.ctx()) == 0);
  const Json report = read_json(dir.path / "certificate.json");
  CHECK(report["all_hold"].get<bool>());
  CHECK(report["propagated_certificate"]["kappa"].get<double>() ==
        1.0 / (1.0 - 0.5) * 1.05);  // kappa' = 2(1+eta)
  CHECK(report["propagated_certificate"]["provenance"].size() == 2);
}

TEST_CASE("certify: a deliberately halved kappa is violated (exit 1)") {
  TempDir dir;
  const Json config = Json::parse(R"({
    "base": {"kind": "strong_at", "map": {"type": "identity"},
             "center_x": [0.0], "center_y": [0.0], "alpha": 1.0,
             "kappa": 0.5},
    "validate": {"grid_step": 0.001}
  })");
  CHECK(cmd_certify(config, dir.ctx()) == 1);
  const Json report = read_json(dir.path / "certificate.json");
  CHECK(!report["all_hold"].get<bool>());
  CHECK(!report["base_validation"]["witness"].empty());
}

TEST_CASE("certify: kappa*mu >= 1 is a config error (exit 2 path)") {
  TempDir dir;
  const Json config = Json::parse(R"({
    "base": {"kind": "strong_at", "map": {"type": "identity"},
             "center_x": [0.0], "center_y": [0.0], "alpha": 1.0, "kappa": 2.0},
    "perturbation": {"rule": "calm", "g": {"type": "scale", "factor": 0.6},
                     "mu": 0.6, "radius": 1.0}
  })");
  CHECK_THROWS_AS(cmd_certify(config, dir.ctx()), std::domain_error);
}

TEST_CASE("uniformize: the projection family validates on an 11-point grid") {
  TempDir dir;
  const Json config = Json::parse(R"({
    "mode": "around",
    "f": {"type": "parametric", "base": {"type": "identity"},
          "coupling": "sin_x", "coefficient": 0.1},
    "F": {"type": "normal_cone_box", "box": [[0, 1]]},
    "omega": {"t_grid": {"lo": 0.0, "hi": 1.0, "steps": 11}, "x": [0.0]},
    "windows": {"a": 0.25, "b": 0.25, "r0": 0.0625},
    "base_estimate": {"grid_step": 0.002},
    "validate": {"grid_step": 0.002}
  })");
  CHECK(cmd_uniformize(config, dir.ctx()) == 0);
  const Json report = read_json(dir.path / "uniform_report.json");
  CHECK(report["ok"].get<bool>());
  CHECK(report["validation"]["violations"].empty());
  CHECK(report["uniform_certificate"]["records"].size() == 11);
  CHECK(line_count(dir.path / "records.csv") == 12);
}

TEST_CASE("follow: the projection path completes and certifies") {
  TempDir dir;
  const Json config = Json::parse(R"({
    "f": {"type": "parametric", "base": {"type": "identity"}},
    "F": {"type": "normal_cone_box", "box": [[0, 1]]},
    "p": {"type": "trig", "amplitude": [1.5]},
    "horizon": 3.0, "t_steps": 20,
    "x0": [0.0], "trust_radius": 0.4, "tol": 1e-8,
    "certify": {"a": 0.2, "b": 0.2, "r0": 0.05,
                "grid_step": 0.004,
                "validate": {"grid_step": 0.004}}
  })");
  CHECK(cmd_follow(config, dir.ctx()) == 0);
  const Json report = read_json(dir.path / "follow_report.json");
  CHECK(report["ok"].get<bool>());
  CHECK(report["trajectory"]["status"].get<std::string>() == "complete");
  CHECK(report["warm_start"]["ok"].get<bool>());
  CHECK(line_count(dir.path / "trajectory.csv") == 22);  // header + 21 nodes
}

TEST_CASE("follow: a pathological trust radius stalls (exit 1)") {
  TempDir dir;
  const Json config = Json::parse(R"({
    "f": {"type": "parametric", "base": {"type": "identity"}},
    "F": {"type": "normal_cone_box", "box": [[0, 1]]},
    "p": {"type": "trig", "amplitude": [1.5]},
    "horizon": 3.0, "t_steps": 20,
    "x0": [0.0], "trust_radius": 1e-12, "tol": 1e-8
  })");
  CHECK(cmd_follow(config, dir.ctx()) == 1);
  const Json report = read_json(dir.path / "follow_report.json");
  CHECK(report["trajectory"]["status"].get<std::string>() == "stalled");
  CHECK(report["trajectory"]["stall_index"].get<int>() == 1);
}

TEST_CASE("follow: trust radius defaults from an attached certificate") {
  TempDir dir;
  const Json config = Json::parse(R"({
    "f": {"type": "parametric", "base": {"type": "identity"}},
    "F": {"type": "normal_cone_box", "box": [[0, 1]]},
    "p": {"type": "trig", "amplitude": [1.5]},
    "horizon": 3.0, "t_steps": 30,
    "x0": [0.0], "warm_start_kappa": 3.5, "tol": 1e-8
  })");
  CHECK(cmd_follow(config, dir.ctx()) == 0);  // 2*kappa*Lip(p)*dt covers drift

  const Json missing = Json::parse(R"({
    "f": {"type": "parametric", "base": {"type": "identity"}},
    "F": {"type": "normal_cone_box", "box": [[0, 1]]},
    "p": {"type": "trig", "amplitude": [1.5]},
    "horizon": 3.0, "t_steps": 30, "x0": [0.0]
  })");
  CHECK_THROWS_AS(cmd_follow(missing, dir.ctx()), std::invalid_argument);
}

TEST_CASE("follow: an infeasible start is a config error") {
  TempDir dir;
  const Json config = Json::parse(R"({
    "f": {"type": "parametric", "base": {"type": "identity"}},
    "F": {"type": "normal_cone_box", "box": [[0, 1]]},
    "p": {"type": "trig", "amplitude": [1.5]},
    "horizon": 3.0, "t_steps": 20,
    "x0": [0.9], "trust_radius": 0.4, "tol": 1e-8
  })");
  CHECK_THROWS_AS(cmd_follow(config, dir.ctx()), std::invalid_argument);
}

TEST_CASE("counterexample: default run confirms all three claims") {
  TempDir dir;
  CHECK(cmd_counterexample(Json::object(), dir.ctx()) == 0);
  const Json report = read_json(dir.path / "counterexample.json");
  CHECK(report["ok"].get<bool>());
  CHECK(report["confirmed"]["f_subregular"].get<bool>());
  CHECK(report["confirmed"]["g_calm"].get<bool>());
  CHECK(report["confirmed"]["h_divergent"].get<bool>());
  CHECK(report.contains("f_certificate"));
  CHECK(line_count(dir.path / "divergence.csv") == 4);
}

TEST_CASE("counterexample: a two-radius run emits a two-row table") {
  TempDir dir;
  const Json config = Json::parse(R"({"radii": [0.1, 0.01]})");
  CHECK(cmd_counterexample(config, dir.ctx()) == 0);
  CHECK(line_count(dir.path / "divergence.csv") == 3);
}

TEST_CASE("config loading is strict") {
  TempDir dir;
  const fs::path bad = dir.path / "bad.json";
  std::ofstream(bad) << "{not json";
  CHECK_THROWS_AS(load_config_file(bad.string()), std::invalid_argument);
  CHECK_THROWS_AS(load_config_file((dir.path / "missing.json").string()),
                  std::invalid_argument);
  const fs::path list = dir.path / "list.json";
  std::ofstream(list) << "[1,2]";
  CHECK_THROWS_AS(load_config_file(list.string()), std::invalid_argument);
}

TEST_CASE("reports re-serialize canonically") {
  TempDir dir;
  CHECK(cmd_counterexample(Json::object(), dir.ctx()) == 0);
  const Json report = read_json(dir.path / "counterexample.json");
  CHECK(Json::parse(report.dump()).dump() == report.dump());
}
