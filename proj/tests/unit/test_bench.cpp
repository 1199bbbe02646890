#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "wigner/bench.hpp"
#include "wigner/wigner_transform.hpp"

using namespace wigner;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wigner_bench_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream is(p);
  std::size_t n = 0;
  for (std::string line; std::getline(is, line);) ++n;
  return n;
}

ScenarioConfig small(const std::string& scenario, const fs::path& out) {
  ScenarioConfig c;
  c.scenario = scenario;
  c.grid_preset = "oracle";
  c.t_final = 0.2;
  c.n_samples = 5;
  c.out_dir = out;
  return c;
}

int run_cli(const std::string& args, const fs::path& err_file) {
  const std::string cmd = std::string(WIGNER_BENCH_EXE) + " " + args + " 2> " + err_file.string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("config validation") {
  ScenarioConfig c;
  CHECK_NOTHROW(c.validate());
  c.scenario = "nope";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.lambda = -0.1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.grid_preset = "huge";
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.interpolation_points = 5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.n_samples = 1;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.n_q = 101;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = ScenarioConfig{};
  c.dy = 0.1;  // not a multiple of dq: rejected when the grid is built
  CHECK_NOTHROW(c.validate());
  CHECK(scenario_names().size() == 6);
}

TEST_CASE("JSON config tree") {
  const nlohmann::json j = nlohmann::json::parse(R"({
    "scenario": "quartic-reconstruct", "lambda": 0.05, "seed": 9,
    "grid": {"preset": "reduced", "n_q": 64},
    "time": {"dt": 0.01, "t_final": 1.0, "n_samples": 11},
    "scheme": {"splitting": "lie", "residual": "rk4", "interpolation_points": 6},
    "output": {"dir": "x", "dump_fields": true}})");
  const ScenarioConfig c = apply_config_json(ScenarioConfig{}, j);
  CHECK(c.scenario == "quartic-reconstruct");
  CHECK(c.lambda == 0.05);
  CHECK(c.seed == 9);
  CHECK(c.grid_preset == "reduced");
  CHECK(*c.n_q == 64);
  CHECK(c.grid().n_q == 64);
  CHECK(c.dt == 0.01);
  CHECK(c.n_samples == 11);
  CHECK(c.splitting == Splitting::kLie);
  CHECK(c.residual_scheme == ResidualScheme::kRk4);
  CHECK(c.interpolation_points == 6);
  CHECK(c.out_dir == fs::path("x"));
  CHECK(c.dump_fields);

  const ScenarioConfig again = apply_config_json(ScenarioConfig{}, config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));

  CHECK_THROWS_AS(apply_config_json({}, nlohmann::json::parse(R"({"lamda": 1})")), ConfigError);
  CHECK_THROWS_AS(apply_config_json({}, nlohmann::json::parse(R"({"grid": {"nq": 1}})")), ConfigError);
  CHECK_THROWS_AS(apply_config_json({}, nlohmann::json::parse(R"({"lambda": "big"})")), ConfigError);
  CHECK_THROWS_AS(apply_config_json({}, nlohmann::json::parse(R"({"scheme": {"splitting": "x"}})")), ConfigError);
  CHECK_THROWS_AS(apply_config_json({}, nlohmann::json::parse("[1, 2]")), ConfigError);
}

TEST_CASE("field CSV format") {
  const fs::path dir = scratch_dir("csv");
  fs::create_directories(dir);
  const GridSpec tiny = make_grid(2, 1.0, 2, 1.0);
  emit_field_csv(PhaseField(tiny), dir / "zero.csv");
  std::ifstream is(dir / "zero.csv");
  std::string line;
  std::getline(is, line);
  CHECK(line == "q,p,value");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
  CHECK(rows == 4);

  const GridSpec g = make_reduced_grid();
  const PhaseField w = wigner_from_wavefunction(init_superposition_02(g), g);
  emit_field_csv(w, dir / "w.csv");
  const PhaseField back = read_field_csv(g, dir / "w.csv");
  CHECK(std::abs(integrate(back) - integrate(w)) <= 1e-12);
  CHECK(max_abs(back - w) == 0.0);
  CHECK_THROWS_AS(read_field_csv(make_oracle_grid(), dir / "w.csv"), Error);

  const GridSpec b = make_balanced_grid();
  emit_field_csv(PhaseField(b), dir / "balanced.csv");
  CHECK(count_lines(dir / "balanced.csv") == 1 + 384u * 768u);

  CHECK(field_file_name("corrected", std::numbers::pi / 2) == "field_corrected_t1.570796.csv");
  CHECK_THROWS_AS(emit_field_csv(w, dir / "missing" / "w.csv"), Error);
  fs::remove_all(dir);
}

TEST_CASE("every scenario writes a complete series") {
  for (const std::string& name : scenario_names()) {
    if (name == "underdetermination-demo") continue;  // fixed 200-step run, covered by acceptance
    const fs::path dir = scratch_dir(name);
    const nlohmann::json summary = run_scenario(small(name, dir));
    CHECK(summary["schema_version"] == kSummarySchemaVersion);
    CHECK(summary["scenario"] == name);
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(count_lines(dir / "series.csv") == 1 + 5);
    fs::remove_all(dir);
  }
}

TEST_CASE("identical configs give byte-identical outputs") {
  for (const std::string name : {"quartic-reconstruct", "signed-path-demo"}) {
    const fs::path a = scratch_dir("det_a");
    const fs::path b = scratch_dir("det_b");
    run_scenario(small(name, a));
    run_scenario(small(name, b));
    CHECK(slurp(a / "summary.json") == slurp(b / "summary.json"));
    CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));
    fs::remove_all(a);
    fs::remove_all(b);
  }
}

TEST_CASE("field dumps are opt-in") {
  const fs::path dir = scratch_dir("dump");
  ScenarioConfig c = small("quartic-reconstruct", dir);
  c.dump_fields = true;
  run_scenario(c);
  const double tf = 0.2;
  for (const char* name : {"reference", "classical", "corrected", "classical_error", "corrected_error"}) {
    CHECK(fs::exists(dir / field_file_name(name, 0.0)));
    CHECK(fs::exists(dir / field_file_name(name, tf)));
  }
  fs::remove_all(dir);
}

TEST_CASE("CLI exit codes and error objects") {
  const fs::path dir = scratch_dir("cli");
  fs::create_directories(dir);
  const fs::path err = dir / "stderr.txt";

  CHECK(run_cli("--scenario bogus --out " + (dir / "a").string(), err) == 1);
  const nlohmann::json e = nlohmann::json::parse(slurp(err));
  CHECK(e["error"]["kind"] == "validation");
  CHECK(e["error"]["exit_code"] == 1);

  CHECK(run_cli("--config " + (dir / "missing.json").string(), err) == 1);
  CHECK(run_cli("--lambda -1", err) == 1);
  CHECK(run_cli("--scheme euler", err) == 1);
  CHECK(run_cli("--no-such-flag", err) == 1);

  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"scenario": "quartic-compare", "grid": {"preset": "oracle"},
               "time": {"t_final": 0.1, "n_samples": 3}})";
  }
  CHECK(run_cli("--config " + (dir / "cfg.json").string() + " --lambda 0.05 --out " +
                    (dir / "ok").string(), err) == 0);
  const nlohmann::json s = nlohmann::json::parse(slurp(dir / "ok" / "summary.json"));
  CHECK(s["config"]["lambda"] == 0.05);
  CHECK(s["config"]["scenario"] == "quartic-compare");

  CHECK(run_cli("--list-scenarios", err) == 0);
  CHECK(run_cli("--scenario harmonic-null --grid-preset oracle --t-final 0.1 --samples 2 --dt 0.05"
                " --interpolation-points 4 --residual-scheme rk4 --scheme lie --seed 1 --dump-fields"
                " --out " + (dir / "flags").string(), err) == 0);
  CHECK(fs::exists(dir / "flags" / field_file_name("transported", 0.1)));

  // Passes validation, but the initial state does not fit on an 8-point grid.
  {
    std::ofstream cfg(dir / "small.json");
    cfg << R"({"scenario": "harmonic-null", "grid": {"preset": "oracle", "n_q": 8}})";
  }
  CHECK(run_cli("--config " + (dir / "small.json").string() + " --out " + (dir / "rt").string(), err) == 2);
  CHECK(nlohmann::json::parse(slurp(err))["error"]["kind"] == "runtime");

  const std::string env_cmd = "WIGNER_BENCH_OUT=" + (dir / "env").string() + " " + WIGNER_BENCH_EXE +
                              " --config " + (dir / "cfg.json").string() + " 2> /dev/null";
  CHECK(std::system(env_cmd.c_str()) == 0);
  CHECK(fs::exists(dir / "env" / "summary.json"));
  fs::remove_all(dir);
}
