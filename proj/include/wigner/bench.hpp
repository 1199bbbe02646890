// Scenario runner behind the wigner_bench CLI. Every scenario produces a JSON
// summary, a per-snapshot series and optional dense field dumps.
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "wigner/fields.hpp"
#include "wigner/reconstruction.hpp"

namespace wigner {

inline constexpr int kSummarySchemaVersion = 1;

/// Raised for malformed configuration (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ScenarioConfig {
  std::string scenario = "harmonic-null";
  double lambda = 0.02;
  std::string grid_preset = "balanced";  // balanced | reduced | oracle
  // Optional overrides of the preset grid.
  std::optional<int> n_q;
  std::optional<double> dq;
  std::optional<int> n_y;
  std::optional<double> dy;
  double dt = 0.005;
  double t_final = std::numbers::pi / 2.0;
  int n_samples = 65;
  Splitting splitting = Splitting::kStrang;
  ResidualScheme residual_scheme = ResidualScheme::kExponential;
  int interpolation_points = 8;
  std::filesystem::path out_dir = "wigner_out";
  bool dump_fields = false;
  std::uint64_t seed = 20240601;

  /// Throws ConfigError.
  void validate() const;
  GridSpec grid() const;
  EvolutionConfig evolution() const;
};

const std::vector<std::string>& scenario_names();

/// Applies the keys of a JSON object on top of `base`. Unknown keys and
/// wrongly typed values raise ConfigError.
ScenarioConfig apply_config_json(ScenarioConfig base, const nlohmann::json& j);

/// Echo of the effective configuration, as written into summary.json.
nlohmann::json config_to_json(const ScenarioConfig& cfg);

/// Column-labelled table with one row per snapshot.
struct Series {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct NamedField {
  std::string name;
  double time = 0.0;
  PhaseField field;
};

struct ScenarioOutput {
  nlohmann::json summary;
  Series series;
  std::vector<NamedField> fields;
};

/// Runs the scenario in memory. Field snapshots are collected only when
/// cfg.dump_fields is set.
ScenarioOutput run_scenario_in_memory(const ScenarioConfig& cfg);

/// Runs the scenario and writes summary.json, series.csv and, when requested,
/// field_<name>_t<time>.csv into cfg.out_dir. Returns the summary.
nlohmann::json run_scenario(const ScenarioConfig& cfg);

void write_series_csv(const Series& s, const std::filesystem::path& path);

/// Header `q,p,value`, one row per grid point, q-major ascending, values with
/// 17 significant digits.
void emit_field_csv(const PhaseField& w, const std::filesystem::path& path);

/// Reads a file written by emit_field_csv back onto `grid`.
PhaseField read_field_csv(const GridSpec& grid, const std::filesystem::path& path);

/// Dump file name: field_<name>_t<time with 6 decimals>.csv.
std::string field_file_name(const std::string& name, double time);

/// Serialized summary (2-space indent, trailing newline).
std::string dump_summary(const nlohmann::json& summary);

}  // namespace wigner
