#pragma once

// Scenario configuration (JSON), the run pipeline behind the CLI, figure
// presets, and cartesian parameter sweeps.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nhqfi/csv.hpp"
#include "nhqfi/dynamics.hpp"
#include "nhqfi/models.hpp"
#include "nhqfi/observables.hpp"

namespace nhqfi {

using Json = nlohmann::ordered_json;

struct Tolerances {
  double trace_floor = 1e-12;
  double positivity = 1e-8;
  double hermiticity = 1e-9;
  /// Positive-definiteness floor for the metric ODE, relative to ||eta||.
  double metric_pd = 1e-15;
};

struct NamedObservable {
  std::string name;
  Observable a;
};

struct ScenarioConfig {
  std::string description;
  /// "gain_loss" (omega0, g, gamma), "decaying_qubit" (omega, gamma) or
  /// "general2x2" (r, s, tau, phi).
  std::string model = "gain_loss";
  std::map<std::string, double> params;
  InputStateParams state;
  double t_max = 20.0;
  std::size_t points = 2001;
  std::vector<Formalism> formalisms;
  std::string outputs;
  Tolerances tolerances;
  /// Multiplier of the printed dissipator prefactor; empty means the model default.
  std::optional<double> me_rate_scale;
  double jump_dt = 1e-3;
  /// "theta", "x" or "none".
  std::string qfi_parameter = "theta";
  std::vector<NamedObservable> observables;

  /// Throws config_error on unknown keys, wrong types or invalid values.
  static ScenarioConfig from_json(const Json& j);
  static ScenarioConfig parse(const std::string& text);
  static ScenarioConfig load(const std::filesystem::path& file);
  Json to_json() const;
  /// Canonical text; parse(emit()).emit() == emit().
  std::string emit() const;

  ModelParams model_params() const;
  double resolved_rate_scale() const;
  void validate() const;
};

struct RunResult {
  std::map<Formalism, StateTrajectory> trajectories;
  QfiTable qfi;
  std::vector<ExpectationRow> expectations;
  Json summary;
  std::vector<std::filesystem::path> files;
};

/// Runs every requested formalism. Files are written only when out_dir is non-empty.
RunResult run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir);

/// Built-in configurations "fig3", "fig4", "fig5", "fig6". Throws config_error otherwise.
ScenarioConfig preset(const std::string& figure);
std::vector<std::string> preset_names();

/// A sweep file is a scenario whose "params" and "state" values may be arrays;
/// returns one configuration per point of the cartesian product, in
/// row-major order over keys as they appear.
std::vector<ScenarioConfig> expand_sweep(const Json& j);

}  // namespace nhqfi
