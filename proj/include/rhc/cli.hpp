#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rhc/control.hpp"

namespace rhc {

/// Scenario description read from a flat `section.key = value` file.
struct ScenarioConfig {
  int grid_n = 101;

  double tf = 1.0;
  double dt = 0.005;  // tf / 200 unless given
  double theta = 1.0;

  double mu = 5.85;
  SyntheticProfiles shapes;
  std::string t0_csv;  // overrides shapes.initial when set
  std::string tbar_csv;

  TransportParams transport;  // q and s are rebuilt from q0, qa
  double q0 = 1.0;
  double qa = 3.5;

  ControllerConfig controller;  // dt, tf, theta are copied from the time keys
  FbsConfig fbs;

  std::string output_dir;
  unsigned long long seed = 0;

  /// Every key with its effective value, one `key = value` per line.
  std::string effective() const;
  void validate() const;
};

/// Parses config text. `origin` only appears in error messages.
/// Throws ConfigError with the offending key and line.
ScenarioConfig parse_config(std::istream& in, const std::string& origin = "<config>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// The model the scenario describes; CSV paths are resolved as given.
PlasmaModel build_model(const ScenarioConfig& cfg);
ControllerConfig controller_config(const ScenarioConfig& cfg);
TimeStepConfig time_step_config(const ScenarioConfig& cfg);

/// Output directory precedence: explicit flag, then RHC_OUT_DIR, then
/// output.dir, then "rhc_out".
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag,
                                         const char* env_value, const ScenarioConfig& cfg);

/// Scientific notation with 17 significant digits.
std::string format_real(double v);

/// Exit codes: 0 success, 1 solver or calibration failure, 2 bad input,
/// 3 output could not be written.
int cmd_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out);
int cmd_fbs(const ScenarioConfig& cfg, double alpha, const std::filesystem::path& out);

/// When `manufactured` is set the FBS runs are skipped and J* is taken from
/// it, which lets the fit and the output path be checked against known data.
using ManufacturedObjective = std::function<double(double)>;
int cmd_sweep_alpha(const ScenarioConfig& cfg, const std::vector<double>& grid,
                    const std::filesystem::path& out,
                    const ManufacturedObjective& manufactured = {});

}  // namespace rhc
