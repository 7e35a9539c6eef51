#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rhc/cli.hpp"
#include "rhc/errors.hpp"

namespace {

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || item.find_first_not_of(" \t", used) != std::string::npos)
      throw rhc::InvalidArgument("--grid: cannot parse '" + item + "'");
    values.push_back(v);
  }
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Receding-horizon temperature profile control"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::string> out_dir;
  std::optional<unsigned long long> seed;
  app.add_option("--config", config_path, "flat key = value scenario file");
  app.add_option("--out", out_dir, "output directory (overrides RHC_OUT_DIR and output.dir)");
  app.add_option("--seed", seed, "seed for randomized scenarios; recorded only");

  CLI::App* simulate = app.add_subcommand("simulate", "closed-loop receding-horizon run");
  CLI::App* fbs = app.add_subcommand("fbs", "open-loop forward-backward sweep");
  double alpha = 0.0;
  fbs->add_option("--alpha", alpha, "control penalty")->required();
  CLI::App* sweep = app.add_subcommand("sweep-alpha", "FBS over an alpha grid and quadratic fit");
  std::string grid_text;
  sweep->add_option("--grid", grid_text, "comma-separated alpha values")->required();
  std::vector<double> manufactured;
  sweep->add_option("--manufactured-quadratic", manufactured,
                    "replace FBS by J = kappa (alpha - vertex)^2; takes vertex kappa")
      ->expected(2)
      ->group("");

  CLI11_PARSE(app, argc, argv);

  rhc::ScenarioConfig cfg;
  try {
    if (!config_path.empty()) {
      cfg = rhc::load_config(config_path);
    } else {
      std::istringstream empty;
      cfg = rhc::parse_config(empty);
    }
  } catch (const rhc::ConfigError& e) {
    std::cerr << "config: " << e.what() << '\n';
    return 2;
  }
  if (seed) cfg.seed = *seed;
  const auto out = rhc::resolve_output_dir(out_dir, std::getenv("RHC_OUT_DIR"), cfg);
  cfg.output_dir = out.string();

  if (*simulate) return rhc::cmd_simulate(cfg, out);
  if (*fbs) return rhc::cmd_fbs(cfg, alpha, out);

  std::vector<double> grid;
  try {
    grid = parse_grid(grid_text);
  } catch (const rhc::InvalidArgument& e) {
    std::cerr << "sweep-alpha: " << e.what() << '\n';
    return 2;
  }
  rhc::ManufacturedObjective hook;
  if (manufactured.size() == 2) {
    const double vertex = manufactured[0];
    const double kappa = manufactured[1];
    hook = [vertex, kappa](double a) { return kappa * (a - vertex) * (a - vertex); };
  }
  return rhc::cmd_sweep_alpha(cfg, grid, out, hook);
}
