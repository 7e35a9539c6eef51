#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "rhc/cli.hpp"
#include "rhc/errors.hpp"

namespace fs = std::filesystem;

namespace {

rhc::ScenarioConfig parse(const std::string& text) {
  std::istringstream in(text);
  return rhc::parse_config(in, "test");
}

rhc::ScenarioConfig small_scenario() { return parse("grid.n = 21\ntime.dt = 0.02\n"); }

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("rhc_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::string> lines(const fs::path& p) {
  std::vector<std::string> out;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<double> cells(const std::string& line) {
  std::vector<double> out;
  std::stringstream in(line);
  for (std::string c; std::getline(in, c, ',');) out.push_back(std::stod(c));
  return out;
}

std::string config_error_key(const std::string& text, int* line = nullptr) {
  try {
    parse(text);
  } catch (const rhc::ConfigError& e) {
    if (line) *line = e.line();
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("empty config gives the defaults") {
  const rhc::ScenarioConfig c = parse("");
  CHECK(c.tf == 1.0);
  CHECK(c.mu == 5.85);
  CHECK(c.controller.alpha0 == 10.0);
  CHECK(c.dt == doctest::Approx(1.0 / 200.0).epsilon(1e-15));
  CHECK(c.grid_n == 101);
  CHECK(c.theta == 1.0);
  CHECK(c.controller.adapt_gain == doctest::Approx(1.0));
  CHECK(c.controller.alpha_min == 1e-2);
  CHECK(c.controller.alpha_max == 1e4);
  CHECK(c.fbs.eps == 1e-6);
  CHECK(c.fbs.n_max == 1000);
  CHECK(c.fbs.relaxation == 0.5);
}

TEST_CASE("derived defaults follow the keys they depend on") {
  const rhc::ScenarioConfig c = parse("time.tf = 2\ncontroller.alpha0 = 40\n");
  CHECK(c.dt == doctest::Approx(0.01));
  CHECK(c.controller.adapt_gain == doctest::Approx(4.0));
  CHECK(c.controller.tf == 2.0);
  const rhc::ScenarioConfig d = parse("controller.alpha0 = 40\ncontroller.adapt_gain = 0\n");
  CHECK(d.controller.adapt_gain == 0.0);
}

TEST_CASE("config syntax") {
  const rhc::ScenarioConfig c = parse(
      "# comment\n\n  grid.n=  51  # trailing\ntransport.chi_floor = 1e-5\n"
      "controller.adaptive = false\noutput.dir = \"out dir\"\nreference.t0_csv = a.csv\n");
  CHECK(c.grid_n == 51);
  CHECK(c.transport.chi_floor == 1e-5);
  CHECK_FALSE(c.controller.adaptive);
  CHECK(c.output_dir == "out dir");
  CHECK(c.t0_csv == "a.csv");
}

TEST_CASE("config errors name the key and line") {
  int line = 0;
  CHECK(config_error_key("time.tf = -1\n", &line) == "time.tf");
  CHECK(line == 1);
  CHECK(config_error_key("grid.n = 51\nfoo = 1\n", &line) == "foo");
  CHECK(line == 2);
  CHECK(config_error_key("grid.n = 2\n") == "grid.n");
  CHECK(config_error_key("grid.n = 5.5\n") == "grid.n");
  CHECK(config_error_key("time.dt = 0.003\n") == "time.dt");
  CHECK(config_error_key("time.theta = 0.2\n") == "time.theta");
  CHECK(config_error_key("reference.mu = nan\n") == "reference.mu");
  CHECK(config_error_key("transport.gamma_ITG = 0\n") == "transport.gamma_ITG");
  CHECK(config_error_key("controller.alpha0 = 1e6\n") == "controller.alpha0");
  CHECK(config_error_key("controller.adaptive = maybe\n") == "controller.adaptive");
  CHECK(config_error_key("fbs.relaxation = 1.5\n") == "fbs.relaxation");
  CHECK(config_error_key("fbs.n_max = 0\n") == "fbs.n_max");
  CHECK(config_error_key("grid.n = 5\ngrid.n = 7\n", &line) == "grid.n");
  CHECK(line == 2);
  CHECK(config_error_key("\n\njust text\n", &line).empty());
  CHECK(line == 3);
  CHECK_THROWS_AS(rhc::load_config("/nonexistent/rhc.cfg"), rhc::ConfigError);
}

TEST_CASE("effective config round-trips") {
  const rhc::ScenarioConfig c = parse("grid.n = 33\ntime.tf = 3\ncontroller.alpha0 = 7.5\n");
  const rhc::ScenarioConfig back = parse(c.effective());
  CHECK(back.effective() == c.effective());
  CHECK(back.grid_n == 33);
  CHECK(back.dt == c.dt);
  CHECK(back.controller.adapt_gain == c.controller.adapt_gain);
}

TEST_CASE("output directory precedence") {
  rhc::ScenarioConfig c = parse("output.dir = from_config\n");
  CHECK(rhc::resolve_output_dir(std::string("flag"), "env", c) == "flag");
  CHECK(rhc::resolve_output_dir(std::nullopt, "env", c) == "env");
  CHECK(rhc::resolve_output_dir(std::nullopt, nullptr, c) == "from_config");
  CHECK(rhc::resolve_output_dir(std::nullopt, "", c) == "from_config");
  c.output_dir.clear();
  CHECK(rhc::resolve_output_dir(std::nullopt, nullptr, c) == "rhc_out");
}

TEST_CASE("number formatting") {
  CHECK(rhc::format_real(0.0) == "0.0000000000000000e+00");
  CHECK(rhc::format_real(-1.5) == "-1.5000000000000000e+00");
  CHECK(rhc::format_real(0.1) == "1.0000000000000001e-01");
  CHECK(std::stod(rhc::format_real(M_PI)) == M_PI);
}

TEST_CASE("simulate writes the time series and field files") {
  const rhc::ScenarioConfig cfg = small_scenario();
  const fs::path out = fresh_dir("simulate");
  REQUIRE(rhc::cmd_simulate(cfg, out) == 0);
  for (const char* name : {"timeseries.csv", "state.csv", "control.csv", "adjoint.csv",
                           "reference.csv", "final_profile.csv"})
    CHECK(fs::exists(out / name));
  CHECK(fs::exists(out / "effective_config.txt"));

  const auto ts = lines(out / "timeseries.csv");
  CHECK(ts.front() == "t,J,J1,J2,u_l2x,bound_lhs,bound_rhs,alpha,beta");
  CHECK(ts.size() == 51 + 1);
  CHECK(lines(out / "state.csv").size() == 51 * 21 + 1);
  CHECK(lines(out / "control.csv").front() == "t,x,value");
  CHECK(lines(out / "final_profile.csv").size() == 21 + 1);
  CHECK(lines(out / "final_profile.csv").front() == "x,T,Tbar,abs_err");

  const rhc::PlasmaModel model = rhc::build_model(cfg);
  const std::vector<double> first = cells(ts[1]);
  CHECK(first[0] == 0.0);
  CHECK(first[1] == rhc::objective(model.grid, model.ref.T0, model.ref.Tbar));
  CHECK(cells(ts.back())[0] == 1.0);

  const fs::path again = fresh_dir("simulate_again");
  REQUIRE(rhc::cmd_simulate(cfg, again) == 0);
  for (const auto& entry : fs::directory_iterator(out))
    CHECK(slurp(entry.path()) == slurp(again / entry.path().filename()));
  fs::remove_all(out);
  fs::remove_all(again);
}

TEST_CASE("simulate reports bad profile input") {
  rhc::ScenarioConfig cfg = small_scenario();
  cfg.tbar_csv = "/nonexistent/target.csv";
  CHECK(rhc::cmd_simulate(cfg, fresh_dir("bad_profile")) == 2);
}

TEST_CASE("fbs writes convergence history and profiles") {
  const rhc::ScenarioConfig cfg = small_scenario();
  const fs::path out = fresh_dir("fbs");
  REQUIRE(rhc::cmd_fbs(cfg, 10.0, out) == 0);
  const auto conv = lines(out / "fbs_convergence.csv");
  CHECK(conv.front() == "iteration,iterate_diff_norm,terminal_J");
  CHECK(cells(conv.back())[1] <= 1e-6);
  const auto summary = lines(out / "fbs_summary.csv");
  REQUIRE(summary.size() == 2);
  CHECK(summary[1].find(",true,") != std::string::npos);
  std::stringstream row(summary[1]);
  std::vector<std::string> fields;
  for (std::string c; std::getline(row, c, ',');) fields.push_back(c);
  CHECK(std::stod(fields[4]) < std::stod(fields[5]));
  for (const char* name : {"state.csv", "control.csv", "adjoint.csv", "reference.csv",
                           "final_profile.csv"})
    CHECK(fs::exists(out / name));
  CHECK(lines(out / "control.csv").size() == 50 * 21 + 1);
  CHECK(lines(out / "state.csv").size() == 51 * 21 + 1);
  fs::remove_all(out);
}

TEST_CASE("fbs reports non-convergence") {
  rhc::ScenarioConfig cfg = small_scenario();
  cfg.fbs.n_max = 2;
  const fs::path out = fresh_dir("fbs_cap");
  CHECK(rhc::cmd_fbs(cfg, 10.0, out) == 1);
  CHECK(lines(out / "fbs_summary.csv")[1].find(",false,") != std::string::npos);
  CHECK(rhc::cmd_fbs(cfg, -1.0, out) == 2);
  fs::remove_all(out);
}

TEST_CASE("sweep-alpha with manufactured data recovers the vertex") {
  const rhc::ScenarioConfig cfg = small_scenario();
  const fs::path out = fresh_dir("sweep_manufactured");
  const std::vector<double> grid{2.0, 5.0, 10.0, 20.0, 50.0};
  REQUIRE(rhc::cmd_sweep_alpha(cfg, grid, out,
                               [](double a) { return 2.0 * (a - 10.0) * (a - 10.0); }) == 0);
  const auto sweep = lines(out / "alpha_sweep.csv");
  CHECK(sweep.front() == "alpha,J_star");
  CHECK(sweep.size() == grid.size() + 1);
  const auto fit = lines(out / "fit.csv");
  CHECK(fit.front() == "alpha_star,kappa,residual");
  const std::vector<double> v = cells(fit[1]);
  CHECK(std::abs(v[0] - 10.0) <= 1e-8);
  CHECK(std::abs(v[1] - 2.0) <= 1e-8);
  fs::remove_all(out);
}

TEST_CASE("sweep-alpha on the model") {
  const rhc::ScenarioConfig cfg = small_scenario();
  const fs::path out = fresh_dir("sweep_model");
  REQUIRE(rhc::cmd_sweep_alpha(cfg, {2.0, 10.0, 50.0}, out) == 0);
  CHECK(lines(out / "alpha_sweep.csv").size() == 4);
  CHECK(cells(lines(out / "fit.csv")[1])[0] > 0.0);

  rhc::ScenarioConfig hopeless = cfg;
  hopeless.fbs.n_max = 1;
  CHECK(rhc::cmd_sweep_alpha(hopeless, {2.0, 10.0, 50.0}, out) == 1);
  CHECK(rhc::cmd_sweep_alpha(cfg, {}, out) == 2);
  fs::remove_all(out);
}
