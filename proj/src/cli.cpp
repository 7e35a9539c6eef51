#include "rhc/cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <system_error>

#include "rhc/errors.hpp"

namespace rhc {

namespace {

enum class Kind { Real, Int, Bool, Text, Seed };

struct Field {
  const char* key;
  Kind kind;
  void* target;
};

std::vector<Field> fields(ScenarioConfig& c) {
  return {
      {"grid.n", Kind::Int, &c.grid_n},
      {"time.tf", Kind::Real, &c.tf},
      {"time.dt", Kind::Real, &c.dt},
      {"time.theta", Kind::Real, &c.theta},
      {"reference.mu", Kind::Real, &c.mu},
      {"reference.t0_core", Kind::Real, &c.shapes.t0_core},
      {"reference.tbar_core", Kind::Real, &c.shapes.tbar_core},
      {"reference.tbar_exponent", Kind::Real, &c.shapes.tbar_exponent},
      {"reference.pedestal_height", Kind::Real, &c.shapes.pedestal_height},
      {"reference.pedestal_center", Kind::Real, &c.shapes.pedestal_center},
      {"reference.pedestal_width", Kind::Real, &c.shapes.pedestal_width},
      {"reference.t0_csv", Kind::Text, &c.t0_csv},
      {"reference.tbar_csv", Kind::Text, &c.tbar_csv},
      {"transport.a", Kind::Real, &c.transport.a},
      {"transport.R", Kind::Real, &c.transport.R},
      {"transport.B_phi0", Kind::Real, &c.transport.B_phi0},
      {"transport.q0", Kind::Real, &c.q0},
      {"transport.qa", Kind::Real, &c.qa},
      {"transport.k", Kind::Real, &c.transport.k},
      {"transport.omega_ExB", Kind::Real, &c.transport.omega_ExB},
      {"transport.gamma_ITG", Kind::Real, &c.transport.gamma_ITG},
      {"transport.s_thres", Kind::Real, &c.transport.s_thres},
      {"transport.L_Te", Kind::Real, &c.transport.L_Te},
      {"transport.chi_floor", Kind::Real, &c.transport.chi_floor},
      {"controller.alpha0", Kind::Real, &c.controller.alpha0},
      {"controller.adapt_gain", Kind::Real, &c.controller.adapt_gain},
      {"controller.alpha_min", Kind::Real, &c.controller.alpha_min},
      {"controller.alpha_max", Kind::Real, &c.controller.alpha_max},
      {"controller.adaptive", Kind::Bool, &c.controller.adaptive},
      {"fbs.alpha", Kind::Real, &c.fbs.alpha},
      {"fbs.eps", Kind::Real, &c.fbs.eps},
      {"fbs.n_max", Kind::Int, &c.fbs.n_max},
      {"fbs.relaxation", Kind::Real, &c.fbs.relaxation},
      {"output.dir", Kind::Text, &c.output_dir},
      {"seed", Kind::Seed, &c.seed},
  };
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
bool parse_number(const std::string& text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

void assign(const Field& f, const std::string& raw, int line) {
  const std::string key = f.key;
  auto fail = [&](const std::string& expected) {
    throw ConfigError("line " + std::to_string(line) + ": " + key + " expects " + expected +
                          ", got '" + raw + "'",
                      key, line);
  };
  switch (f.kind) {
    case Kind::Real: {
      double v = 0.0;
      if (!parse_number(raw, v) || !std::isfinite(v)) fail("a finite real number");
      *static_cast<double*>(f.target) = v;
      break;
    }
    case Kind::Int: {
      int v = 0;
      if (!parse_number(raw, v)) fail("an integer");
      *static_cast<int*>(f.target) = v;
      break;
    }
    case Kind::Seed: {
      unsigned long long v = 0;
      if (!parse_number(raw, v)) fail("a non-negative integer");
      *static_cast<unsigned long long*>(f.target) = v;
      break;
    }
    case Kind::Bool: {
      if (raw == "true" || raw == "1")
        *static_cast<bool*>(f.target) = true;
      else if (raw == "false" || raw == "0")
        *static_cast<bool*>(f.target) = false;
      else
        fail("true or false");
      break;
    }
    case Kind::Text: {
      std::string v = raw;
      if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
      *static_cast<std::string*>(f.target) = v;
      break;
    }
  }
}

std::string render(const Field& f) {
  switch (f.kind) {
    case Kind::Real: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", *static_cast<const double*>(f.target));
      return buf;
    }
    case Kind::Int:
      return std::to_string(*static_cast<const int*>(f.target));
    case Kind::Seed:
      return std::to_string(*static_cast<const unsigned long long*>(f.target));
    case Kind::Bool:
      return *static_cast<const bool*>(f.target) ? "true" : "false";
    case Kind::Text:
      return *static_cast<const std::string*>(f.target);
  }
  return {};
}

void check_config(const ScenarioConfig& c, const std::map<std::string, int>& lines) {
  auto require = [&](bool ok, const char* key, const std::string& rule) {
    if (ok) return;
    const auto it = lines.find(key);
    const int line = it == lines.end() ? 0 : it->second;
    std::string where = line > 0 ? "line " + std::to_string(line) + ": " : std::string();
    throw ConfigError(where + key + " " + rule, key, line);
  };

  require(c.grid_n >= 3 && c.grid_n <= 1000000, "grid.n", "must lie in [3, 1000000]");
  require(c.tf > 0.0, "time.tf", "must be > 0");
  require(c.dt > 0.0 && c.dt <= c.tf, "time.dt", "must lie in (0, time.tf]");
  {
    const double ratio = c.tf / c.dt;
    require(std::abs(ratio - std::round(ratio)) <= 1e-9 * ratio && ratio <= 1e7, "time.dt",
            "must divide time.tf into at most 1e7 whole steps");
  }
  require(c.theta >= 0.5 && c.theta <= 1.0, "time.theta", "must lie in [0.5, 1]");
  require(c.mu > 0.0, "reference.mu", "must be > 0");
  require(c.shapes.t0_core >= 0.0, "reference.t0_core", "must be >= 0");
  require(c.shapes.tbar_core >= 0.0, "reference.tbar_core", "must be >= 0");
  require(c.shapes.tbar_exponent > 0.0, "reference.tbar_exponent", "must be > 0");
  require(c.shapes.pedestal_height >= 0.0, "reference.pedestal_height", "must be >= 0");
  require(c.shapes.pedestal_center >= 0.0 && c.shapes.pedestal_center <= 1.0,
          "reference.pedestal_center", "must lie in [0, 1]");
  require(c.shapes.pedestal_width > 0.0, "reference.pedestal_width", "must be > 0");
  require(c.transport.a > 0.0, "transport.a", "must be > 0");
  require(c.transport.R > 0.0, "transport.R", "must be > 0");
  require(c.transport.B_phi0 > 0.0, "transport.B_phi0", "must be > 0");
  require(c.q0 > 0.0, "transport.q0", "must be > 0");
  require(c.qa > 0.0, "transport.qa", "must be > 0");
  require(c.transport.k >= 0.0, "transport.k", "must be >= 0");
  require(c.transport.omega_ExB >= 0.0, "transport.omega_ExB", "must be >= 0");
  require(c.transport.gamma_ITG > 0.0, "transport.gamma_ITG", "must be > 0");
  require(c.transport.L_Te > 0.0, "transport.L_Te", "must be > 0");
  require(c.transport.chi_floor > 0.0, "transport.chi_floor", "must be > 0");
  const ControllerConfig& k = c.controller;
  require(k.alpha_min > 0.0, "controller.alpha_min", "must be > 0");
  require(k.alpha_max >= k.alpha_min, "controller.alpha_max", "must be >= controller.alpha_min");
  require(k.alpha0 >= k.alpha_min && k.alpha0 <= k.alpha_max, "controller.alpha0",
          "must lie in [controller.alpha_min, controller.alpha_max]");
  require(k.adapt_gain >= 0.0, "controller.adapt_gain", "must be >= 0");
  require(c.fbs.alpha > 0.0, "fbs.alpha", "must be > 0");
  require(c.fbs.eps > 0.0, "fbs.eps", "must be > 0");
  require(c.fbs.n_max >= 1, "fbs.n_max", "must be >= 1");
  require(c.fbs.relaxation > 0.0 && c.fbs.relaxation <= 1.0, "fbs.relaxation",
          "must lie in (0, 1]");
}

}  // namespace

std::string ScenarioConfig::effective() const {
  ScenarioConfig copy = *this;
  std::string out;
  for (const Field& f : fields(copy)) out += std::string(f.key) + " = " + render(f) + "\n";
  return out;
}

void ScenarioConfig::validate() const { check_config(*this, {}); }

ScenarioConfig parse_config(std::istream& in, const std::string& origin) {
  ScenarioConfig cfg;
  const std::vector<Field> table = fields(cfg);
  std::map<std::string, int> lines;

  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line) + ": expected 'key = value'", "",
                        line);
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    const Field* field = nullptr;
    for (const Field& f : table)
      if (key == f.key) field = &f;
    if (field == nullptr)
      throw ConfigError(origin + ":" + std::to_string(line) + ": unknown key '" + key + "'", key,
                        line);
    if (lines.count(key))
      throw ConfigError(origin + ":" + std::to_string(line) + ": duplicate key '" + key + "'",
                        key, line);
    assign(*field, value, line);
    lines[key] = line;
  }

  if (!lines.count("time.dt")) cfg.dt = cfg.tf / 200.0;
  if (!lines.count("controller.adapt_gain")) cfg.controller.adapt_gain = 0.1 * cfg.controller.alpha0;
  check_config(cfg, lines);
  cfg.controller.dt = cfg.dt;
  cfg.controller.tf = cfg.tf;
  cfg.controller.theta = cfg.theta;
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string(), "", 0);
  return parse_config(in, path.string());
}

PlasmaModel build_model(const ScenarioConfig& cfg) {
  RadialGrid g = make_grid(cfg.grid_n);
  TransportParams params = cfg.transport;
  params.q = parabolic_safety_factor(g, cfg.q0, cfg.qa);
  params.s = parabolic_magnetic_shear(g, cfg.q0, cfg.qa);
  ReferenceTrajectory ref = make_reference(g, cfg.shapes, cfg.mu, cfg.tf);
  if (!cfg.t0_csv.empty()) ref.T0 = load_profile_csv(cfg.t0_csv, g);
  if (!cfg.tbar_csv.empty()) ref.Tbar = load_profile_csv(cfg.tbar_csv, g);
  return PlasmaModel(std::move(g), std::move(params), std::move(ref));
}

ControllerConfig controller_config(const ScenarioConfig& cfg) {
  ControllerConfig c = cfg.controller;
  c.dt = cfg.dt;
  c.tf = cfg.tf;
  c.theta = cfg.theta;
  return c;
}

TimeStepConfig time_step_config(const ScenarioConfig& cfg) { return {cfg.dt, cfg.theta}; }

std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag,
                                         const char* env_value, const ScenarioConfig& cfg) {
  if (flag && !flag->empty()) return *flag;
  if (env_value != nullptr && *env_value != '\0') return env_value;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return "rhc_out";
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

namespace {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::string& header)
      : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw OutputError("cannot open " + path.string() + " for writing");
    out_ << header << '\n';
  }

  template <class... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  void close() {
    out_.flush();
    if (!out_) throw OutputError("failed writing " + path_.string());
    out_.close();
  }

  ~CsvWriter() {
    if (out_.is_open()) out_.flush();
  }

 private:
  static std::string cell(double v) { return format_real(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }

  std::filesystem::path path_;
  std::ofstream out_;
};

void prepare_dir(const std::filesystem::path& out) {
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec || !std::filesystem::is_directory(out))
    throw OutputError("cannot create output directory " + out.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << text;
  f.flush();
  if (!f) throw OutputError("failed writing " + path.string());
}

void write_field(const std::filesystem::path& path, const RadialGrid& g,
                 const std::vector<double>& times, const std::vector<Profile>& values) {
  CsvWriter w(path, "t,x,value");
  for (std::size_t k = 0; k < values.size(); ++k)
    for (int i = 0; i < g.size(); ++i) w.row(times[k], g.node(i), values[k][i]);
  w.close();
}

void write_final_profile(const std::filesystem::path& path, const RadialGrid& g,
                         const Profile& T, const Profile& Tbar) {
  CsvWriter w(path, "x,T,Tbar,abs_err");
  for (int i = 0; i < g.size(); ++i) w.row(g.node(i), T[i], Tbar[i], std::abs(T[i] - Tbar[i]));
  w.close();
}

void write_reference(const std::filesystem::path& path, const PlasmaModel& model,
                     const std::vector<double>& times) {
  std::vector<Profile> values;
  values.reserve(times.size());
  for (double t : times) values.push_back(reference_at(model.ref, t));
  write_field(path, model.grid, times, values);
}

template <class Body>
int guarded(const char* command, Body body) {
  try {
    return body();
  } catch (const OutputError& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << command << ": " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

int cmd_simulate(const ScenarioConfig& cfg, const std::filesystem::path& out) {
  return guarded("simulate", [&] {
    const PlasmaModel model = build_model(cfg);
    const SimulationResult res = run_rhc(model, controller_config(cfg));
    prepare_dir(out);
    write_text(out / "effective_config.txt", cfg.effective());

    CsvWriter ts(out / "timeseries.csv", "t,J,J1,J2,u_l2x,bound_lhs,bound_rhs,alpha,beta");
    for (std::size_t k = 0; k < res.size(); ++k) {
      const StepDiagnostics& d = res.diagnostics[k];
      ts.row(d.t, d.J, d.J1, d.J2, d.u_l2x, d.bound.lhs, d.bound.rhs, res.alpha_history[k],
             res.beta_history[k]);
    }
    ts.close();
    write_field(out / "state.csv", model.grid, res.times, res.T_history);
    write_field(out / "control.csv", model.grid, res.times, res.u_history);
    write_field(out / "adjoint.csv", model.grid, res.times, res.p_history);
    write_reference(out / "reference.csv", model, res.times);
    const Profile& last = res.T_history.empty() ? model.ref.T0 : res.T_history.back();
    write_final_profile(out / "final_profile.csv", model.grid, last, model.ref.Tbar);

    if (!res.ok()) {
      std::cerr << "simulate: " << *res.failure << '\n';
      return 1;
    }
    return 0;
  });
}

int cmd_fbs(const ScenarioConfig& cfg, double alpha, const std::filesystem::path& out) {
  return guarded("fbs", [&] {
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw InvalidArgument("--alpha must be a positive number");
    const PlasmaModel model = build_model(cfg);
    FbsConfig fbs = cfg.fbs;
    fbs.alpha = alpha;
    const TimeStepConfig step = time_step_config(cfg);
    const FbsResult res = forward_backward_sweep(model, fbs, step);
    const int steps = static_cast<int>(res.u.size());
    const FbsTrajectory baseline =
        fbs_trajectory(model, std::vector<Profile>(steps, model.grid.zeros()), step);

    prepare_dir(out);
    ScenarioConfig echo = cfg;
    echo.fbs.alpha = alpha;
    write_text(out / "effective_config.txt", echo.effective());

    CsvWriter conv(out / "fbs_convergence.csv", "iteration,iterate_diff_norm,terminal_J");
    for (std::size_t n = 0; n < res.diff_history.size(); ++n)
      conv.row(static_cast<int>(n + 1), res.diff_history[n], res.terminal_J_history[n]);
    conv.close();

    CsvWriter summary(out / "fbs_summary.csv",
                      "alpha,converged,iterations,final_diff_norm,terminal_J,baseline_terminal_J");
    summary.row(alpha, std::string(res.converged ? "true" : "false"), res.iterations,
                res.diff_history.empty() ? 0.0 : res.diff_history.back(), res.terminal_J,
                objective(model.grid, baseline.T.back(), model.ref.Tbar));
    summary.close();

    std::vector<double> times(steps + 1);
    for (int k = 0; k <= steps; ++k) times[k] = cfg.tf * static_cast<double>(k) / steps;
    write_field(out / "state.csv", model.grid, times, res.T);
    write_field(out / "control.csv", model.grid,
                std::vector<double>(times.begin(), times.end() - 1), res.u);
    write_field(out / "adjoint.csv", model.grid, times, res.p);
    write_reference(out / "reference.csv", model, times);
    write_final_profile(out / "final_profile.csv", model.grid, res.T.back(), model.ref.Tbar);

    if (!res.converged) {
      std::cerr << "fbs: no convergence after " << res.iterations << " iterations\n";
      return 1;
    }
    return 0;
  });
}

int cmd_sweep_alpha(const ScenarioConfig& cfg, const std::vector<double>& grid,
                    const std::filesystem::path& out, const ManufacturedObjective& manufactured) {
  return guarded("sweep-alpha", [&] {
    if (grid.empty()) throw InvalidArgument("--grid must list at least three alpha values");
    const std::pair<double, double> bounds{cfg.controller.alpha_min, cfg.controller.alpha_max};
    CalibrationResult cal;
    if (manufactured) {
      std::vector<double> values;
      for (double a : grid) {
        values.push_back(manufactured(a));
        cal.points.push_back({a, values.back(), true, 0});
      }
      cal.fit = fit_penalty_quadratic(grid, values, bounds);
    } else {
      cal = calibrate_alpha(grid, build_model(cfg), cfg.fbs, time_step_config(cfg), bounds);
    }

    prepare_dir(out);
    write_text(out / "effective_config.txt", cfg.effective());
    CsvWriter sweep(out / "alpha_sweep.csv", "alpha,J_star");
    for (const CalibrationPoint& pt : cal.points) sweep.row(pt.alpha, pt.J_star);
    sweep.close();
    CsvWriter fit(out / "fit.csv", "alpha_star,kappa,residual");
    fit.row(cal.fit.alpha_star, cal.fit.kappa, cal.fit.residual);
    fit.close();

    for (const CalibrationPoint& pt : cal.points)
      if (!pt.converged) {
        std::cerr << "sweep-alpha: sweep at alpha = " << pt.alpha << " did not converge\n";
        return 1;
      }
    return 0;
  });
}

}  // namespace rhc
