#include "rhc/control.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <set>
#include <string>

#include "rhc/errors.hpp"

namespace rhc {

PlasmaModel::PlasmaModel(RadialGrid g, TransportParams params, ReferenceTrajectory reference)
    : grid(std::move(g)),
      transport(std::move(params)),
      coeffs(derive_coefficients(transport, grid)),
      ref(std::move(reference)) {
  ref.validate(grid);
}

Profile PlasmaModel::diffusivity_of(const Profile& T) const {
  return diffusivity(coeffs, grid, T, transport.chi_floor);
}

PlasmaModel default_model(int n) {
  RadialGrid g = make_grid(n);
  TransportParams params = tore_supra_like(g);
  ReferenceTrajectory ref = make_reference(g, SyntheticProfiles{});
  return PlasmaModel(std::move(g), std::move(params), std::move(ref));
}

namespace {

int step_count(double tf, double dt, const char* what) {
  const double ratio = tf / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio)
    throw InvalidArgument(std::string(what) + ": tf / dt must be a positive integer");
  return static_cast<int>(rounded);
}

}  // namespace

void ControllerConfig::validate() const {
  if (!(alpha_min > 0.0) || !(alpha_min <= alpha0) || !(alpha0 <= alpha_max) ||
      !std::isfinite(alpha_max))
    throw InvalidArgument("ControllerConfig: need 0 < alpha_min <= alpha0 <= alpha_max");
  if (!(adapt_gain >= 0.0) || !std::isfinite(adapt_gain))
    throw InvalidArgument("ControllerConfig: adapt_gain must be >= 0");
  if (!(tf > 0.0)) throw InvalidArgument("ControllerConfig: tf must be > 0");
  TimeStepConfig{dt, theta}.validate();
  step_count(tf, dt, "ControllerConfig");
}

int ControllerConfig::steps() const { return step_count(tf, dt, "ControllerConfig"); }

void FbsConfig::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("FbsConfig: alpha must be > 0");
  if (!(eps > 0.0)) throw InvalidArgument("FbsConfig: eps must be > 0");
  if (n_max < 1) throw InvalidArgument("FbsConfig: n_max must be >= 1");
  if (!(relaxation > 0.0 && relaxation <= 1.0))
    throw InvalidArgument("FbsConfig: relaxation must lie in (0, 1]");
}

Profile feedback_control(const Profile& p, double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("feedback_control: alpha must be > 0");
  return -p / alpha;
}

int deviation_sign(const RadialGrid& g, const Profile& T, const Profile& That) {
  const Profile d = T - That;
  const Profile one = g.constant(1.0);
  const double integral = weighted_inner_product(g, d, one);
  const double scale = weighted_inner_product(g, d.cwiseAbs(), one);
  if (std::abs(integral) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) return 0;
  return integral > 0.0 ? 1 : -1;
}

double adapt_alpha(double alpha, double J1, double J1_prev, int beta, double dt, double gain,
                   std::pair<double, double> bounds) {
  constexpr double kTinyJ = 1e-300;
  const double growth = std::max(0.0, (J1 - J1_prev) / dt);
  const double strength = growth / std::sqrt(std::max(J1, kTinyJ));
  const double next = alpha + static_cast<double>(beta) * gain * strength * dt;
  return std::clamp(next, bounds.first, bounds.second);
}

FeedbackSample evaluate_feedback(const PlasmaModel& model, const Profile& T, double t, double alpha,
                                 const ControllerConfig& cfg) {
  FeedbackSample s;
  s.chi = model.diffusivity_of(T);
  s.rate = reference_rate(model.ref, std::min(t + 0.5 * cfg.dt, model.ref.tf));
  s.p = solve_quasi_steady_adjoint(model.grid, s.chi, alpha, T, s.rate);
  s.u = feedback_control(s.p, alpha);
  return s;
}

RhcStep rhc_step(const PlasmaModel& model, const Profile& T, double t, double alpha,
                 const ControllerConfig& cfg) {
  if (!(t >= 0.0 && t < model.ref.tf)) throw InvalidArgument("rhc_step: t must lie in [0, tf)");
  FeedbackSample s = evaluate_feedback(model, T, t, alpha, cfg);
  RhcStep step;
  step.T_next = step_state(model.grid, T, s.chi, s.u, TimeStepConfig{cfg.dt, cfg.theta});
  step.u = std::move(s.u);
  step.p = std::move(s.p);
  return step;
}

SimulationResult run_rhc(const PlasmaModel& model, const ControllerConfig& cfg) {
  cfg.validate();
  if (std::abs(cfg.tf - model.ref.tf) > 1e-12 * model.ref.tf)
    throw InvalidArgument("run_rhc: controller tf differs from the reference tf");
  const RadialGrid& g = model.grid;
  const int steps = cfg.steps();
  const TimeStepConfig step_cfg{cfg.dt, cfg.theta};
  const std::pair<double, double> bounds{cfg.alpha_min, cfg.alpha_max};

  SimulationResult out;
  EigenvalueTracker lambda;
  Profile T = model.ref.T0;
  double alpha = cfg.alpha0;
  try {
    for (int k = 0; k <= steps; ++k) {
      const double t = cfg.tf * static_cast<double>(k) / steps;
      const Profile That = reference_at(model.ref, t);
      FeedbackSample s = evaluate_feedback(model, T, t, alpha, cfg);

      StepDiagnostics d;
      d.t = t;
      d.J = objective(g, T, model.ref.Tbar);
      d.J1 = tracking_cost(g, T, That);
      d.J2 = reference_gap(model.ref, g, t);
      d.u_l2x = control_energy_norm(g, s.u);
      d.lambda1 = lambda.update(g, s.chi);
      d.bound = energy_bound(g, s.chi, alpha, s.u, T, s.rate, d.lambda1, t);

      out.times.push_back(t);
      out.T_history.push_back(T);
      out.u_history.push_back(s.u);
      out.p_history.push_back(s.p);
      out.alpha_history.push_back(alpha);
      out.beta_history.push_back(deviation_sign(g, T, That));
      out.diagnostics.push_back(d);
      if (k == steps) break;

      T = step_state(g, T, s.chi, s.u, step_cfg);
      if (cfg.adaptive) {
        const double t_next = cfg.tf * static_cast<double>(k + 1) / steps;
        const Profile That_next = reference_at(model.ref, t_next);
        const double J1_next = tracking_cost(g, T, That_next);
        const int beta = deviation_sign(g, T, That_next);
        alpha = adapt_alpha(alpha, J1_next, d.J1, beta, cfg.dt, cfg.adapt_gain, bounds);
      }
    }
  } catch (const std::exception& e) {
    out.failure = std::string("run_rhc stopped at t = ") +
                  std::to_string(out.times.empty() ? 0.0 : out.times.back()) + ": " + e.what();
  }
  return out;
}

namespace {

struct FrozenSweep {
  int steps;
  TimeStepConfig step;
  std::vector<Profile> chi;  // diffusivity on each interval
  Profile terminal_target;
};

FrozenSweep freeze(const PlasmaModel& model, const TimeStepConfig& step) {
  step.validate();
  FrozenSweep f{step_count(model.ref.tf, step.dt, "forward_backward_sweep"), step, {}, {}};
  f.step.dt = model.ref.tf / f.steps;
  f.chi.reserve(f.steps);
  for (int k = 0; k < f.steps; ++k) {
    const double t = model.ref.tf * static_cast<double>(k) / f.steps;
    f.chi.push_back(model.diffusivity_of(reference_at(model.ref, t)));
  }
  f.terminal_target = reference_at(model.ref, model.ref.tf);
  return f;
}

FbsTrajectory sweep(const PlasmaModel& model, const FrozenSweep& f, const std::vector<Profile>& u) {
  if (static_cast<int>(u.size()) != f.steps)
    throw InvalidArgument("forward_backward_sweep: control sequence has wrong length");
  FbsTrajectory tr;
  tr.T.reserve(f.steps + 1);
  tr.T.push_back(model.ref.T0);
  for (int k = 0; k < f.steps; ++k)
    tr.T.push_back(step_state(model.grid, tr.T.back(), f.chi[k], u[k], f.step));
  tr.p.assign(f.steps + 1, Profile());
  tr.p[f.steps] = tr.T[f.steps] - f.terminal_target;
  for (int k = f.steps - 1; k >= 0; --k)
    tr.p[k] = step_adjoint_backward(model.grid, tr.p[k + 1], f.chi[k], f.step);
  return tr;
}

}  // namespace

FbsTrajectory fbs_trajectory(const PlasmaModel& model, const std::vector<Profile>& u,
                             const TimeStepConfig& step) {
  return sweep(model, freeze(model, step), u);
}

double fbs_objective(const PlasmaModel& model, double alpha, const std::vector<Profile>& u,
                     const TimeStepConfig& step) {
  const FrozenSweep f = freeze(model, step);
  const FbsTrajectory tr = sweep(model, f, u);
  double energy = 0.0;
  for (const Profile& uk : u) energy += f.step.dt * weighted_inner_product(model.grid, uk, uk);
  return objective(model.grid, tr.T.back(), f.terminal_target) + 0.5 * alpha * energy;
}

FbsResult forward_backward_sweep(const PlasmaModel& model, const FbsConfig& fbs,
                                 const TimeStepConfig& step) {
  fbs.validate();
  const FrozenSweep f = freeze(model, step);
  const RadialGrid& g = model.grid;
  const double r = fbs.relaxation;

  FbsResult out;
  std::vector<Profile> u(f.steps, g.zeros());
  std::vector<Profile> best = u;
  double best_diff = std::numeric_limits<double>::infinity();

  for (int n = 1; n <= fbs.n_max; ++n) {
    const FbsTrajectory tr = sweep(model, f, u);
    out.terminal_J_history.push_back(objective(g, tr.T.back(), model.ref.Tbar));

    double diff_sq = 0.0;
    for (int k = 0; k < f.steps; ++k) {
      const Profile next = (1.0 - r) * u[k] + r * feedback_control(tr.p[k], fbs.alpha);
      const Profile delta = next - u[k];
      diff_sq += f.step.dt * weighted_inner_product(g, delta, delta);
      u[k] = next;
    }
    const double diff = std::sqrt(diff_sq);
    out.diff_history.push_back(diff);
    out.iterations = n;
    if (!std::isfinite(diff)) break;
    if (diff < best_diff) {
      best_diff = diff;
      best = u;
    }
    if (diff <= fbs.eps) {
      out.converged = true;
      break;
    }
  }

  out.u = out.converged ? std::move(u) : std::move(best);
  FbsTrajectory tr = sweep(model, f, out.u);
  out.T = std::move(tr.T);
  out.p = std::move(tr.p);
  out.terminal_J = objective(g, out.T.back(), model.ref.Tbar);
  return out;
}

QuadraticFit fit_penalty_quadratic(const std::vector<double>& alphas,
                                   const std::vector<double>& values,
                                   std::pair<double, double> vertex_bounds) {
  if (alphas.size() != values.size())
    throw InvalidArgument("fit_penalty_quadratic: alpha/value length mismatch");
  const std::set<double> distinct(alphas.begin(), alphas.end());
  if (distinct.size() < 3)
    throw InvalidArgument("fit_penalty_quadratic: need at least three distinct alpha values");
  for (std::size_t i = 0; i < alphas.size(); ++i)
    if (!std::isfinite(alphas[i]) || !std::isfinite(values[i]))
      throw InvalidArgument("fit_penalty_quadratic: non-finite sample");

  if (!(vertex_bounds.first <= vertex_bounds.second))
    throw InvalidArgument("fit_penalty_quadratic: empty vertex interval");

  const std::size_t m = alphas.size();
  auto clamp_vertex = [&](double a) {
    return std::clamp(a, vertex_bounds.first, vertex_bounds.second);
  };
  // For a fixed vertex the best curvature is a 1-D linear least-squares
  // problem, so only the vertex needs a search.
  auto kappa_for = [&](double a_star) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double s = (alphas[i] - a_star) * (alphas[i] - a_star);
      num += values[i] * s;
      den += s * s;
    }
    return den > 0.0 ? std::max(0.0, num / den) : 0.0;
  };
  auto sse = [&](double a_star, double kappa) {
    double e = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double r = values[i] - kappa * (alphas[i] - a_star) * (alphas[i] - a_star);
      e += r * r;
    }
    return e;
  };
  auto profile_sse = [&](double a_star) { return sse(a_star, kappa_for(a_star)); };

  const double lo = *distinct.begin();
  const double hi = *distinct.rbegin();
  const double span = hi - lo;
  const int samples = 4000;
  const double scan_lo = clamp_vertex(lo - 2.0 * span);
  const double scan_hi = clamp_vertex(hi + 3.0 * span);
  const double scan_step = (scan_hi - scan_lo) / samples;
  double a_best = scan_lo;
  double e_best = profile_sse(a_best);
  for (int j = 1; j <= samples; ++j) {
    const double a = scan_lo + j * scan_step;
    const double e = profile_sse(a);
    if (e < e_best) {
      e_best = e;
      a_best = a;
    }
  }

  // General quadratic a x^2 + b x + c: its vertex is exact for exact data.
  {
    Eigen::MatrixXd V(m, 3);
    Eigen::VectorXd y(m);
    for (std::size_t i = 0; i < m; ++i) {
      V(i, 0) = alphas[i] * alphas[i];
      V(i, 1) = alphas[i];
      V(i, 2) = 1.0;
      y[i] = values[i];
    }
    const Eigen::Vector3d c = V.colPivHouseholderQr().solve(y);
    if (c[0] > 0.0) {
      const double a = clamp_vertex(-c[1] / (2.0 * c[0]));
      if (std::isfinite(a) && profile_sse(a) < e_best) {
        e_best = profile_sse(a);
        a_best = a;
      }
    }
  }

  // Golden-section refinement inside one scan cell either side.
  {
    double left = clamp_vertex(a_best - scan_step);
    double right = clamp_vertex(a_best + scan_step);
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = right - phi * (right - left);
    double x2 = left + phi * (right - left);
    double f1 = profile_sse(x1);
    double f2 = profile_sse(x2);
    for (int it = 0; it < 200 && right - left > 1e-15 * (1.0 + std::abs(a_best)); ++it) {
      if (f1 < f2) {
        right = x2;
        x2 = x1;
        f2 = f1;
        x1 = right - phi * (right - left);
        f1 = profile_sse(x1);
      } else {
        left = x1;
        x1 = x2;
        f1 = f2;
        x2 = left + phi * (right - left);
        f2 = profile_sse(x2);
      }
    }
    const double a = 0.5 * (left + right);
    if (profile_sse(a) <= e_best) {
      e_best = profile_sse(a);
      a_best = a;
    }
  }

  // Gauss-Newton polish on (kappa, alpha_star).
  double kappa = kappa_for(a_best);
  for (int it = 0; it < 50 && kappa > 0.0; ++it) {
    Eigen::MatrixXd Jac(m, 2);
    Eigen::VectorXd res(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double d = alphas[i] - a_best;
      res[i] = values[i] - kappa * d * d;
      Jac(i, 0) = d * d;
      Jac(i, 1) = -2.0 * kappa * d;
    }
    const Eigen::Vector2d delta = Jac.colPivHouseholderQr().solve(res);
    const double k_new = std::max(0.0, kappa + delta[0]);
    const double a_new = clamp_vertex(a_best + delta[1]);
    const double e_new = sse(a_new, k_new);
    if (!(e_new < e_best)) break;
    kappa = k_new;
    a_best = a_new;
    e_best = e_new;
  }

  QuadraticFit fit;
  fit.alpha_star = a_best;
  fit.kappa = kappa;
  for (std::size_t i = 0; i < m; ++i) {
    const double d = alphas[i] - a_best;
    fit.residual = std::max(fit.residual, std::abs(values[i] - kappa * d * d));
  }
  return fit;
}

CalibrationResult calibrate_alpha(const std::vector<double>& alpha_grid, const PlasmaModel& model,
                                  const FbsConfig& fbs, const TimeStepConfig& step,
                                  std::pair<double, double> vertex_bounds) {
  const std::set<double> distinct(alpha_grid.begin(), alpha_grid.end());
  if (distinct.size() < 3)
    throw InvalidArgument("calibrate_alpha: need at least three distinct alpha values");
  for (double a : alpha_grid)
    if (!(a > 0.0)) throw InvalidArgument("calibrate_alpha: alpha values must be positive");

  std::vector<std::future<CalibrationPoint>> jobs;
  jobs.reserve(alpha_grid.size());
  for (double a : alpha_grid) {
    jobs.push_back(std::async(std::launch::async, [&model, &step, fbs, a] {
      FbsConfig cfg = fbs;
      cfg.alpha = a;
      CalibrationPoint pt;
      pt.alpha = a;
      try {
        const FbsResult res = forward_backward_sweep(model, cfg, step);
        pt.J_star = res.terminal_J;
        pt.converged = res.converged && std::isfinite(res.terminal_J);
        pt.iterations = res.iterations;
      } catch (const NumericFailure&) {
        pt.J_star = std::numeric_limits<double>::quiet_NaN();
      }
      return pt;
    }));
  }

  CalibrationResult out;
  std::vector<double> xs;
  std::vector<double> ys;
  for (auto& job : jobs) {
    CalibrationPoint pt = job.get();
    if (pt.converged) {
      xs.push_back(pt.alpha);
      ys.push_back(pt.J_star);
    }
    out.points.push_back(pt);
  }
  if (std::set<double>(xs.begin(), xs.end()).size() < 3)
    throw CalibrationFailure("calibrate_alpha: fewer than three sweeps converged");
  out.fit = fit_penalty_quadratic(xs, ys, vertex_bounds);
  return out;
}

}  // namespace rhc
