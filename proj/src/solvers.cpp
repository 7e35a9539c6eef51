#include "rhc/solvers.hpp"

#include <cmath>

#include "rhc/errors.hpp"

namespace rhc {

void TimeStepConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("TimeStepConfig: dt must be > 0");
  if (!(theta >= 0.5 && theta <= 1.0))
    throw InvalidArgument("TimeStepConfig: theta must lie in [0.5, 1]");
}

namespace {

// Solves (W / (theta dt) + K) y = W rhs_profile / (theta dt) on the free nodes.
Profile implicit_solve(const RadialGrid& g, const Profile& chi, const Profile& rhs_profile,
                       const TimeStepConfig& cfg) {
  const int m = g.size() - 1;
  const double inv = 1.0 / (cfg.theta * cfg.dt);
  const Eigen::VectorXd mass = inv * g.weights().head(m);
  TridiagonalSystem sys = assemble_shifted_stiffness(g, chi, mass);
  sys.rhs = (mass.array() * rhs_profile.head(m).array()).matrix();
  Profile out = Profile::Zero(g.size());
  out.head(m) = tridiagonal_solve(sys);
  return out;
}

Profile explicit_part(const RadialGrid& g, const Profile& v, const Profile& chi,
                      const TimeStepConfig& cfg) {
  if (cfg.theta == 1.0) return v;
  return v + (1.0 - cfg.theta) * cfg.dt * apply_cylindrical_operator(g, chi, v);
}

}  // namespace

Profile step_state(const RadialGrid& g, const Profile& T, const Profile& chi, const Profile& u,
                   const TimeStepConfig& cfg) {
  cfg.validate();
  g.check(T, "step_state(T)");
  g.check(u, "step_state(u)");
  g.check(chi, "step_state(chi)");
  const Profile rhs = explicit_part(g, T, chi, cfg) + cfg.dt * u;
  return implicit_solve(g, chi, rhs, cfg);
}

Profile step_adjoint_backward(const RadialGrid& g, const Profile& p_next, const Profile& chi,
                              const TimeStepConfig& cfg) {
  cfg.validate();
  g.check(p_next, "step_adjoint_backward(p_next)");
  g.check(chi, "step_adjoint_backward(chi)");
  return implicit_solve(g, chi, explicit_part(g, p_next, chi, cfg), cfg);
}

Profile solve_quasi_steady_adjoint(const RadialGrid& g, const Profile& chi, double alpha,
                                   const Profile& T, const Profile& dThat_dt) {
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw InvalidArgument("solve_quasi_steady_adjoint: alpha must be > 0");
  g.check(T, "solve_quasi_steady_adjoint(T)");
  g.check(dThat_dt, "solve_quasi_steady_adjoint(dThat_dt)");
  const int m = g.size() - 1;
  const Profile source = apply_cylindrical_operator(g, chi, T) - dThat_dt;
  const Eigen::VectorXd mass = g.weights().head(m) / alpha;
  TridiagonalSystem sys = assemble_shifted_stiffness(g, chi, mass);
  sys.rhs = (g.weights().head(m).array() * source.head(m).array()).matrix();
  Profile p = Profile::Zero(g.size());
  p.head(m) = tridiagonal_solve(sys);
  return p;
}

}  // namespace rhc
