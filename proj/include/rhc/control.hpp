#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rhc/diagnostics.hpp"
#include "rhc/grid.hpp"
#include "rhc/reference.hpp"
#include "rhc/solvers.hpp"
#include "rhc/transport.hpp"

namespace rhc {

/// Everything the controllers need to know about the plant and the target.
struct PlasmaModel {
  RadialGrid grid;
  TransportParams transport;
  DerivedCoefficients coeffs;
  ReferenceTrajectory ref;

  PlasmaModel(RadialGrid g, TransportParams params, ReferenceTrajectory reference);

  Profile diffusivity_of(const Profile& T) const;
};

/// Default synthetic scenario on an n-node grid.
PlasmaModel default_model(int n = 101);

struct ControllerConfig {
  double alpha0 = 10.0;
  double adapt_gain = 1.0;  // proportionality in |d alpha/dt| ~ dJ1/dt / sqrt(J1)
  double alpha_min = 1e-2;
  double alpha_max = 1e4;
  double dt = 0.005;
  double tf = 1.0;
  double theta = 1.0;
  /// When false alpha stays at alpha0 and the sign law is only recorded.
  bool adaptive = true;

  void validate() const;
  int steps() const;
};

struct FbsConfig {
  double alpha = 10.0;
  double eps = 1e-6;
  int n_max = 1000;
  double relaxation = 0.5;  // 1 is the undamped update u <- -p / alpha

  void validate() const;
};

/// u = -p / alpha.
Profile feedback_control(const Profile& p, double alpha);

/// Sign of \int (T - That) x dx. Integrals within a few ulps of zero relative
/// to \int |T - That| x dx count as ties and return 0.
int deviation_sign(const RadialGrid& g, const Profile& T, const Profile& That);

/// alpha + beta * gain * max(0, (J1 - J1_prev) / dt) / sqrt(max(J1, tiny)) * dt,
/// clamped to [bounds.first, bounds.second]. beta = 0 leaves alpha unchanged.
double adapt_alpha(double alpha, double J1, double J1_prev, int beta, double dt, double gain,
                   std::pair<double, double> bounds);

/// Feedback evaluated at state T and time t without advancing the state.
struct FeedbackSample {
  Profile chi;
  Profile rate;  // dThat/dt used in the adjoint solve
  Profile p;
  Profile u;
};

/// The reference rate is sampled at the middle of the coming step,
/// min(t + dt/2, tf), so the injected heat matches the reference increment
/// over the step to second order in dt.
FeedbackSample evaluate_feedback(const PlasmaModel& model, const Profile& T, double t, double alpha,
                                 const ControllerConfig& cfg);

struct RhcStep {
  Profile u;
  Profile T_next;
  Profile p;
};

/// chi from T, quasi-steady adjoint, u = -p / alpha, one state step.
RhcStep rhc_step(const PlasmaModel& model, const Profile& T, double t, double alpha,
                 const ControllerConfig& cfg);

struct StepDiagnostics {
  double t = 0.0;
  double J = 0.0;
  double J1 = 0.0;
  double J2 = 0.0;
  double u_l2x = 0.0;
  double lambda1 = 0.0;
  BoundReport bound;
};

/// One sample per time t_k = k tf / N, k = 0..N. The sample at tf holds the
/// final state and the control the law would apply there.
struct SimulationResult {
  std::vector<double> times;
  std::vector<Profile> T_history;
  std::vector<Profile> u_history;
  std::vector<Profile> p_history;
  std::vector<double> alpha_history;
  std::vector<int> beta_history;
  std::vector<StepDiagnostics> diagnostics;
  std::optional<std::string> failure;  // set when a solver gave up; history is partial

  bool ok() const { return !failure.has_value(); }
  std::size_t size() const { return times.size(); }
};

/// Closed loop over [0, tf]. Solver failures are caught and reported through
/// `failure` together with the history recorded up to that point.
SimulationResult run_rhc(const PlasmaModel& model, const ControllerConfig& cfg);

struct FbsResult {
  std::vector<Profile> u;  // N controls, u[k] acts on [t_k, t_{k+1}]
  std::vector<Profile> T;  // N + 1 states
  std::vector<Profile> p;  // N + 1 adjoints, p[N] = T[N] - That(tf)
  int iterations = 0;
  bool converged = false;
  std::vector<double> diff_history;        // ||u_n - u_{n-1}||_{L2(0,tf; L2x)}
  std::vector<double> terminal_J_history;  // J(tf) of each forward solve
  double terminal_J = 0.0;                 // J(tf) of the returned state
};

/// Open-loop forward-backward sweep for
///   min 1/2 ||T(tf) - That(tf)||^2_{L2x} + alpha/2 \int ||u||^2_{L2x} dt.
/// The diffusivity is frozen along the reference trajectory so that the
/// backward sweep is the exact discrete adjoint of the forward one. The
/// returned (u, T, p) are mutually consistent: T solves the state equation
/// under u and p the adjoint equation for T. On hitting n_max the iterate
/// with the smallest update is returned with converged = false.
FbsResult forward_backward_sweep(const PlasmaModel& model, const FbsConfig& fbs,
                                 const TimeStepConfig& step);

/// Discrete objective minimized by forward_backward_sweep, for a control
/// sequence of N profiles.
double fbs_objective(const PlasmaModel& model, double alpha, const std::vector<Profile>& u,
                     const TimeStepConfig& step);

/// Forward and backward solves for a given control without updating it.
struct FbsTrajectory {
  std::vector<Profile> T;
  std::vector<Profile> p;
};
FbsTrajectory fbs_trajectory(const PlasmaModel& model, const std::vector<Profile>& u,
                             const TimeStepConfig& step);

struct QuadraticFit {
  double alpha_star = 0.0;
  double kappa = 0.0;
  double residual = 0.0;  // max_i |J_i - kappa (alpha_i - alpha_star)^2|
};

/// Least-squares fit of J = kappa (alpha - alpha_star)^2 with kappa >= 0 and
/// alpha_star restricted to vertex_bounds. Needs at least three distinct
/// alpha values.
QuadraticFit fit_penalty_quadratic(
    const std::vector<double>& alphas, const std::vector<double>& values,
    std::pair<double, double> vertex_bounds = {-std::numeric_limits<double>::infinity(),
                                               std::numeric_limits<double>::infinity()});

struct CalibrationPoint {
  double alpha = 0.0;
  double J_star = 0.0;
  bool converged = false;
  int iterations = 0;
};

struct CalibrationResult {
  std::vector<CalibrationPoint> points;  // in grid order
  QuadraticFit fit;
};

/// Runs forward_backward_sweep for every alpha (concurrently) and fits the
/// terminal objective with the vertex kept inside vertex_bounds (the
/// controller's admissible alpha range by default). Sweeps that did not
/// converge are left out of the fit.
CalibrationResult calibrate_alpha(const std::vector<double>& alpha_grid, const PlasmaModel& model,
                                  const FbsConfig& fbs, const TimeStepConfig& step,
                                  std::pair<double, double> vertex_bounds = {1e-2, 1e4});

}  // namespace rhc
