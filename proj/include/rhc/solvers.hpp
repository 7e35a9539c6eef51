#pragma once

#include "rhc/grid.hpp"

namespace rhc {

/// theta = 1 is backward Euler, theta = 0.5 Crank-Nicolson. Both are
/// unconditionally stable for the symmetric diffusion operator.
struct TimeStepConfig {
  double dt = 0.005;
  double theta = 1.0;

  void validate() const;
};

/// One theta-step of dT/dt = L T + u with chi frozen over the step:
///   (I - theta dt L) T_next = (I + (1 - theta) dt L) T + dt u.
/// The caller chooses where in the step `u` is sampled. T_next(1) = 0.
Profile step_state(const RadialGrid& g, const Profile& T, const Profile& chi, const Profile& u,
                   const TimeStepConfig& cfg);

/// One step of dp/dt = -L p backwards from t + dt to t:
///   (I - theta dt L) p = (I + (1 - theta) dt L) p_next.
/// With theta = 1 this is the exact discrete adjoint of step_state in the
/// L^2(x dx) inner product.
Profile step_adjoint_backward(const RadialGrid& g, const Profile& p_next, const Profile& chi,
                              const TimeStepConfig& cfg);

/// Solves (alpha^{-1} I - L) p = L T - dThat_dt with p(1) = 0. The system is
/// symmetric positive definite after scaling by the node weights.
Profile solve_quasi_steady_adjoint(const RadialGrid& g, const Profile& chi, double alpha,
                                   const Profile& T, const Profile& dThat_dt);

}  // namespace rhc
