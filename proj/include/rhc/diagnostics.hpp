#pragma once

#include "rhc/grid.hpp"
#include "rhc/reference.hpp"

namespace rhc {

/// Both sides of the energy estimate for the feedback control
///   ||u||^2_{L2x} + lambda1 alpha ||u||^2_{L2_{x chi}}
///     <= ||dThat/dt||^2_{L2x} + alpha^{-1} |T|^2_{H1_{x chi}}.
struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = true;
  double t = 0.0;
};

/// J = 1/2 ||T - Tbar||^2_{L2x}.
double objective(const RadialGrid& g, const Profile& T, const Profile& Tbar);

/// J1 = 1/2 ||T - That||^2_{L2x}.
double tracking_cost(const RadialGrid& g, const Profile& T, const Profile& That);

/// J2(t) = 1/2 ||That(t) - Tbar||^2_{L2x}, which decays exactly as
/// exp(-2 mu t / tf) J2(0) and closes the triangle J <= 2 (J1 + J2).
double reference_gap(const ReferenceTrajectory& ref, const RadialGrid& g, double t);

BoundReport energy_bound(const RadialGrid& g, const Profile& chi, double alpha, const Profile& u,
                         const Profile& T, const Profile& dThat_dt, double lambda1,
                         double t = 0.0);

/// \int chi (dT/dx)^2 x dx.
double dirichlet_energy(const RadialGrid& g, const Profile& chi, const Profile& T);

/// ||u||_{L2x}.
double control_energy_norm(const RadialGrid& g, const Profile& u);

/// Caches the first Dirichlet eigenvalue for weight x chi and recomputes it
/// only when chi has moved by more than `relative_change` in the max norm
/// since the last solve.
class EigenvalueTracker {
 public:
  explicit EigenvalueTracker(double relative_change = 0.01) : threshold_(relative_change) {}

  double update(const RadialGrid& g, const Profile& chi);
  double value() const { return lambda_; }
  int solves() const { return solves_; }

 private:
  double threshold_;
  double lambda_ = 0.0;
  Profile chi_;
  int solves_ = 0;
};

}  // namespace rhc
