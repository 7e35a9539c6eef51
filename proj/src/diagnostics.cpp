#include "rhc/diagnostics.hpp"

#include <cmath>

#include "rhc/errors.hpp"

namespace rhc {

double objective(const RadialGrid& g, const Profile& T, const Profile& Tbar) {
  g.check(T, "objective(T)");
  g.check(Tbar, "objective(Tbar)");
  const Profile d = T - Tbar;
  return 0.5 * weighted_inner_product(g, d, d);
}

double tracking_cost(const RadialGrid& g, const Profile& T, const Profile& That) {
  return objective(g, T, That);
}

double reference_gap(const ReferenceTrajectory& ref, const RadialGrid& g, double t) {
  return objective(g, reference_at(ref, t), ref.Tbar);
}

BoundReport energy_bound(const RadialGrid& g, const Profile& chi, double alpha, const Profile& u,
                         const Profile& T, const Profile& dThat_dt, double lambda1, double t) {
  if (!(alpha > 0.0)) throw InvalidArgument("energy_bound: alpha must be > 0");
  BoundReport r;
  r.t = t;
  r.lhs = weighted_inner_product(g, u, u) + lambda1 * alpha * weighted_inner_product(g, u, u, chi);
  r.rhs = weighted_inner_product(g, dThat_dt, dThat_dt) +
          sobolev_seminorm_sq(g, chi, T) / alpha;
  r.satisfied = r.lhs <= r.rhs * (1.0 + 1e-9);
  return r;
}

double dirichlet_energy(const RadialGrid& g, const Profile& chi, const Profile& T) {
  return sobolev_seminorm_sq(g, chi, T);
}

double control_energy_norm(const RadialGrid& g, const Profile& u) { return l2x_norm(g, u); }

double EigenvalueTracker::update(const RadialGrid& g, const Profile& chi) {
  const bool stale = solves_ == 0 || chi_.size() != chi.size() ||
                     (chi - chi_).cwiseAbs().maxCoeff() > threshold_ * chi_.cwiseAbs().maxCoeff();
  if (stale) {
    lambda_ = first_dirichlet_eigenvalue(g, chi);
    chi_ = chi;
    ++solves_;
  }
  return lambda_;
}

}  // namespace rhc
