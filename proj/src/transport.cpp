#include "rhc/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rhc/errors.hpp"

namespace rhc {

void TransportParams::validate(const RadialGrid& g) const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw InvalidArgument(std::string("TransportParams: ") + name + " must be > 0");
  };
  positive(a, "a");
  positive(R, "R");
  positive(B_phi0, "B_phi0");
  positive(gamma_ITG, "gamma_ITG");
  positive(chi_floor, "chi_floor");
  if (!(k >= 0.0)) throw InvalidArgument("TransportParams: k must be >= 0");
  if (!std::isfinite(omega_ExB) || !std::isfinite(s_thres) || !std::isfinite(L_Te))
    throw InvalidArgument("TransportParams: non-finite scalar");
  if (!(L_Te >= 0.0)) throw InvalidArgument("TransportParams: L_Te must be >= 0");
  g.check(q, "TransportParams.q");
  g.check(s, "TransportParams.s");
}

Profile parabolic_safety_factor(const RadialGrid& g, double q0, double qa) {
  return g.sample([&](double x) { return q0 + (qa - q0) * x * x; });
}

Profile parabolic_magnetic_shear(const RadialGrid& g, double q0, double qa) {
  return g.sample([&](double x) {
    const double q = q0 + (qa - q0) * x * x;
    return 2.0 * (qa - q0) * x * x / q;
  });
}

TransportParams tore_supra_like(const RadialGrid& g, double q0, double qa) {
  TransportParams p;
  p.q = parabolic_safety_factor(g, q0, qa);
  p.s = parabolic_magnetic_shear(g, q0, qa);
  return p;
}

Profile suppression_function(const TransportParams& params, const RadialGrid& g) {
  if (!(params.gamma_ITG > 0.0))
    throw InvalidArgument("suppression_function: gamma_ITG must be > 0");
  g.check(params.s, "suppression_function(s)");
  const double ratio = params.omega_ExB / params.gamma_ITG;
  const double flow = 1.0 / (1.0 + params.k * ratio * ratio);
  Profile fs(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double ds = params.s[i] - params.s_thres;
    fs[i] = flow / std::max(1.0, ds * ds);
  }
  return fs;
}

DerivedCoefficients derive_coefficients(const TransportParams& params, const RadialGrid& g) {
  params.validate(g);
  const Profile fs = suppression_function(params, g);
  DerivedCoefficients c;
  c.A = 2.0 / (3.0 * params.a * params.a);
  c.B = (8e-5 * params.R * params.L_Te / params.B_phi0) *
        (params.q.array().square() * fs.array()).matrix();
  c.C = (5e-6 / (params.B_phi0 * params.B_phi0)) * fs;
  return c;
}

Profile node_gradient(const RadialGrid& g, const Profile& T) {
  g.check(T, "node_gradient");
  const int n = g.size();
  const double h = g.spacing();
  Profile grad(n);
  grad[0] = 0.0;
  for (int i = 1; i < n - 1; ++i) grad[i] = (T[i + 1] - T[i - 1]) / (2.0 * h);
  grad[n - 1] = (T[n - 1] - T[n - 2]) / h;
  return grad;
}

Profile diffusivity(const DerivedCoefficients& coeffs, const RadialGrid& g, const Profile& T,
                    double chi_floor) {
  g.check(coeffs.B, "diffusivity(B)");
  g.check(coeffs.C, "diffusivity(C)");
  const Profile grad = node_gradient(g, T);
  Profile chi(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double root = std::sqrt(std::max(T[i], 0.0));
    const double raw = coeffs.A * (coeffs.B[i] + coeffs.C[i] * root) * std::abs(grad[i]);
    chi[i] = std::max(chi_floor, raw);
  }
  return chi;
}

}  // namespace rhc
