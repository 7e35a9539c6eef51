#pragma once

#include "rhc/grid.hpp"

namespace rhc {

/// Coefficients of the reduced Bohm/gyro-Bohm electron heat diffusivity.
/// Temperatures are in keV, lengths in metres, fields in tesla.
struct TransportParams {
  double a = 0.72;       // minor radius
  double R = 2.4;        // major radius
  double B_phi0 = 3.8;   // toroidal field
  Profile q;             // safety factor on the grid
  double k = 10.0;       // E x B suppression coefficient
  double omega_ExB = 1.0e5;
  double gamma_ITG = 5.0e3;
  Profile s;             // magnetic shear on the grid
  double s_thres = 0.2;
  double L_Te = 1.5;     // time-averaged edge gradient ratio
  double chi_floor = 1e-7;

  /// Throws InvalidArgument when a sign constraint or profile length fails.
  void validate(const RadialGrid& g) const;
};

/// chi = A (B(x) + C(x) sqrt(T)) |dT/dx|.
struct DerivedCoefficients {
  double A = 0.0;
  Profile B;
  Profile C;
};

/// q(x) = q0 + (qa - q0) x^2.
Profile parabolic_safety_factor(const RadialGrid& g, double q0, double qa);
/// s = (x / q) dq/dx for the parabolic q above.
Profile parabolic_magnetic_shear(const RadialGrid& g, double q0, double qa);

/// Defaults with a parabolic q from 1 on axis to 3.5 at the edge and strong
/// E x B shear suppression, so that the diffusivity stays small compared to
/// the control authority.
TransportParams tore_supra_like(const RadialGrid& g, double q0 = 1.0, double qa = 3.5);

/// f_s = [1 + k (omega_ExB / gamma_ITG)^2]^{-1} [max(1, (s - s_thres)^2)]^{-1}, in (0, 1].
Profile suppression_function(const TransportParams& params, const RadialGrid& g);

DerivedCoefficients derive_coefficients(const TransportParams& params, const RadialGrid& g);

/// dT/dx at the nodes: zero on the axis by symmetry, central differences of
/// the face gradients inside, the last face gradient at x = 1.
Profile node_gradient(const RadialGrid& g, const Profile& T);

/// max(chi_floor, A (B + C sqrt(max(T, 0))) |dT/dx|).
Profile diffusivity(const DerivedCoefficients& coeffs, const RadialGrid& g, const Profile& T,
                    double chi_floor);

}  // namespace rhc
