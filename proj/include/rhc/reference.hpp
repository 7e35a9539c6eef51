#pragma once

#include <string>

#include "rhc/grid.hpp"

namespace rhc {

/// Exponential interpolation from T0 to Tbar:
///   That(x, t) = T0(x) + (1 - exp(-mu t / tf)) (Tbar(x) - T0(x)).
struct ReferenceTrajectory {
  Profile T0;
  Profile Tbar;
  double mu = 5.85;
  double tf = 1.0;

  /// Both profiles on `g`, non-negative, zero at x = 1; mu, tf > 0.
  void validate(const RadialGrid& g) const;
};

Profile reference_at(const ReferenceTrajectory& ref, double t);

/// d That / dt = (mu / tf) exp(-mu t / tf) (Tbar - T0).
Profile reference_rate(const ReferenceTrajectory& ref, double t);

/// Shape parameters of the built-in synthetic profiles (keV):
///   T0(x)   = t0_core (1 - x^2)
///   Tbar(x) = tbar_core (1 - x^2)^tbar_exponent (1 + pedestal_height * bump(x))
/// with bump a Gaussian of the given centre and width.
struct SyntheticProfiles {
  double t0_core = 1.0;
  double tbar_core = 4.0;
  double tbar_exponent = 2.0;
  double pedestal_height = 0.3;
  double pedestal_center = 0.9;
  double pedestal_width = 0.05;

  void validate() const;
  Profile initial(const RadialGrid& g) const;
  Profile target(const RadialGrid& g) const;
};

ReferenceTrajectory make_reference(const RadialGrid& g, const SyntheticProfiles& shapes,
                                   double mu = 5.85, double tf = 1.0);

/// Reads an `x,value` CSV (optional header line) and interpolates it
/// linearly onto the grid. The samples must cover [0, 1].
Profile load_profile_csv(const std::string& path, const RadialGrid& g);

}  // namespace rhc
