#include "rhc/reference.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "rhc/errors.hpp"

namespace rhc {

namespace {

double checked_time(const ReferenceTrajectory& ref, double t, const char* what) {
  const double slack = 1e-12 * ref.tf;
  if (!(t >= -slack && t <= ref.tf + slack))
    throw InvalidArgument(std::string(what) + ": t = " + std::to_string(t) +
                          " outside [0, tf]");
  return std::clamp(t, 0.0, ref.tf);
}

}  // namespace

void ReferenceTrajectory::validate(const RadialGrid& g) const {
  g.check(T0, "ReferenceTrajectory.T0");
  g.check(Tbar, "ReferenceTrajectory.Tbar");
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("ReferenceTrajectory: mu must be > 0");
  if (!(tf > 0.0) || !std::isfinite(tf)) throw InvalidArgument("ReferenceTrajectory: tf must be > 0");
  if ((T0.array() < 0.0).any() || (Tbar.array() < 0.0).any())
    throw InvalidArgument("ReferenceTrajectory: profiles must be non-negative");
  const int last = g.size() - 1;
  if (T0[last] != 0.0 || Tbar[last] != 0.0)
    throw InvalidArgument("ReferenceTrajectory: profiles must vanish at x = 1");
}

Profile reference_at(const ReferenceTrajectory& ref, double t) {
  t = checked_time(ref, t, "reference_at");
  const double ramp = -std::expm1(-ref.mu * t / ref.tf);
  return ref.T0 + ramp * (ref.Tbar - ref.T0);
}

Profile reference_rate(const ReferenceTrajectory& ref, double t) {
  t = checked_time(ref, t, "reference_rate");
  const double factor = ref.mu / ref.tf * std::exp(-ref.mu * t / ref.tf);
  return factor * (ref.Tbar - ref.T0);
}

void SyntheticProfiles::validate() const {
  if (!(t0_core >= 0.0) || !(tbar_core >= 0.0))
    throw InvalidArgument("SyntheticProfiles: core temperatures must be >= 0");
  if (!(tbar_exponent >= 1.0))
    throw InvalidArgument("SyntheticProfiles: tbar_exponent must be >= 1");
  if (!(pedestal_height >= 0.0)) throw InvalidArgument("SyntheticProfiles: pedestal_height must be >= 0");
  if (!(pedestal_width > 0.0)) throw InvalidArgument("SyntheticProfiles: pedestal_width must be > 0");
  if (!std::isfinite(pedestal_center)) throw InvalidArgument("SyntheticProfiles: pedestal_center");
}

Profile SyntheticProfiles::initial(const RadialGrid& g) const {
  Profile p = g.sample([&](double x) { return t0_core * (1.0 - x * x); });
  p[g.size() - 1] = 0.0;
  return p;
}

Profile SyntheticProfiles::target(const RadialGrid& g) const {
  Profile p = g.sample([&](double x) {
    const double z = (x - pedestal_center) / pedestal_width;
    const double bump = std::exp(-z * z);
    return tbar_core * std::pow(1.0 - x * x, tbar_exponent) * (1.0 + pedestal_height * bump);
  });
  p[g.size() - 1] = 0.0;
  return p;
}

ReferenceTrajectory make_reference(const RadialGrid& g, const SyntheticProfiles& shapes, double mu,
                                   double tf) {
  shapes.validate();
  ReferenceTrajectory ref{shapes.initial(g), shapes.target(g), mu, tf};
  ref.validate(g);
  return ref;
}

Profile load_profile_csv(const std::string& path, const RadialGrid& g) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("load_profile_csv: cannot open " + path);

  std::vector<std::pair<double, double>> samples;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double x = 0.0;
    double v = 0.0;
    if (!(fields >> x >> v)) {
      if (samples.empty()) continue;  // header
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected 'x,value'");
    }
    samples.emplace_back(x, v);
  }
  if (samples.size() < 2) throw InvalidArgument("load_profile_csv: need at least two samples in " + path);
  std::sort(samples.begin(), samples.end());
  if (samples.front().first > 1e-12 || samples.back().first < 1.0 - 1e-12)
    throw InvalidArgument("load_profile_csv: samples must cover [0, 1] in " + path);

  Profile p(g.size());
  std::size_t j = 0;
  for (int i = 0; i < g.size(); ++i) {
    const double x = g.node(i);
    while (j + 2 < samples.size() && samples[j + 1].first < x) ++j;
    const auto [x0, v0] = samples[j];
    const auto [x1, v1] = samples[j + 1];
    const double theta = x1 > x0 ? std::clamp((x - x0) / (x1 - x0), 0.0, 1.0) : 0.0;
    p[i] = v0 + theta * (v1 - v0);
  }
  const double edge_tol = 1e-12 * std::max(1.0, p.cwiseAbs().maxCoeff());
  if (std::abs(p[g.size() - 1]) > edge_tol)
    throw InvalidArgument("load_profile_csv: profile must vanish at x = 1 in " + path);
  p[g.size() - 1] = 0.0;
  return p;
}

}  // namespace rhc
