#include "rhc/grid.hpp"

#include <cmath>
#include <string>

#include "rhc/errors.hpp"

namespace rhc {

RadialGrid::RadialGrid(int n) {
  if (n < 3) throw InvalidArgument("RadialGrid: need at least 3 nodes, got " + std::to_string(n));
  h_ = 1.0 / static_cast<double>(n - 1);
  nodes_.resize(n);
  weights_.resize(n);
  for (int i = 0; i < n; ++i) nodes_[i] = static_cast<double>(i) * h_;
  nodes_[n - 1] = 1.0;

  weights_[0] = h_ * h_ / 8.0;
  for (int i = 1; i < n - 1; ++i) weights_[i] = nodes_[i] * h_;
  weights_[n - 1] = h_ / 2.0 - h_ * h_ / 8.0;
}

void RadialGrid::check(const Profile& p, const char* what) const {
  if (p.size() != size())
    throw InvalidArgument(std::string(what) + ": profile has " + std::to_string(p.size()) +
                          " entries, grid has " + std::to_string(size()));
  if (!p.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite entry");
}

RadialGrid make_grid(int n) { return RadialGrid(n); }

double weighted_inner_product(const RadialGrid& g, const Profile& f, const Profile& h,
                              const Profile& w) {
  g.check(f, "weighted_inner_product(f)");
  g.check(h, "weighted_inner_product(h)");
  g.check(w, "weighted_inner_product(w)");
  return (g.weights().array() * f.array() * h.array() * w.array()).sum();
}

double weighted_inner_product(const RadialGrid& g, const Profile& f, const Profile& h) {
  g.check(f, "weighted_inner_product(f)");
  g.check(h, "weighted_inner_product(h)");
  return (g.weights().array() * f.array() * h.array()).sum();
}

double l2x_norm(const RadialGrid& g, const Profile& f) {
  return std::sqrt(weighted_inner_product(g, f, f));
}

namespace {

void check_diffusivity(const RadialGrid& g, const Profile& chi, const char* what) {
  g.check(chi, what);
  if ((chi.array() < 0.0).any())
    throw InvalidArgument(std::string(what) + ": negative diffusivity");
}

}  // namespace

Eigen::VectorXd face_conductances(const RadialGrid& g, const Profile& chi) {
  check_diffusivity(g, chi, "face_conductances");
  const int n = g.size();
  Eigen::VectorXd c(n - 1);
  for (int i = 0; i < n - 1; ++i)
    c[i] = g.face(i) * 0.5 * (chi[i] + chi[i + 1]) / g.spacing();
  return c;
}

Profile apply_cylindrical_operator(const RadialGrid& g, const Profile& chi, const Profile& v) {
  check_diffusivity(g, chi, "apply_cylindrical_operator(chi)");
  g.check(v, "apply_cylindrical_operator(v)");
  const int n = g.size();
  const Eigen::VectorXd c = face_conductances(g, chi);
  const Eigen::VectorXd& w = g.weights();

  Profile out = Profile::Zero(n);
  for (int i = 0; i < n - 1; ++i) {
    const double flux = c[i] * (v[i + 1] - v[i]);
    out[i] += flux;
    out[i + 1] -= flux;
  }
  for (int i = 0; i < n - 1; ++i) out[i] /= w[i];
  out[n - 1] = 0.0;
  return out;
}

double sobolev_seminorm_sq(const RadialGrid& g, const Profile& chi, const Profile& v) {
  g.check(v, "sobolev_seminorm_sq(v)");
  const Eigen::VectorXd c = face_conductances(g, chi);
  double s = 0.0;
  for (int i = 0; i < g.size() - 1; ++i) {
    const double dv = v[i + 1] - v[i];
    s += c[i] * dv * dv;
  }
  return s;
}

TridiagonalSystem assemble_shifted_stiffness(const RadialGrid& g, const Profile& chi,
                                             const Eigen::VectorXd& mass) {
  const int m = g.size() - 1;
  if (mass.size() != m)
    throw InvalidArgument("assemble_shifted_stiffness: mass must cover the n-1 free nodes");
  const Eigen::VectorXd c = face_conductances(g, chi);

  TridiagonalSystem sys;
  sys.lower = Eigen::VectorXd::Zero(m);
  sys.upper = Eigen::VectorXd::Zero(m);
  sys.diag = mass;
  // Face i joins nodes i and i+1; face m-1 joins the last free node to the
  // eliminated Dirichlet node and contributes to the diagonal only.
  for (int i = 0; i < m; ++i) {
    sys.diag[i] += c[i];
    if (i > 0) sys.diag[i] += c[i - 1];
    if (i + 1 < m) {
      sys.upper[i] = -c[i];
      sys.lower[i + 1] = -c[i];
    }
  }
  return sys;
}

DirichletMode first_dirichlet_mode(const RadialGrid& g, const Profile& chi, int max_iterations,
                                   double tolerance) {
  check_diffusivity(g, chi, "first_dirichlet_eigenvalue");
  const int n = g.size();
  const int m = n - 1;
  const Eigen::VectorXd mass =
      (g.weights().head(m).array() * chi.head(m).array()).matrix();
  if ((mass.array() <= 0.0).any())
    throw InvalidArgument("first_dirichlet_eigenvalue: diffusivity must be positive off x = 1");

  TridiagonalSystem stiffness = assemble_shifted_stiffness(g, chi, Eigen::VectorXd::Zero(m));
  const auto m_norm = [&](const Eigen::VectorXd& v) {
    return std::sqrt((mass.array() * v.array().square()).sum());
  };

  // 1 - x^2 is positive, as is the first mode, so it is never orthogonal to it.
  Eigen::VectorXd v = (1.0 - g.nodes().head(m).array().square()).matrix();
  v /= m_norm(v);
  double lambda = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    stiffness.rhs = (mass.array() * v.array()).matrix();
    Eigen::VectorXd z = tridiagonal_solve(stiffness);
    z /= m_norm(z);
    const Eigen::VectorXd kz = stiffness.multiply(z);
    lambda = z.dot(kz);  // Rayleigh quotient, z has unit M-norm
    const Eigen::VectorXd r = kz - lambda * (mass.array() * z.array()).matrix();
    const double residual = std::sqrt((r.array().square() / mass.array()).sum());
    v = z;
    if (residual <= tolerance * lambda) {
      DirichletMode mode;
      mode.eigenvalue = lambda;
      mode.eigenfunction = Profile::Zero(n);
      mode.eigenfunction.head(m) = v;
      if (mode.eigenfunction[0] < 0.0) mode.eigenfunction = -mode.eigenfunction;
      mode.iterations = it;
      return mode;
    }
  }
  throw NumericFailure("first_dirichlet_eigenvalue: inverse iteration did not converge after " +
                           std::to_string(max_iterations) + " iterations",
                       max_iterations);
}

double first_dirichlet_eigenvalue(const RadialGrid& g, const Profile& chi) {
  return first_dirichlet_mode(g, chi).eigenvalue;
}

}  // namespace rhc
