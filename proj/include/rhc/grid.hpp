#pragma once

#include <Eigen/Dense>

#include "rhc/tridiagonal.hpp"

namespace rhc {

/// Samples of a field on the nodes of a RadialGrid.
using Profile = Eigen::VectorXd;

/// Uniform mesh on the normalized radius [0, 1].
///
/// Each node owns the control volume [x_i - h/2, x_i + h/2] clipped to [0, 1],
/// and its weight is the exact integral of x over that volume. The weights
/// therefore integrate x dx exactly (they sum to 1/2) and make the flux-form
/// operator below symmetric in the weighted inner product.
class RadialGrid {
 public:
  explicit RadialGrid(int n);

  int size() const { return static_cast<int>(nodes_.size()); }
  double spacing() const { return h_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double node(int i) const { return nodes_[i]; }
  double face(int i) const { return (static_cast<double>(i) + 0.5) * h_; }  // x_{i+1/2}

  Profile zeros() const { return Profile::Zero(size()); }
  Profile constant(double value) const { return Profile::Constant(size(), value); }

  template <class F>
  Profile sample(F&& f) const {
    Profile p(size());
    for (int i = 0; i < size(); ++i) p[i] = f(nodes_[i]);
    return p;
  }

  /// Throws InvalidArgument unless `p` has one finite entry per node.
  void check(const Profile& p, const char* what) const;

 private:
  double h_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd weights_;
};

RadialGrid make_grid(int n);

/// Quadrature of \int_0^1 f h w x dx.
double weighted_inner_product(const RadialGrid& g, const Profile& f, const Profile& h,
                              const Profile& w);
/// Same with w = 1.
double weighted_inner_product(const RadialGrid& g, const Profile& f, const Profile& h);

/// L^2(x dx) norm.
double l2x_norm(const RadialGrid& g, const Profile& f);

/// x_{i+1/2} chi_{i+1/2} / h for each of the n-1 faces; face diffusivity is
/// the arithmetic mean of the adjacent nodes.
Eigen::VectorXd face_conductances(const RadialGrid& g, const Profile& chi);

/// (1/x) d/dx (x chi dv/dx) in flux form. The axis row uses the symmetry
/// limit (zero flux through x = 0) and the Dirichlet row at x = 1 is
/// returned as 0.
Profile apply_cylindrical_operator(const RadialGrid& g, const Profile& chi, const Profile& v);

/// \int_0^1 chi (dv/dx)^2 x dx with face-centred gradients. For v(1) = 0 this
/// equals -<L v, v> exactly.
double sobolev_seminorm_sq(const RadialGrid& g, const Profile& chi, const Profile& v);

/// diag(mass) + K on the n-1 free nodes, where K is the stiffness matrix
/// of -L scaled by the node weights (so W (-L) = K). The x = 1 unknown is
/// eliminated. `mass` has length n-1. The rhs is left empty.
TridiagonalSystem assemble_shifted_stiffness(const RadialGrid& g, const Profile& chi,
                                             const Eigen::VectorXd& mass);

struct DirichletMode {
  double eigenvalue = 0.0;
  Profile eigenfunction;  // zero at x = 1, unit L^2_{x chi} norm, positive
  int iterations = 0;
};

/// Smallest eigenvalue of the weighted Rayleigh quotient
///   |v|^2_{H^1_{x chi}} / ||v||^2_{L^2_{x chi}},  v(1) = 0,
/// by inverse iteration on the discrete operator. Stops when the residual
/// ||K v - lambda M v||_{M^{-1}} drops below tolerance * lambda; the eigenvalue
/// error is then of order tolerance^2.
DirichletMode first_dirichlet_mode(const RadialGrid& g, const Profile& chi,
                                   int max_iterations = 10000, double tolerance = 1e-9);

double first_dirichlet_eigenvalue(const RadialGrid& g, const Profile& chi);

}  // namespace rhc
