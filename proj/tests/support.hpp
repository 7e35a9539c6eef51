#pragma once

// Independent dense reconstructions of the discrete operators, used as
// oracles. They are written from the definitions, not from the library code.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace oracle {

/// Exact \int x dx over [x_i - h/2, x_i + h/2] clipped to [0, 1].
inline Eigen::VectorXd control_volume_weights(int n) {
  const double h = 1.0 / (n - 1);
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) {
    const double a = std::max(0.0, i * h - 0.5 * h);
    const double b = std::min(1.0, i * h + 0.5 * h);
    w[i] = 0.5 * (b * b - a * a);
  }
  return w;
}

/// n x n matrix of (1/x)(x chi v')' in flux form; last row zero.
inline Eigen::MatrixXd dense_operator(const Eigen::VectorXd& chi) {
  const int n = static_cast<int>(chi.size());
  const double h = 1.0 / (n - 1);
  const Eigen::VectorXd w = control_volume_weights(n);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int f = 0; f < n - 1; ++f) {
    const double c = (f + 0.5) * h * 0.5 * (chi[f] + chi[f + 1]) / h;
    // flux F_f = c (v_{f+1} - v_f) leaves cell f and enters cell f + 1
    L(f, f + 1) += c / w[f];
    L(f, f) -= c / w[f];
    if (f + 1 < n - 1) {
      L(f + 1, f) += c / w[f + 1];
      L(f + 1, f + 1) -= c / w[f + 1];
    }
  }
  return L;
}

/// Stiffness on the n - 1 free nodes: K = W (-L) restricted.
inline Eigen::MatrixXd dense_stiffness(const Eigen::VectorXd& chi) {
  const int n = static_cast<int>(chi.size());
  const Eigen::VectorXd w = control_volume_weights(n);
  const Eigen::MatrixXd L = dense_operator(chi);
  return -(w.head(n - 1).asDiagonal() * L.topLeftCorner(n - 1, n - 1));
}

/// Smallest generalized eigenvalue of K v = lambda diag(w chi) v.
inline double dense_first_eigenvalue(const Eigen::VectorXd& chi) {
  const int n = static_cast<int>(chi.size());
  const Eigen::VectorXd w = control_volume_weights(n);
  const Eigen::MatrixXd K = dense_stiffness(chi);
  const Eigen::MatrixXd M = w.head(n - 1).cwiseProduct(chi.head(n - 1)).asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M);
  return es.eigenvalues().minCoeff();
}

inline double weighted_dot(const Eigen::VectorXd& f, const Eigen::VectorXd& g) {
  return (control_volume_weights(static_cast<int>(f.size())).array() * f.array() * g.array()).sum();
}

/// Random profile with a zero value at x = 1.
inline Eigen::VectorXd random_dirichlet(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  v[n - 1] = 0.0;
  return v;
}

inline Eigen::VectorXd random_positive(int n, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace oracle

#include "rhc/grid.hpp"
#include "rhc/solvers.hpp"

namespace oracle {

/// Max-norm error at tf of the state solver against T*(x, t) = e^{-t}(1 - x^2)
/// with unit diffusivity. The source e^{-t}(3 + x^2) makes T* exact; it is
/// sampled at the implicit end of each backward Euler step.
inline double mms_parabola_error(int n, int steps, double tf = 1.0) {
  const rhc::RadialGrid g(n);
  const rhc::Profile chi = g.constant(1.0);
  const rhc::TimeStepConfig cfg{tf / steps, 1.0};
  rhc::Profile T = g.sample([](double x) { return 1.0 - x * x; });
  for (int k = 0; k < steps; ++k) {
    const double t_next = tf * (k + 1) / steps;
    const rhc::Profile u = g.sample([&](double x) { return std::exp(-t_next) * (3.0 + x * x); });
    T = rhc::step_state(g, T, chi, u, cfg);
  }
  const rhc::Profile exact = g.sample([&](double x) { return std::exp(-tf) * (1.0 - x * x); });
  return (T - exact).cwiseAbs().maxCoeff();
}

/// Same study for T*(x, t) = e^{-t} cos(pi x / 2), Crank-Nicolson with the
/// source at mid-step. Its spatial error is not zero, unlike the parabola.
inline double mms_cosine_error(int n, int steps, double tf = 0.5) {
  const double k = 0.5 * M_PI;
  const rhc::RadialGrid g(n);
  const rhc::Profile chi = g.constant(1.0);
  const rhc::TimeStepConfig cfg{tf / steps, 0.5};
  auto source = [k](double x, double t) {
    const double lap = x == 0.0 ? -2.0 * k * k
                                : -k * k * std::cos(k * x) - k * std::sin(k * x) / x;
    return std::exp(-t) * (-std::cos(k * x) - lap);
  };
  rhc::Profile T = g.sample([k](double x) { return std::cos(k * x); });
  for (int s = 0; s < steps; ++s) {
    const double t_mid = tf * (s + 0.5) / steps;
    const rhc::Profile u = g.sample([&](double x) { return source(x, t_mid); });
    T = rhc::step_state(g, T, chi, u, cfg);
  }
  const rhc::Profile exact = g.sample([&](double x) { return std::exp(-tf) * std::cos(k * x); });
  return (T - exact).cwiseAbs().maxCoeff();
}

}  // namespace oracle
