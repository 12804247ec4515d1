#pragma once

#include <Eigen/Core>

#include "cdafem/fe_space.hpp"

namespace cdafem {
namespace problems {

/// Manufactured heat solution u = sin(t + 2*pi*x + pi*y) with the forcing
/// f = u_t - kappa * Laplace(u) it induces.
struct HeatManufactured {
  double kappa = 1.0;
  double value(const Eigen::Vector2d& p, double t) const;
  Eigen::Vector2d gradient(const Eigen::Vector2d& p, double t) const;
  double forcing(const Eigen::Vector2d& p, double t) const;

  ScalarFn value_fn() const;
  GradFn gradient_fn() const;
  ScalarFn forcing_fn() const;
};

/// u = sin(pi*x) sin(pi*y), zero on the unit-square boundary.
double poisson_sin_value(const Eigen::Vector2d& p, double t = 0);
Eigen::Vector2d poisson_sin_gradient(const Eigen::Vector2d& p, double t = 0);

/// Divergence-free curl of psi = sin^2(pi*x) sin^2(pi*y); vanishes on the
/// unit-square boundary.
Eigen::Vector2d stokes_curl_value(const Eigen::Vector2d& p, double t = 0);
Eigen::Matrix2d stokes_curl_jacobian(const Eigen::Vector2d& p, double t = 0);

/// Kelvin-Helmholtz initial condition: shear layer of vorticity thickness
/// delta0 = 1/28 with a small two-mode perturbation (closed-form derivatives).
Eigen::Vector2d kh_initial(double x, double y);
inline Eigen::Vector2d kh_initial(const Eigen::Vector2d& p, double = 0) {
  return kh_initial(p.x(), p.y());
}

/// Contaminant blobs: c = 3 inside the radius-0.1 circles centered at
/// (1, 1.5) and (5, -0.5), zero elsewhere.
double transport_blobs(const Eigen::Vector2d& p, double t = 0);

}  // namespace problems
}  // namespace cdafem
