#include "cdafem/problems.hpp"

#include <cmath>
#include <numbers>

namespace cdafem {
namespace problems {

using std::numbers::pi;

double HeatManufactured::value(const Eigen::Vector2d& p, double t) const {
  return std::sin(t + 2 * pi * p.x() + pi * p.y());
}

Eigen::Vector2d HeatManufactured::gradient(const Eigen::Vector2d& p, double t) const {
  const double c = std::cos(t + 2 * pi * p.x() + pi * p.y());
  return {2 * pi * c, pi * c};
}

double HeatManufactured::forcing(const Eigen::Vector2d& p, double t) const {
  const double phase = t + 2 * pi * p.x() + pi * p.y();
  // u_t - kappa * Laplace(u) with Laplace(u) = -5 pi^2 u
  return std::cos(phase) + kappa * 5 * pi * pi * std::sin(phase);
}

ScalarFn HeatManufactured::value_fn() const {
  return [*this](const Eigen::Vector2d& p, double t) { return value(p, t); };
}
GradFn HeatManufactured::gradient_fn() const {
  return [*this](const Eigen::Vector2d& p, double t) { return gradient(p, t); };
}
ScalarFn HeatManufactured::forcing_fn() const {
  return [*this](const Eigen::Vector2d& p, double t) { return forcing(p, t); };
}

double poisson_sin_value(const Eigen::Vector2d& p, double) {
  return std::sin(pi * p.x()) * std::sin(pi * p.y());
}

Eigen::Vector2d poisson_sin_gradient(const Eigen::Vector2d& p, double) {
  return {pi * std::cos(pi * p.x()) * std::sin(pi * p.y()),
          pi * std::sin(pi * p.x()) * std::cos(pi * p.y())};
}

Eigen::Vector2d stokes_curl_value(const Eigen::Vector2d& p, double) {
  const double sx = std::sin(pi * p.x()), sy = std::sin(pi * p.y());
  return {pi * sx * sx * std::sin(2 * pi * p.y()), -pi * std::sin(2 * pi * p.x()) * sy * sy};
}

Eigen::Matrix2d stokes_curl_jacobian(const Eigen::Vector2d& p, double) {
  const double sx = std::sin(pi * p.x()), sy = std::sin(pi * p.y());
  const double s2x = std::sin(2 * pi * p.x()), s2y = std::sin(2 * pi * p.y());
  const double c2x = std::cos(2 * pi * p.x()), c2y = std::cos(2 * pi * p.y());
  Eigen::Matrix2d j;
  j(0, 0) = pi * pi * s2x * s2y;
  j(0, 1) = 2 * pi * pi * sx * sx * c2y;
  j(1, 0) = -2 * pi * pi * c2x * sy * sy;
  j(1, 1) = -pi * pi * s2x * s2y;
  return j;
}

Eigen::Vector2d kh_initial(double x, double y) {
  constexpr double u_inf = 1.0;
  constexpr double delta0 = 1.0 / 28.0;
  constexpr double cn = 1e-3;
  const double gauss = u_inf * std::exp(-(y - 0.5) * (y - 0.5) / (delta0 * delta0));
  const double modes = std::cos(8 * pi * x) + std::cos(20 * pi * x);
  const double dpsi_dy = gauss * (-2 * (y - 0.5) / (delta0 * delta0)) * modes;
  const double dpsi_dx = gauss * (-8 * pi * std::sin(8 * pi * x) - 20 * pi * std::sin(20 * pi * x));
  return {u_inf * std::tanh((2 * y - 1) / delta0) + cn * dpsi_dy, -cn * dpsi_dx};
}

double transport_blobs(const Eigen::Vector2d& p, double) {
  const Eigen::Vector2d c1(1.0, 1.5), c2(5.0, -0.5);
  constexpr double r = 0.1;
  if ((p - c1).squaredNorm() <= r * r || (p - c2).squaredNorm() <= r * r) return 3.0;
  return 0.0;
}

}  // namespace problems
}  // namespace cdafem
