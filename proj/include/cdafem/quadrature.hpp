#pragma once

#include <Eigen/Core>

namespace cdafem {

/// Quadrature rule on the reference triangle (vertices (0,0),(1,0),(0,1)),
/// points stored as barycentric triples, weights summing to 1/2.
struct QuadratureRule {
  Eigen::Matrix<double, Eigen::Dynamic, 3> points;
  Eigen::VectorXd weights;
  int exactness = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

/// Smallest available rule integrating polynomials of total degree
/// `min_exactness` exactly. Throws std::invalid_argument above degree 10.
const QuadratureRule& quadrature(int min_exactness);

}  // namespace cdafem
