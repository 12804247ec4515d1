#pragma once

#include <Eigen/Core>

#include "cdafem/fe_space.hpp"
#include "cdafem/linalg.hpp"

namespace cdafem {

struct ErrorNorms {
  double l2 = 0;
  double h1_semi = 0;
};

/// Error of a discrete field against an analytic truth, by elementwise
/// quadrature of exactness 2k+2.
ErrorNorms error_norms(const FeSpace& space, const Eigen::VectorXd& w, const ScalarFn& u,
                       const GradFn& grad_u, double t);
ErrorNorms error_norms(const FeSpace& space, const Eigen::VectorXd& w, const VectorFn& u,
                       const JacFn& grad_u, double t);

/// Error against a discrete truth on the same space: sqrt(d'Md), sqrt(d'Ad)
/// with d the coefficient difference and A the unit-coefficient stiffness.
ErrorNorms error_norms_discrete(const Eigen::VectorXd& w, const Eigen::VectorXd& truth,
                                const SpMat& mass, const SpMat& stiffness_unit);

/// L2 norm of a discrete field (mass-matrix norm).
double l2_norm_discrete(const Eigen::VectorXd& w, const SpMat& mass);

}  // namespace cdafem
