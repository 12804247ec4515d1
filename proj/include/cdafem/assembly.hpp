#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>

#include <map>
#include <vector>

#include "cdafem/fe_space.hpp"
#include "cdafem/linalg.hpp"

namespace cdafem {

/// Mass matrix: (i,j) = integral of phi_i phi_j. Symmetric positive definite.
/// Vector spaces get the component-blocked diagonal expansion.
SpMat mass_matrix(const FeSpace& space);

/// Stiffness matrix: (i,j) = coeff * integral of grad phi_i . grad phi_j.
SpMat stiffness_matrix(const FeSpace& space, double coeff);

/// Transport matrix on a scalar space: (i,j) = integral (U.grad phi_j) phi_i,
/// plus the skew correction 1/2 ((div U) phi_j, phi_i) when `skew` is set.
SpMat convection_matrix(const FeSpace& space, const FeFunction& velocity, bool skew);

/// Linearized, skew-symmetrized convection on a vector space with advecting
/// field `advecting` (coefficients in the same space): v' K v = 0 for all v.
SpMat nse_convection_matrix(const FeSpace& vspace, const Eigen::VectorXd& advecting);

/// Divergence coupling: (pressure-row i, velocity-col j) = integral q_i div phi_j.
SpMat divergence_matrix(const FeSpace& vspace, const FeSpace& pspace);

Eigen::VectorXd load_vector(const FeSpace& space, const ScalarFn& f, double t);
Eigen::VectorXd load_vector(const FeSpace& space, const VectorFn& f, double t);

/// Gradient load: entry i = coeff * integral of g . grad phi_i (elliptic
/// projection right-hand sides with an analytic gradient).
Eigen::VectorXd gradient_load_vector(const FeSpace& space, const GradFn& g, double t,
                                     double coeff);
/// Vector-space variant with a full Jacobian (rows are components).
Eigen::VectorXd gradient_load_vector(const FeSpace& space, const JacFn& g, double t,
                                     double coeff);

/// A square system plus the set of constrained DOFs with prescribed values.
struct LinearSystem {
  SpMat matrix;
  Eigen::VectorXd rhs;
  std::map<int, double> constrained_dofs;
};

/// Add Dirichlet constraints g(x, t) on all DOFs of the given markers.
/// Throws std::invalid_argument for a marker absent from the space.
void apply_dirichlet(LinearSystem& sys, const FeSpace& space,
                     const std::vector<BoundaryMarker>& markers, const ScalarFn& g, double t);

/// Vector-space variant; comp_mask bit 0 constrains the x component,
/// bit 1 the y component.
void apply_dirichlet(LinearSystem& sys, const FeSpace& space,
                     const std::vector<BoundaryMarker>& markers, const VectorFn& g, double t,
                     int comp_mask = 3);

/// Symmetric elimination of the recorded constraints: constrained rows and
/// columns become identity rows, known values are lifted into the remaining
/// rows' rhs, and the rhs holds the prescribed values. SPD blocks stay SPD.
void finalize_constraints(LinearSystem& sys);

/// Split of a constant operator into its eliminated matrix plus the coupling
/// block that lifts prescribed values into the rhs - the factorization of
/// matrix() can be reused across steps while constraint values change.
class ConstrainedOperator {
 public:
  ConstrainedOperator(const SpMat& A, const std::vector<int>& constrained_dofs);

  const SpMat& matrix() const { return matrix_; }

  /// rhs with values lifted: out = rhs - coupling * values, out[i] = values[i]
  /// on constrained DOFs. `values` is a full-size vector (entries at
  /// unconstrained DOFs are ignored).
  Eigen::VectorXd reduce_rhs(const Eigen::VectorXd& rhs, const Eigen::VectorXd& values) const;

  const std::vector<int>& constrained() const { return constrained_; }

 private:
  SpMat matrix_;
  SpMat coupling_;
  std::vector<int> constrained_;
};

}  // namespace cdafem
