#pragma once

#include <Eigen/Core>

#include <array>
#include <functional>
#include <map>
#include <vector>

#include "cdafem/mesh.hpp"
#include "cdafem/quadrature.hpp"

namespace cdafem {

using ScalarFn = std::function<double(const Eigen::Vector2d&, double)>;
using VectorFn = std::function<Eigen::Vector2d(const Eigen::Vector2d&, double)>;
using GradFn = std::function<Eigen::Vector2d(const Eigen::Vector2d&, double)>;
/// Gradient of a 2-vector field: rows are components, columns x/y derivatives.
using JacFn = std::function<Eigen::Matrix2d(const Eigen::Vector2d&, double)>;

/// Basis values and reference gradients at one barycentric point.
struct BasisEval {
  Eigen::VectorXd values;                              // one per local DOF
  Eigen::Matrix<double, Eigen::Dynamic, 2> ref_grads;  // d/d(xi,eta)
};

/// Lagrange basis of the given degree at a barycentric point (sums to 1).
BasisEval eval_basis(int degree, const Eigen::Vector3d& bary);

/// Basis evaluated at every point of a quadrature rule (cached).
struct BasisTable {
  Eigen::MatrixXd values;                                   // (n_qp, n_local)
  std::vector<Eigen::Matrix<double, Eigen::Dynamic, 2>> ref_grads;  // per qp
};
const BasisTable& basis_table(int degree, const QuadratureRule& rule);

/// Affine geometry of one cell.
struct CellGeom {
  Eigen::Vector2d p0;
  Eigen::Matrix2d J;      // columns p1-p0, p2-p0
  Eigen::Matrix2d JinvT;
  double detJ;            // 2 * signed area

  Eigen::Vector2d point(const Eigen::Vector3d& bary) const {
    return p0 + J * Eigen::Vector2d(bary(1), bary(2));
  }
};
CellGeom cell_geometry(const Mesh& m, int cell);

/// Continuous Lagrange space (P1 or P2), scalar or 2-component vector.
/// Vector DOFs are component-blocked: all x-DOFs then all y-DOFs.
/// Periodic vertex pairs are merged into single DOF classes.
/// Immutable after construction; evaluation is pure and reentrant.
struct FeSpace {
  const Mesh* mesh = nullptr;
  int degree = 1;
  int components = 1;
  int n_scalar_dofs = 0;
  int n_dofs = 0;
  int dofs_per_cell = 3;                       // scalar local DOFs (3 or 6)
  std::vector<std::array<int, 6>> cell_dofs;   // scalar global DOFs per cell
  std::vector<Eigen::Vector2d> dof_coords;     // scalar DOF coordinates
  std::map<BoundaryMarker, std::vector<int>> boundary_dofs;  // scalar DOF ids
  std::vector<int> dof_owner_cell;             // one cell containing each DOF
  std::vector<int> vertex_class;               // vertex id -> vertex DOF id

  int vdof(int scalar_dof, int comp) const { return comp * n_scalar_dofs + scalar_dof; }
  std::vector<int> marked_dofs(const std::vector<BoundaryMarker>& markers) const;
};

FeSpace build_space(const Mesh& m, int degree, int components);

/// Nodal interpolation: coefficient j equals f(dof_coords[j], t).
/// Throws on a non-finite function value.
Eigen::VectorXd interpolate_nodal(const ScalarFn& f, const FeSpace& space, double t);
Eigen::VectorXd interpolate_nodal(const VectorFn& f, const FeSpace& space, double t);

/// A finite element function: a space together with coefficients.
struct FeFunction {
  const FeSpace* space = nullptr;
  Eigen::VectorXd coeffs;

  double value(int cell, const BasisEval& basis) const;             // scalar
  Eigen::Vector2d vector_value(int cell, const BasisEval& basis) const;
  /// Point evaluation at a DOF coordinate (scalar spaces).
  double value_at_dof(int dof) const;
};

}  // namespace cdafem
