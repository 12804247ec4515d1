#pragma once

#include <Eigen/Core>
#include <Eigen/Sparse>

#include <vector>

#include "cdafem/assembly.hpp"
#include "cdafem/fe_space.hpp"

namespace cdafem {

/// Coarse observation grid of nominal width H over the mesh's bounding box.
/// Cell boundaries snap to the mesh's generating lattice so every element
/// lies in exactly one cell (elements are binned by centroid where the
/// lattice was sheared); cells that catch no element are clipped away.
struct CoarseGrid {
  double H = 0;                    // nominal coarse width
  std::vector<double> xb, yb;      // snapped cell boundaries
  struct Cell {
    std::vector<int> elements;
    double measure = 0;
  };
  std::vector<Cell> cells;
  std::vector<int> vertex_nodes;   // fine-mesh vertex ids at grid intersections

  int n_cells() const { return static_cast<int>(cells.size()); }
};

/// Throws std::invalid_argument when H cannot be realized on the mesh
/// lattice (H below the lattice width, or no lattice metadata).
CoarseGrid build_coarse_grid(const Mesh& m, double H);

enum class NudgingMode { galerkin, lumped, direct };

/// Observation operator I_H: the L2 projection onto piecewise constants
/// over the coarse cells, applied componentwise on vector spaces.
/// Immutable after build; all applications are pure and reentrant.
struct ObservationOperator {
  const FeSpace* space = nullptr;
  CoarseGrid grid;
  SpMat C;             // (components*n_cells) x n_dofs, C[c,j] = integral of phi_j over cell c
  Eigen::VectorXd D;   // per-row cell measure
  double mu = 0;       // nudging parameter; may be +infinity (direct mode)
  NudgingMode mode = NudgingMode::galerkin;

  int n_rows() const { return static_cast<int>(D.size()); }

  /// Per-cell averages D^{-1} C v (componentwise for vector spaces).
  Eigen::VectorXd apply_IH(const Eigen::VectorXd& v) const;

  /// N = C^T D^{-1} C, symmetric PSD with rank <= number of rows.
  SpMat nudging_matrix() const;
};

ObservationOperator build_observation(const FeSpace& space, double H, double mu,
                                      NudgingMode mode);

struct NudgingContribution {
  SpMat matrix;         // mu * C^T D^{-1} C  (diagonal in lumped mode)
  Eigen::VectorXd rhs;  // mu * C^T * truth_averages
};

/// Throws std::invalid_argument when called with mu = infinity (use
/// direct_enforce for that).
NudgingContribution nudging_contribution(const ObservationOperator& obs,
                                         const Eigen::VectorXd& truth_averages);

/// mu = infinity: constrain the fine DOFs at the coarse-grid vertex nodes to
/// the truth values there (Dirichlet-style rows). Scalar analytic truth:
void direct_enforce(LinearSystem& sys, const ObservationOperator& obs, const ScalarFn& truth,
                    double t);
void direct_enforce(LinearSystem& sys, const ObservationOperator& obs, const VectorFn& truth,
                    double t);
/// Discrete truth (DNS coefficients on the same space).
void direct_enforce(LinearSystem& sys, const ObservationOperator& obs,
                    const Eigen::VectorXd& truth_coeffs);

/// Exact cell averages of an analytic field, in apply_IH layout.
Eigen::VectorXd cell_averages(const ObservationOperator& obs, const ScalarFn& u, double t);
Eigen::VectorXd cell_averages(const ObservationOperator& obs, const VectorFn& u, double t);

struct BatteryFunction {
  ScalarFn value;
  GradFn gradient;
};

/// Empirical interpolation constant: max over the battery of
/// ||I_H v - v|| / (H ||grad v||). Throws on a zero-gradient member.
double estimate_interp_constant(const FeSpace& space, const CoarseGrid& grid,
                                const std::vector<BatteryFunction>& battery);
double estimate_interp_constant(const FeSpace& space, const CoarseGrid& grid);

}  // namespace cdafem
