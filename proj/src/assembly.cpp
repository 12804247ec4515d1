#include "cdafem/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace cdafem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Expands a scalar operator to the component-blocked vector layout.
SpMat expand_blockdiag(const SpMat& s, int components) {
  if (components == 1) return s;
  const int n = static_cast<int>(s.rows());
  Triplets trip;
  trip.reserve(2 * s.nonZeros());
  for (int k = 0; k < s.outerSize(); ++k)
    for (SpMat::InnerIterator it(s, k); it; ++it)
      for (int c = 0; c < components; ++c)
        trip.emplace_back(static_cast<int>(it.row()) + c * n,
                          static_cast<int>(it.col()) + c * n, it.value());
  SpMat out(components * n, components * n);
  out.setFromTriplets(trip.begin(), trip.end());
  return out;
}

template <typename Kernel>
SpMat assemble_scalar(const FeSpace& space, int exactness, Kernel&& kernel) {
  const auto& rule = quadrature(exactness);
  const auto& table = basis_table(space.degree, rule);
  const int nl = space.dofs_per_cell;
  const int nc = static_cast<int>(space.mesh->cells.size());
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(nc) * nl * nl);
  Eigen::MatrixXd elem(nl, nl);
  Eigen::Matrix<double, Eigen::Dynamic, 2> grads(nl, 2);
  for (int c = 0; c < nc; ++c) {
    const CellGeom geom = cell_geometry(*space.mesh, c);
    elem.setZero();
    for (int q = 0; q < rule.size(); ++q) {
      grads = table.ref_grads[q] * geom.JinvT.transpose();
      kernel(c, q, geom, table.values.row(q), grads, rule.weights(q) * geom.detJ, elem);
    }
    const auto& dofs = space.cell_dofs[c];
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) trip.emplace_back(dofs[i], dofs[j], elem(i, j));
  }
  SpMat A(space.n_scalar_dofs, space.n_scalar_dofs);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

void check_same_mesh(const FeSpace& a, const FeSpace& b, const char* what) {
  if (a.mesh != b.mesh) throw std::invalid_argument(std::string(what) + ": incompatible meshes");
}

}  // namespace

SpMat mass_matrix(const FeSpace& space) {
  SpMat m = assemble_scalar(space, 2 * space.degree,
                            [](int, int, const CellGeom&, const auto& vals, const auto&,
                               double w, Eigen::MatrixXd& elem) {
                              elem.noalias() += w * (vals.transpose() * vals);
                            });
  return expand_blockdiag(m, space.components);
}

SpMat stiffness_matrix(const FeSpace& space, double coeff) {
  if (coeff <= 0) throw std::invalid_argument("stiffness_matrix: coeff must be positive");
  SpMat a = assemble_scalar(space, 2 * space.degree,
                            [coeff](int, int, const CellGeom&, const auto&, const auto& grads,
                                    double w, Eigen::MatrixXd& elem) {
                              elem.noalias() += coeff * w * (grads * grads.transpose());
                            });
  return expand_blockdiag(a, space.components);
}

SpMat convection_matrix(const FeSpace& space, const FeFunction& velocity, bool skew) {
  if (space.components != 1)
    throw std::invalid_argument("convection_matrix: scalar space expected");
  check_same_mesh(space, *velocity.space, "convection_matrix");
  const FeSpace& vs = *velocity.space;
  const auto& rule = quadrature(5);
  const auto& vtable = basis_table(vs.degree, rule);

  // velocity basis gradients are needed per cell for the div U term
  return assemble_scalar(
      space, 5,
      [&](int c, int q, const CellGeom& geom, const auto& vals, const auto& grads, double w,
          Eigen::MatrixXd& elem) {
        Eigen::Vector2d u = Eigen::Vector2d::Zero();
        double div_u = 0;
        const auto vgrads = (vtable.ref_grads[q] * geom.JinvT.transpose()).eval();
        for (int k = 0; k < vs.dofs_per_cell; ++k) {
          const int j = vs.cell_dofs[c][k];
          const double cx = velocity.coeffs(vs.vdof(j, 0));
          const double cy = velocity.coeffs(vs.vdof(j, 1));
          u.x() += cx * vtable.values(q, k);
          u.y() += cy * vtable.values(q, k);
          div_u += cx * vgrads(k, 0) + cy * vgrads(k, 1);
        }
        const Eigen::VectorXd adv = grads * u;  // (U . grad phi_j)
        for (int i = 0; i < elem.rows(); ++i)
          for (int j = 0; j < elem.cols(); ++j) {
            double v = adv(j) * vals(i);
            if (skew) v += 0.5 * div_u * vals(j) * vals(i);
            elem(i, j) += w * v;
          }
      });
}

SpMat nse_convection_matrix(const FeSpace& vspace, const Eigen::VectorXd& advecting) {
  if (vspace.components != 2)
    throw std::invalid_argument("nse_convection_matrix: vector space expected");
  if (advecting.size() != vspace.n_dofs)
    throw std::invalid_argument("nse_convection_matrix: dimension mismatch");
  SpMat k = assemble_scalar(
      vspace, 5,
      [&](int c, int q, const CellGeom&, const auto& vals, const auto& grads, double w,
          Eigen::MatrixXd& elem) {
        Eigen::Vector2d a = Eigen::Vector2d::Zero();
        for (int m = 0; m < vspace.dofs_per_cell; ++m) {
          const int j = vspace.cell_dofs[c][m];
          a.x() += advecting(vspace.vdof(j, 0)) * vals(m);
          a.y() += advecting(vspace.vdof(j, 1)) * vals(m);
        }
        const Eigen::VectorXd adv = grads * a;
        // skew form: 1/2 [ (a.grad w, v) - (a.grad v, w) ]
        for (int i = 0; i < elem.rows(); ++i)
          for (int j = 0; j < elem.cols(); ++j)
            elem(i, j) += 0.5 * w * (adv(j) * vals(i) - adv(i) * vals(j));
      });
  return expand_blockdiag(k, 2);
}

SpMat divergence_matrix(const FeSpace& vspace, const FeSpace& pspace) {
  check_same_mesh(vspace, pspace, "divergence_matrix");
  if (vspace.components != 2 || pspace.components != 1)
    throw std::invalid_argument("divergence_matrix: vector/scalar space pair expected");
  const auto& rule = quadrature(2 * vspace.degree);
  const auto& vtable = basis_table(vspace.degree, rule);
  const auto& ptable = basis_table(pspace.degree, rule);
  const int nc = static_cast<int>(vspace.mesh->cells.size());
  Triplets trip;
  trip.reserve(static_cast<std::size_t>(nc) * pspace.dofs_per_cell * vspace.dofs_per_cell * 2);
  for (int c = 0; c < nc; ++c) {
    const CellGeom geom = cell_geometry(*vspace.mesh, c);
    for (int q = 0; q < rule.size(); ++q) {
      const auto vgrads = (vtable.ref_grads[q] * geom.JinvT.transpose()).eval();
      const double w = rule.weights(q) * geom.detJ;
      for (int i = 0; i < pspace.dofs_per_cell; ++i) {
        const int pi = pspace.cell_dofs[c][i];
        const double qv = w * ptable.values(q, i);
        for (int j = 0; j < vspace.dofs_per_cell; ++j) {
          const int vj = vspace.cell_dofs[c][j];
          trip.emplace_back(pi, vspace.vdof(vj, 0), qv * vgrads(j, 0));
          trip.emplace_back(pi, vspace.vdof(vj, 1), qv * vgrads(j, 1));
        }
      }
    }
  }
  SpMat B(pspace.n_scalar_dofs, vspace.n_dofs);
  B.setFromTriplets(trip.begin(), trip.end());
  return B;
}

namespace {

template <typename F, typename Accum>
Eigen::VectorXd load_impl(const FeSpace& space, const F& f, double t, Accum&& accum) {
  const auto& rule = quadrature(2 * space.degree + 1);
  const auto& table = basis_table(space.degree, rule);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.n_dofs);
  const int nc = static_cast<int>(space.mesh->cells.size());
  for (int c = 0; c < nc; ++c) {
    const CellGeom geom = cell_geometry(*space.mesh, c);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d x = geom.point(rule.points.row(q).transpose());
      const double w = rule.weights(q) * geom.detJ;
      accum(b, space, c, f(x, t), table.values.row(q), w);
    }
  }
  return b;
}

}  // namespace

Eigen::VectorXd load_vector(const FeSpace& space, const ScalarFn& f, double t) {
  if (space.components != 1) throw std::invalid_argument("load_vector: scalar space expected");
  return load_impl(space, f, t,
                   [](Eigen::VectorXd& b, const FeSpace& s, int c, double fv, const auto& vals,
                      double w) {
                     if (!std::isfinite(fv))
                       throw std::domain_error("load_vector: non-finite f at quadrature point");
                     for (int i = 0; i < s.dofs_per_cell; ++i)
                       b(s.cell_dofs[c][i]) += w * fv * vals(i);
                   });
}

Eigen::VectorXd load_vector(const FeSpace& space, const VectorFn& f, double t) {
  if (space.components != 2) throw std::invalid_argument("load_vector: vector space expected");
  return load_impl(space, f, t,
                   [](Eigen::VectorXd& b, const FeSpace& s, int c, const Eigen::Vector2d& fv,
                      const auto& vals, double w) {
                     if (!fv.allFinite())
                       throw std::domain_error("load_vector: non-finite f at quadrature point");
                     for (int i = 0; i < s.dofs_per_cell; ++i) {
                       const int j = s.cell_dofs[c][i];
                       b(s.vdof(j, 0)) += w * fv.x() * vals(i);
                       b(s.vdof(j, 1)) += w * fv.y() * vals(i);
                     }
                   });
}

namespace {

template <typename G, typename Accum>
Eigen::VectorXd gradient_load_impl(const FeSpace& space, const G& g, double t, double coeff,
                                   Accum&& accum) {
  const auto& rule = quadrature(2 * space.degree + 1);
  const auto& table = basis_table(space.degree, rule);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(space.n_dofs);
  for (int c = 0; c < static_cast<int>(space.mesh->cells.size()); ++c) {
    const CellGeom geom = cell_geometry(*space.mesh, c);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d x = geom.point(rule.points.row(q).transpose());
      const auto grads = (table.ref_grads[q] * geom.JinvT.transpose()).eval();
      accum(b, space, c, g(x, t), grads, coeff * rule.weights(q) * geom.detJ);
    }
  }
  return b;
}

}  // namespace

Eigen::VectorXd gradient_load_vector(const FeSpace& space, const GradFn& g, double t,
                                     double coeff) {
  if (space.components != 1)
    throw std::invalid_argument("gradient_load_vector: scalar space expected");
  return gradient_load_impl(space, g, t, coeff,
                            [](Eigen::VectorXd& b, const FeSpace& s, int c,
                               const Eigen::Vector2d& gv, const auto& grads, double w) {
                              for (int i = 0; i < s.dofs_per_cell; ++i)
                                b(s.cell_dofs[c][i]) += w * grads.row(i).dot(gv.transpose());
                            });
}

Eigen::VectorXd gradient_load_vector(const FeSpace& space, const JacFn& g, double t,
                                     double coeff) {
  if (space.components != 2)
    throw std::invalid_argument("gradient_load_vector: vector space expected");
  return gradient_load_impl(space, g, t, coeff,
                            [](Eigen::VectorXd& b, const FeSpace& s, int c,
                               const Eigen::Matrix2d& gv, const auto& grads, double w) {
                              for (int i = 0; i < s.dofs_per_cell; ++i) {
                                const int j = s.cell_dofs[c][i];
                                b(s.vdof(j, 0)) += w * grads.row(i).dot(gv.row(0));
                                b(s.vdof(j, 1)) += w * grads.row(i).dot(gv.row(1));
                              }
                            });
}

void apply_dirichlet(LinearSystem& sys, const FeSpace& space,
                     const std::vector<BoundaryMarker>& markers, const ScalarFn& g, double t) {
  for (int dof : space.marked_dofs(markers))
    sys.constrained_dofs[dof] = g(space.dof_coords[dof], t);
}

void apply_dirichlet(LinearSystem& sys, const FeSpace& space,
                     const std::vector<BoundaryMarker>& markers, const VectorFn& g, double t,
                     int comp_mask) {
  for (int dof : space.marked_dofs(markers)) {
    const Eigen::Vector2d v = g(space.dof_coords[dof], t);
    if (comp_mask & 1) sys.constrained_dofs[space.vdof(dof, 0)] = v.x();
    if (comp_mask & 2) sys.constrained_dofs[space.vdof(dof, 1)] = v.y();
  }
}

ConstrainedOperator::ConstrainedOperator(const SpMat& A, const std::vector<int>& constrained_dofs)
    : constrained_(constrained_dofs) {
  const int n = static_cast<int>(A.rows());
  std::vector<char> is_constrained(n, 0);
  for (int d : constrained_) {
    if (d < 0 || d >= n) throw std::invalid_argument("ConstrainedOperator: DOF out of range");
    is_constrained[d] = 1;
  }
  Triplets keep, couple;
  keep.reserve(A.nonZeros());
  for (int k = 0; k < A.outerSize(); ++k)
    for (SpMat::InnerIterator it(A, k); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      if (is_constrained[r]) continue;  // row replaced by identity
      if (is_constrained[c])
        couple.emplace_back(r, c, it.value());
      else
        keep.emplace_back(r, c, it.value());
    }
  for (int d : constrained_) keep.emplace_back(d, d, 1.0);
  matrix_.resize(n, n);
  matrix_.setFromTriplets(keep.begin(), keep.end());
  coupling_.resize(n, n);
  coupling_.setFromTriplets(couple.begin(), couple.end());
}

Eigen::VectorXd ConstrainedOperator::reduce_rhs(const Eigen::VectorXd& rhs,
                                                const Eigen::VectorXd& values) const {
  Eigen::VectorXd out = rhs - coupling_ * values;
  for (int d : constrained_) out(d) = values(d);
  return out;
}

void finalize_constraints(LinearSystem& sys) {
  std::vector<int> dofs;
  dofs.reserve(sys.constrained_dofs.size());
  Eigen::VectorXd values = Eigen::VectorXd::Zero(sys.matrix.rows());
  for (const auto& [d, v] : sys.constrained_dofs) {
    dofs.push_back(d);
    values(d) = v;
  }
  ConstrainedOperator op(sys.matrix, dofs);
  sys.matrix = op.matrix();
  sys.rhs = op.reduce_rhs(sys.rhs, values);
}

}  // namespace cdafem
