#include "cdafem/norms.hpp"

#include <cmath>
#include <stdexcept>

namespace cdafem {

namespace {

template <typename Eval>
ErrorNorms norms_impl(const FeSpace& space, Eval&& eval_diff) {
  const auto& rule = quadrature(2 * space.degree + 2);
  const auto& table = basis_table(space.degree, rule);
  double l2 = 0, h1 = 0;
  const int nc = static_cast<int>(space.mesh->cells.size());
  for (int c = 0; c < nc; ++c) {
    const CellGeom geom = cell_geometry(*space.mesh, c);
    for (int q = 0; q < rule.size(); ++q) {
      const Eigen::Vector2d x = geom.point(rule.points.row(q).transpose());
      const auto grads = (table.ref_grads[q] * geom.JinvT.transpose()).eval();
      const double w = rule.weights(q) * geom.detJ;
      eval_diff(c, q, x, table.values.row(q), grads, w, l2, h1);
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

}  // namespace

ErrorNorms error_norms(const FeSpace& space, const Eigen::VectorXd& w, const ScalarFn& u,
                       const GradFn& grad_u, double t) {
  if (space.components != 1) throw std::invalid_argument("error_norms: scalar space expected");
  if (w.size() != space.n_dofs) throw std::invalid_argument("error_norms: incompatible spaces");
  return norms_impl(space, [&](int c, int, const Eigen::Vector2d& x, const auto& vals,
                               const auto& grads, double wq, double& l2, double& h1) {
    double wh = 0;
    Eigen::Vector2d gh = Eigen::Vector2d::Zero();
    for (int k = 0; k < space.dofs_per_cell; ++k) {
      const double cj = w(space.cell_dofs[c][k]);
      wh += cj * vals(k);
      gh += cj * grads.row(k).transpose();
    }
    const double d = wh - u(x, t);
    const Eigen::Vector2d gd = gh - grad_u(x, t);
    l2 += wq * d * d;
    h1 += wq * gd.squaredNorm();
  });
}

ErrorNorms error_norms(const FeSpace& space, const Eigen::VectorXd& w, const VectorFn& u,
                       const JacFn& grad_u, double t) {
  if (space.components != 2) throw std::invalid_argument("error_norms: vector space expected");
  if (w.size() != space.n_dofs) throw std::invalid_argument("error_norms: incompatible spaces");
  return norms_impl(space, [&](int c, int, const Eigen::Vector2d& x, const auto& vals,
                               const auto& grads, double wq, double& l2, double& h1) {
    Eigen::Vector2d wh = Eigen::Vector2d::Zero();
    Eigen::Matrix2d gh = Eigen::Matrix2d::Zero();
    for (int k = 0; k < space.dofs_per_cell; ++k) {
      const int j = space.cell_dofs[c][k];
      const Eigen::Vector2d cj(w(space.vdof(j, 0)), w(space.vdof(j, 1)));
      wh += cj * vals(k);
      gh += cj * grads.row(k);  // outer product: row r = component, col = d/dx_c
    }
    const Eigen::Vector2d d = wh - u(x, t);
    const Eigen::Matrix2d gd = gh - grad_u(x, t);
    l2 += wq * d.squaredNorm();
    h1 += wq * gd.squaredNorm();
  });
}

ErrorNorms error_norms_discrete(const Eigen::VectorXd& w, const Eigen::VectorXd& truth,
                                const SpMat& mass, const SpMat& stiffness_unit) {
  if (w.size() != truth.size() || w.size() != mass.rows())
    throw std::invalid_argument("error_norms_discrete: incompatible sizes");
  const Eigen::VectorXd d = w - truth;
  return {std::sqrt(std::max(0.0, d.dot(mass * d))),
          std::sqrt(std::max(0.0, d.dot(stiffness_unit * d)))};
}

double l2_norm_discrete(const Eigen::VectorXd& w, const SpMat& mass) {
  return std::sqrt(std::max(0.0, w.dot(mass * w)));
}

}  // namespace cdafem
