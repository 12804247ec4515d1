#include "cdafem/fe_space.hpp"

#include <cmath>
#include <mutex>
#include <set>
#include <stdexcept>

namespace cdafem {

BasisEval eval_basis(int degree, const Eigen::Vector3d& bary) {
  // reference coordinates: xi = bary(1), eta = bary(2); grad(lambda) rows:
  static const Eigen::Matrix<double, 3, 2> gl = [] {
    Eigen::Matrix<double, 3, 2> g;
    g << -1, -1, 1, 0, 0, 1;
    return g;
  }();
  BasisEval b;
  if (degree == 1) {
    b.values = bary;
    b.ref_grads = gl;
    return b;
  }
  if (degree != 2) throw std::invalid_argument("eval_basis: unsupported degree");
  b.values.resize(6);
  b.ref_grads.resize(6, 2);
  for (int i = 0; i < 3; ++i) {
    b.values(i) = bary(i) * (2 * bary(i) - 1);
    b.ref_grads.row(i) = (4 * bary(i) - 1) * gl.row(i);
  }
  const int ei[3] = {0, 1, 2}, ej[3] = {1, 2, 0};  // edge DOFs 3,4,5
  for (int k = 0; k < 3; ++k) {
    b.values(3 + k) = 4 * bary(ei[k]) * bary(ej[k]);
    b.ref_grads.row(3 + k) = 4 * (bary(ej[k]) * gl.row(ei[k]) + bary(ei[k]) * gl.row(ej[k]));
  }
  return b;
}

const BasisTable& basis_table(int degree, const QuadratureRule& rule) {
  static std::map<std::pair<int, const QuadratureRule*>, BasisTable> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(degree, &rule);
  auto it = cache.find(key);
  if (it == cache.end()) {
    BasisTable t;
    const int nl = degree == 1 ? 3 : 6;
    t.values.resize(rule.size(), nl);
    t.ref_grads.resize(rule.size());
    for (int q = 0; q < rule.size(); ++q) {
      BasisEval b = eval_basis(degree, rule.points.row(q).transpose());
      t.values.row(q) = b.values.transpose();
      t.ref_grads[q] = b.ref_grads;
    }
    it = cache.emplace(key, std::move(t)).first;
  }
  return it->second;
}

CellGeom cell_geometry(const Mesh& m, int cell) {
  const auto& c = m.cells[cell];
  CellGeom g;
  g.p0 = m.vertices[c[0]];
  g.J.col(0) = m.vertices[c[1]] - g.p0;
  g.J.col(1) = m.vertices[c[2]] - g.p0;
  g.detJ = g.J(0, 0) * g.J(1, 1) - g.J(0, 1) * g.J(1, 0);
  Eigen::Matrix2d inv;
  inv << g.J(1, 1), -g.J(0, 1), -g.J(1, 0), g.J(0, 0);
  g.JinvT = inv.transpose() / g.detJ;
  return g;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

FeSpace build_space(const Mesh& m, int degree, int components) {
  if (degree != 1 && degree != 2) throw std::invalid_argument("build_space: unsupported degree");
  if (components != 1 && components != 2)
    throw std::invalid_argument("build_space: components must be 1 or 2");

  FeSpace s;
  s.mesh = &m;
  s.degree = degree;
  s.components = components;
  s.dofs_per_cell = degree == 1 ? 3 : 6;

  const int nv = static_cast<int>(m.vertices.size());
  UnionFind uf(nv);
  for (const auto& [l, r] : m.periodic_pairs) uf.unite(r, l);

  // contiguous vertex class ids, ordered by first appearance
  s.vertex_class.assign(nv, -1);
  std::vector<int> root_to_class(nv, -1);
  int n_classes = 0;
  std::vector<int> class_rep;
  for (int v = 0; v < nv; ++v) {
    const int r = uf.find(v);
    if (root_to_class[r] < 0) {
      root_to_class[r] = n_classes++;
      class_rep.push_back(v);
    }
    s.vertex_class[v] = root_to_class[r];
  }

  s.dof_coords.reserve(n_classes);
  for (int c = 0; c < n_classes; ++c) s.dof_coords.push_back(m.vertices[class_rep[c]]);

  const int nc = static_cast<int>(m.cells.size());
  s.cell_dofs.resize(nc);
  int n_edge = 0;
  std::map<std::pair<int, int>, int> edge_dof;
  for (int c = 0; c < nc; ++c) {
    const auto& cell = m.cells[c];
    for (int k = 0; k < 3; ++k) s.cell_dofs[c][k] = s.vertex_class[cell[k]];
    if (degree == 2) {
      const int ei[3] = {0, 1, 2}, ej[3] = {1, 2, 0};
      for (int k = 0; k < 3; ++k) {
        const int ca = s.vertex_class[cell[ei[k]]], cb = s.vertex_class[cell[ej[k]]];
        auto key = std::minmax(ca, cb);
        auto it = edge_dof.find(key);
        if (it == edge_dof.end()) {
          it = edge_dof.emplace(key, n_edge++).first;
          s.dof_coords.push_back(0.5 * (m.vertices[cell[ei[k]]] + m.vertices[cell[ej[k]]]));
        }
        s.cell_dofs[c][3 + k] = n_classes + it->second;
      }
    }
  }
  s.n_scalar_dofs = n_classes + (degree == 2 ? n_edge : 0);
  s.n_dofs = components * s.n_scalar_dofs;

  s.dof_owner_cell.assign(s.n_scalar_dofs, -1);
  for (int c = 0; c < nc; ++c)
    for (int k = 0; k < s.dofs_per_cell; ++k)
      if (s.dof_owner_cell[s.cell_dofs[c][k]] < 0) s.dof_owner_cell[s.cell_dofs[c][k]] = c;

  for (const auto& e : m.boundary_edges) {
    auto& set = s.boundary_dofs[e.marker];
    set.push_back(s.vertex_class[e.v0]);
    set.push_back(s.vertex_class[e.v1]);
    if (degree == 2) {
      auto key = std::minmax(s.vertex_class[e.v0], s.vertex_class[e.v1]);
      auto it = edge_dof.find(key);
      if (it != edge_dof.end()) set.push_back(n_classes + it->second);
    }
  }
  for (auto& [marker, set] : s.boundary_dofs) {
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
  }
  return s;
}

std::vector<int> FeSpace::marked_dofs(const std::vector<BoundaryMarker>& markers) const {
  std::set<int> out;
  for (auto mk : markers) {
    auto it = boundary_dofs.find(mk);
    if (it == boundary_dofs.end())
      throw std::invalid_argument("marked_dofs: marker '" + to_string(mk) + "' not present");
    out.insert(it->second.begin(), it->second.end());
  }
  return {out.begin(), out.end()};
}

Eigen::VectorXd interpolate_nodal(const ScalarFn& f, const FeSpace& space, double t) {
  if (space.components != 1)
    throw std::invalid_argument("interpolate_nodal: scalar function on vector space");
  Eigen::VectorXd c(space.n_dofs);
  for (int j = 0; j < space.n_scalar_dofs; ++j) {
    c(j) = f(space.dof_coords[j], t);
    if (!std::isfinite(c(j)))
      throw std::domain_error("interpolate_nodal: non-finite value at DOF " + std::to_string(j));
  }
  return c;
}

Eigen::VectorXd interpolate_nodal(const VectorFn& f, const FeSpace& space, double t) {
  if (space.components != 2)
    throw std::invalid_argument("interpolate_nodal: vector function on scalar space");
  Eigen::VectorXd c(space.n_dofs);
  for (int j = 0; j < space.n_scalar_dofs; ++j) {
    const Eigen::Vector2d v = f(space.dof_coords[j], t);
    if (!v.allFinite())
      throw std::domain_error("interpolate_nodal: non-finite value at DOF " + std::to_string(j));
    c(space.vdof(j, 0)) = v.x();
    c(space.vdof(j, 1)) = v.y();
  }
  return c;
}

double FeFunction::value(int cell, const BasisEval& basis) const {
  double v = 0;
  for (int k = 0; k < space->dofs_per_cell; ++k)
    v += coeffs(space->cell_dofs[cell][k]) * basis.values(k);
  return v;
}

Eigen::Vector2d FeFunction::vector_value(int cell, const BasisEval& basis) const {
  Eigen::Vector2d v = Eigen::Vector2d::Zero();
  for (int k = 0; k < space->dofs_per_cell; ++k) {
    const int j = space->cell_dofs[cell][k];
    v.x() += coeffs(space->vdof(j, 0)) * basis.values(k);
    v.y() += coeffs(space->vdof(j, 1)) * basis.values(k);
  }
  return v;
}

double FeFunction::value_at_dof(int dof) const {
  // evaluate through the basis at the DOF's reference node in its owner cell
  // (not a coefficient lookup, so dof-map/basis consistency is exercised)
  static const Eigen::Vector3d nodes[6] = {
      {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.5, 0.5, 0}, {0, 0.5, 0.5}, {0.5, 0, 0.5}};
  const int cell = space->dof_owner_cell[dof];
  for (int k = 0; k < space->dofs_per_cell; ++k)
    if (space->cell_dofs[cell][k] == dof)
      return value(cell, eval_basis(space->degree, nodes[k]));
  throw std::logic_error("value_at_dof: owner cell does not contain DOF");
}

}  // namespace cdafem
