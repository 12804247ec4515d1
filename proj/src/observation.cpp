#include "cdafem/observation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace cdafem {

namespace {

// Uniform nominal boundaries snapped to the generating lattice.
std::vector<double> snapped_boundaries(double lo, double hi, double H, double lattice_origin,
                                       double lattice_width, bool snap) {
  const double extent = hi - lo;
  const int k = std::max(1, static_cast<int>(std::llround(extent / H)));
  std::vector<double> b(k + 1);
  for (int i = 0; i <= k; ++i) {
    double v = lo + extent * i / k;
    if (snap && i > 0 && i < k)
      v = lattice_origin + lattice_width * std::llround((v - lattice_origin) / lattice_width);
    b[i] = v;
  }
  for (int i = 0; i + 1 <= k; ++i)
    if (!(b[i + 1] > b[i] + 1e-14))
      throw std::invalid_argument(
          "build_coarse_grid: coarse width H=" + std::to_string(H) +
          " cannot be aligned to the mesh lattice (H below the fine lattice width)");
  return b;
}

int bin(const std::vector<double>& bounds, double x) {
  // interval index of x within [bounds.front(), bounds.back()]
  const int n = static_cast<int>(bounds.size()) - 1;
  int i = static_cast<int>(std::upper_bound(bounds.begin(), bounds.end(), x) - bounds.begin()) - 1;
  return std::clamp(i, 0, n - 1);
}

}  // namespace

CoarseGrid build_coarse_grid(const Mesh& m, double H) {
  if (H <= 0) throw std::invalid_argument("build_coarse_grid: H must be positive");
  if (!m.lattice)
    throw std::invalid_argument("build_coarse_grid: mesh carries no generating lattice");
  const RectLattice& lat = *m.lattice;
  const auto box = m.bounding_box();

  CoarseGrid g;
  g.H = H;
  g.xb = snapped_boundaries(box.min().x(), box.max().x(), H, lat.x0, lat.dx, true);
  g.yb = snapped_boundaries(box.min().y(), box.max().y(), H, lat.y0, lat.dy, !lat.sheared_y);

  const int kx = static_cast<int>(g.xb.size()) - 1;
  const int ky = static_cast<int>(g.yb.size()) - 1;
  std::vector<CoarseGrid::Cell> boxes(kx * ky);
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c) {
    const auto& cell = m.cells[c];
    const Eigen::Vector2d centroid =
        (m.vertices[cell[0]] + m.vertices[cell[1]] + m.vertices[cell[2]]) / 3.0;
    auto& target = boxes[bin(g.yb, centroid.y()) * kx + bin(g.xb, centroid.x())];
    target.elements.push_back(c);
    target.measure += m.cell_area(c);
  }
  for (auto& b : boxes)
    if (!b.elements.empty()) g.cells.push_back(std::move(b));  // clip empty boxes

  // vertex nodes: grid intersections realized as fine vertices
  std::map<std::pair<long long, long long>, int> vertex_lookup;
  auto key = [&lat](const Eigen::Vector2d& p) {
    return std::make_pair(std::llround((p.x() - lat.x0) / lat.dx * 4),
                          std::llround((p.y() - lat.y0) / lat.dy * 4));
  };
  if (!lat.sheared_y) {
    for (int v = 0; v < static_cast<int>(m.vertices.size()); ++v)
      vertex_lookup.emplace(key(m.vertices[v]), v);
    for (double x : g.xb)
      for (double y : g.yb) {
        auto it = vertex_lookup.find(key(Eigen::Vector2d(x, y)));
        if (it != vertex_lookup.end()) g.vertex_nodes.push_back(it->second);
      }
  } else {
    // sheared lattice: snap x to its column, then pick the column vertex
    // nearest in y; keep only nominal points that land inside the domain
    std::map<long long, std::vector<int>> columns;
    for (int v = 0; v < static_cast<int>(m.vertices.size()); ++v)
      columns[std::llround((m.vertices[v].x() - lat.x0) / lat.dx * 4)].push_back(v);
    for (double x : g.xb)
      for (double y : g.yb) {
        auto cit = columns.find(std::llround((x - lat.x0) / lat.dx * 4));
        if (cit == columns.end()) continue;
        int best = -1;
        double dist = std::numeric_limits<double>::max();
        for (int v : cit->second) {
          const double d = std::abs(m.vertices[v].y() - y);
          if (d < dist) {
            dist = d;
            best = v;
          }
        }
        if (best >= 0 && dist <= 0.5 * lat.dy + 1e-12) g.vertex_nodes.push_back(best);
      }
  }
  std::sort(g.vertex_nodes.begin(), g.vertex_nodes.end());
  g.vertex_nodes.erase(std::unique(g.vertex_nodes.begin(), g.vertex_nodes.end()),
                       g.vertex_nodes.end());
  return g;
}

Eigen::VectorXd ObservationOperator::apply_IH(const Eigen::VectorXd& v) const {
  if (v.size() != C.cols()) throw std::invalid_argument("apply_IH: dimension mismatch");
  Eigen::VectorXd avg = C * v;
  avg.array() /= D.array();
  return avg;
}

SpMat ObservationOperator::nudging_matrix() const {
  SpMat Dt = C;
  for (int k = 0; k < Dt.outerSize(); ++k)
    for (SpMat::InnerIterator it(Dt, k); it; ++it) it.valueRef() /= D(it.row());
  return SpMat(C.transpose()) * Dt;
}

ObservationOperator build_observation(const FeSpace& space, double H, double mu,
                                      NudgingMode mode) {
  if (!(mu >= 0)) throw std::invalid_argument("build_observation: mu must be >= 0 or inf");
  if (std::isinf(mu) != (mode == NudgingMode::direct))
    throw std::invalid_argument("build_observation: direct mode is exactly mu = inf");

  ObservationOperator obs;
  obs.space = &space;
  obs.grid = build_coarse_grid(*space.mesh, H);
  obs.mu = mu;
  obs.mode = mode;

  const int ncells = obs.grid.n_cells();
  const int comps = space.components;
  const auto& rule = quadrature(2 * space.degree);
  const auto& table = basis_table(space.degree, rule);

  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < ncells; ++c) {
    std::map<int, double> row;  // scalar dof -> integral over the cell
    for (int e : obs.grid.cells[c].elements) {
      const CellGeom geom = cell_geometry(*space.mesh, e);
      for (int q = 0; q < rule.size(); ++q) {
        const double w = rule.weights(q) * geom.detJ;
        for (int k = 0; k < space.dofs_per_cell; ++k)
          row[space.cell_dofs[e][k]] += w * table.values(q, k);
      }
    }
    for (const auto& [dof, v] : row)
      for (int comp = 0; comp < comps; ++comp)
        trip.emplace_back(c + comp * ncells, space.vdof(dof, comp), v);
  }
  obs.C.resize(comps * ncells, space.n_dofs);
  obs.C.setFromTriplets(trip.begin(), trip.end());
  obs.D.resize(comps * ncells);
  for (int c = 0; c < ncells; ++c)
    for (int comp = 0; comp < comps; ++comp)
      obs.D(c + comp * ncells) = obs.grid.cells[c].measure;
  return obs;
}

NudgingContribution nudging_contribution(const ObservationOperator& obs,
                                         const Eigen::VectorXd& truth_averages) {
  if (std::isinf(obs.mu))
    throw std::invalid_argument("nudging_contribution: mu is infinite, use direct_enforce");
  if (truth_averages.size() != obs.n_rows())
    throw std::invalid_argument("nudging_contribution: dimension mismatch");
  NudgingContribution out;
  out.rhs = obs.mu * (obs.C.transpose() * truth_averages);
  if (obs.mode == NudgingMode::lumped) {
    const Eigen::VectorXd colsum = Eigen::RowVectorXd::Ones(obs.C.rows()) * obs.C;
    std::vector<Eigen::Triplet<double>> trip;
    for (int j = 0; j < colsum.size(); ++j)
      if (colsum(j) != 0) trip.emplace_back(j, j, obs.mu * colsum(j));
    out.matrix.resize(obs.C.cols(), obs.C.cols());
    out.matrix.setFromTriplets(trip.begin(), trip.end());
  } else {
    out.matrix = obs.mu * obs.nudging_matrix();
  }
  return out;
}

namespace {

std::vector<int> measurement_dofs(const ObservationOperator& obs) {
  const FeSpace& s = *obs.space;
  std::vector<int> dofs;
  dofs.reserve(obs.grid.vertex_nodes.size());
  for (int v : obs.grid.vertex_nodes) {
    if (v < 0 || v >= static_cast<int>(s.vertex_class.size()))
      throw std::invalid_argument("direct_enforce: vertex node has no matching fine DOF");
    dofs.push_back(s.vertex_class[v]);
  }
  return dofs;
}

void require_direct(const ObservationOperator& obs) {
  if (obs.mode != NudgingMode::direct)
    throw std::invalid_argument("direct_enforce: observation operator not in direct mode");
  if (obs.grid.vertex_nodes.empty())
    throw std::invalid_argument("direct_enforce: no measurement nodes on this grid");
}

}  // namespace

void direct_enforce(LinearSystem& sys, const ObservationOperator& obs, const ScalarFn& truth,
                    double t) {
  require_direct(obs);
  for (int d : measurement_dofs(obs))
    sys.constrained_dofs[d] = truth(obs.space->dof_coords[d], t);
}

void direct_enforce(LinearSystem& sys, const ObservationOperator& obs, const VectorFn& truth,
                    double t) {
  require_direct(obs);
  for (int d : measurement_dofs(obs)) {
    const Eigen::Vector2d v = truth(obs.space->dof_coords[d], t);
    sys.constrained_dofs[obs.space->vdof(d, 0)] = v.x();
    sys.constrained_dofs[obs.space->vdof(d, 1)] = v.y();
  }
}

void direct_enforce(LinearSystem& sys, const ObservationOperator& obs,
                    const Eigen::VectorXd& truth_coeffs) {
  require_direct(obs);
  if (truth_coeffs.size() != obs.space->n_dofs)
    throw std::invalid_argument("direct_enforce: truth coefficients do not match the space");
  for (int d : measurement_dofs(obs))
    for (int comp = 0; comp < obs.space->components; ++comp) {
      const int vd = obs.space->vdof(d, comp);
      sys.constrained_dofs[vd] = truth_coeffs(vd);
    }
}

namespace {

template <typename F, typename Put>
Eigen::VectorXd averages_impl(const ObservationOperator& obs, const F& u, double t, Put&& put) {
  const FeSpace& s = *obs.space;
  const auto& rule = quadrature(2 * s.degree + 1);
  const int ncells = obs.grid.n_cells();
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(obs.n_rows());
  for (int c = 0; c < ncells; ++c) {
    for (int e : obs.grid.cells[c].elements) {
      const CellGeom geom = cell_geometry(*s.mesh, e);
      for (int q = 0; q < rule.size(); ++q) {
        const Eigen::Vector2d x = geom.point(rule.points.row(q).transpose());
        put(avg, c, ncells, u(x, t), rule.weights(q) * geom.detJ);
      }
    }
    avg(c) /= obs.grid.cells[c].measure;
    if (s.components == 2) avg(c + ncells) /= obs.grid.cells[c].measure;
  }
  return avg;
}

}  // namespace

Eigen::VectorXd cell_averages(const ObservationOperator& obs, const ScalarFn& u, double t) {
  return averages_impl(obs, u, t,
                       [](Eigen::VectorXd& avg, int c, int, double v, double w) { avg(c) += w * v; });
}

Eigen::VectorXd cell_averages(const ObservationOperator& obs, const VectorFn& u, double t) {
  return averages_impl(obs, u, t,
                       [](Eigen::VectorXd& avg, int c, int ncells, const Eigen::Vector2d& v,
                          double w) {
                         avg(c) += w * v.x();
                         avg(c + ncells) += w * v.y();
                       });
}

double estimate_interp_constant(const FeSpace& space, const CoarseGrid& grid,
                                const std::vector<BatteryFunction>& battery) {
  const auto& rule = quadrature(2 * space.degree);
  const auto& table = basis_table(space.degree, rule);
  double worst = 0;
  for (const auto& f : battery) {
    const Eigen::VectorXd v = interpolate_nodal(f.value, space, 0.0);
    // cell averages of v per coarse cell
    double err2 = 0, grad2 = 0;
    std::vector<double> avg(grid.n_cells(), 0.0);
    for (int c = 0; c < grid.n_cells(); ++c) {
      double num = 0;
      for (int e : grid.cells[c].elements) {
        const CellGeom geom = cell_geometry(*space.mesh, e);
        for (int q = 0; q < rule.size(); ++q) {
          double vh = 0;
          for (int k = 0; k < space.dofs_per_cell; ++k)
            vh += v(space.cell_dofs[e][k]) * table.values(q, k);
          num += rule.weights(q) * geom.detJ * vh;
        }
      }
      avg[c] = num / grid.cells[c].measure;
    }
    for (int c = 0; c < grid.n_cells(); ++c)
      for (int e : grid.cells[c].elements) {
        const CellGeom geom = cell_geometry(*space.mesh, e);
        for (int q = 0; q < rule.size(); ++q) {
          const auto grads = (table.ref_grads[q] * geom.JinvT.transpose()).eval();
          double vh = 0;
          Eigen::Vector2d gh = Eigen::Vector2d::Zero();
          for (int k = 0; k < space.dofs_per_cell; ++k) {
            vh += v(space.cell_dofs[e][k]) * table.values(q, k);
            gh += v(space.cell_dofs[e][k]) * grads.row(k).transpose();
          }
          const double w = rule.weights(q) * geom.detJ;
          err2 += w * (vh - avg[c]) * (vh - avg[c]);
          grad2 += w * gh.squaredNorm();
        }
      }
    if (grad2 <= 1e-24)
      throw std::invalid_argument("estimate_interp_constant: battery function has zero gradient");
    worst = std::max(worst, std::sqrt(err2) / (grid.H * std::sqrt(grad2)));
  }
  return worst;
}

double estimate_interp_constant(const FeSpace& space, const CoarseGrid& grid) {
  using std::numbers::pi;
  static const std::vector<BatteryFunction> battery = {
      {[](const Eigen::Vector2d& p, double) { return p.x(); },
       [](const Eigen::Vector2d&, double) { return Eigen::Vector2d(1, 0); }},
      {[](const Eigen::Vector2d& p, double) { return p.y(); },
       [](const Eigen::Vector2d&, double) { return Eigen::Vector2d(0, 1); }},
      {[](const Eigen::Vector2d& p, double) { return std::sin(pi * p.x()) * std::sin(pi * p.y()); },
       [](const Eigen::Vector2d& p, double) {
         return Eigen::Vector2d(pi * std::cos(pi * p.x()) * std::sin(pi * p.y()),
                                pi * std::sin(pi * p.x()) * std::cos(pi * p.y()));
       }},
      {[](const Eigen::Vector2d& p, double) { return std::cos(2 * pi * p.x()) + p.y() * p.y(); },
       [](const Eigen::Vector2d& p, double) {
         return Eigen::Vector2d(-2 * pi * std::sin(2 * pi * p.x()), 2 * p.y());
       }},
  };
  return estimate_interp_constant(space, grid, battery);
}

}  // namespace cdafem
