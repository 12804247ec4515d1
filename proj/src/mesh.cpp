#include "cdafem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <stdexcept>

namespace cdafem {

std::string to_string(BoundaryMarker m) {
  switch (m) {
    case BoundaryMarker::bottom: return "bottom";
    case BoundaryMarker::top: return "top";
    case BoundaryMarker::left: return "left";
    case BoundaryMarker::right: return "right";
    case BoundaryMarker::inflow: return "inflow";
    case BoundaryMarker::outflow: return "outflow";
    case BoundaryMarker::wall: return "wall";
  }
  return "?";
}

double Mesh::cell_area(int c) const {
  const auto& [a, b, d] = cells[c];
  const Eigen::Vector2d e1 = vertices[b] - vertices[a];
  const Eigen::Vector2d e2 = vertices[d] - vertices[a];
  return 0.5 * (e1.x() * e2.y() - e1.y() * e2.x());
}

double Mesh::max_edge_length() const {
  double h = 0;
  for (const auto& c : cells)
    for (int k = 0; k < 3; ++k)
      h = std::max(h, (vertices[c[k]] - vertices[c[(k + 1) % 3]]).norm());
  return h;
}

double Mesh::total_area() const {
  double a = 0;
  for (int c = 0; c < static_cast<int>(cells.size()); ++c) a += cell_area(c);
  return a;
}

Eigen::AlignedBox2d Mesh::bounding_box() const {
  Eigen::AlignedBox2d box;
  for (const auto& v : vertices) box.extend(v);
  return box;
}

std::uint64_t Mesh::hash() const {
  // FNV-1a over vertex coordinates and cell indices
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* p, std::size_t n) {
    const auto* b = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= b[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& v : vertices) mix(v.data(), 2 * sizeof(double));
  for (const auto& c : cells) mix(c.data(), 3 * sizeof(int));
  for (const auto& p : periodic_pairs) mix(&p, sizeof(p));
  return h;
}

Mesh uniform_rect_mesh(int nx, int ny, const Eigen::AlignedBox2d& rect) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("uniform_rect_mesh: nx, ny must be >= 1");
  Mesh m;
  const double x0 = rect.min().x(), y0 = rect.min().y();
  const double dx = (rect.max().x() - x0) / nx;
  const double dy = (rect.max().y() - y0) / ny;
  m.vertices.reserve((nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j)
    for (int i = 0; i <= nx; ++i)
      m.vertices.emplace_back(x0 + i * dx, y0 + j * dy);

  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  m.cells.reserve(2 * nx * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      // fixed diagonal: lower-left to upper-right
      m.cells.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      m.cells.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }

  for (int i = 0; i < nx; ++i) {
    m.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), BoundaryMarker::bottom});
    m.boundary_edges.push_back({vid(i, ny), vid(i + 1, ny), BoundaryMarker::top});
  }
  for (int j = 0; j < ny; ++j) {
    m.boundary_edges.push_back({vid(0, j), vid(0, j + 1), BoundaryMarker::left});
    m.boundary_edges.push_back({vid(nx, j), vid(nx, j + 1), BoundaryMarker::right});
  }
  m.lattice = RectLattice{x0, y0, dx, dy, nx, ny, false};
  return m;
}

Mesh barycentric_refine(const Mesh& m) {
  Mesh r;
  r.vertices = m.vertices;
  r.boundary_edges = m.boundary_edges;
  r.periodic_pairs = m.periodic_pairs;
  r.lattice = m.lattice;
  r.cells.reserve(3 * m.cells.size());
  for (const auto& [a, b, c] : m.cells) {
    const int g = static_cast<int>(r.vertices.size());
    r.vertices.push_back((m.vertices[a] + m.vertices[b] + m.vertices[c]) / 3.0);
    r.cells.push_back({a, b, g});
    r.cells.push_back({b, c, g});
    r.cells.push_back({c, a, g});
  }
  return r;
}

Mesh shear_channel_mesh(int nx, int ny) {
  const double L = 4.0 * std::numbers::pi;
  Mesh m = uniform_rect_mesh(nx, ny, Eigen::AlignedBox2d(Eigen::Vector2d(0, 0), Eigen::Vector2d(L, 1)));
  for (auto& v : m.vertices) v.y() += std::sin(v.x());
  for (auto& e : m.boundary_edges) {
    switch (e.marker) {
      case BoundaryMarker::left: e.marker = BoundaryMarker::inflow; break;
      case BoundaryMarker::right: e.marker = BoundaryMarker::outflow; break;
      default: e.marker = BoundaryMarker::wall; break;
    }
  }
  m.lattice->sheared_y = true;
  return m;
}

Mesh identify_periodic_x(Mesh m) {
  const auto box = m.bounding_box();
  const double xl = box.min().x(), xr = box.max().x();
  constexpr double tol = 1e-12;
  std::vector<int> left, right;
  for (int v = 0; v < static_cast<int>(m.vertices.size()); ++v) {
    if (std::abs(m.vertices[v].x() - xl) <= tol) left.push_back(v);
    if (std::abs(m.vertices[v].x() - xr) <= tol) right.push_back(v);
  }
  m.periodic_pairs.clear();
  for (int lv : left) {
    int match = -1;
    for (int rv : right)
      if (std::abs(m.vertices[lv].y() - m.vertices[rv].y()) <= tol) {
        match = rv;
        break;
      }
    if (match < 0)
      throw std::invalid_argument("identify_periodic_x: left vertex at y=" +
                                  std::to_string(m.vertices[lv].y()) +
                                  " has no y-matching right partner");
    m.periodic_pairs.emplace_back(lv, match);
  }
  return m;
}

bool check_positive_areas(const Mesh& m, double* min_area) {
  double amin = std::numeric_limits<double>::max();
  for (int c = 0; c < static_cast<int>(m.cells.size()); ++c)
    amin = std::min(amin, m.cell_area(c));
  if (min_area) *min_area = amin;
  return amin > 0;
}

bool check_edge_manifold(const Mesh& m, std::string* detail) {
  std::map<std::pair<int, int>, int> count;
  auto key = [](int a, int b) { return std::make_pair(std::min(a, b), std::max(a, b)); };
  for (const auto& c : m.cells)
    for (int k = 0; k < 3; ++k) count[key(c[k], c[(k + 1) % 3])]++;
  std::map<std::pair<int, int>, int> bcount;
  for (const auto& e : m.boundary_edges) bcount[key(e.v0, e.v1)]++;
  for (const auto& [e, n] : count) {
    const bool on_boundary = bcount.count(e) > 0;
    if (on_boundary && n != 1) {
      if (detail) *detail = "boundary edge shared by " + std::to_string(n) + " cells";
      return false;
    }
    if (!on_boundary && n != 2) {
      if (detail) *detail = "interior edge shared by " + std::to_string(n) + " cells";
      return false;
    }
  }
  for (const auto& [e, n] : bcount)
    if (!count.count(e)) {
      if (detail) *detail = "boundary edge not part of any cell";
      return false;
    }
  // boundary edges must exactly cover the topological boundary
  for (const auto& [e, n] : count)
    if (n == 1 && !bcount.count(e)) {
      if (detail) *detail = "topological boundary edge without marker";
      return false;
    }
  return true;
}

void export_mesh(const Mesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_mesh: cannot open " + path);
  out << "vertices " << m.vertices.size() << " cells " << m.cells.size() << "\n";
  char buf[64];
  for (const auto& v : m.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g", v.x(), v.y());
    out << buf << "\n";
  }
  for (const auto& c : m.cells) out << c[0] << " " << c[1] << " " << c[2] << "\n";
}

}  // namespace cdafem
