#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cdafem {

enum class BoundaryMarker { bottom, top, left, right, inflow, outflow, wall };

std::string to_string(BoundaryMarker m);

struct BoundaryEdge {
  int v0, v1;
  BoundaryMarker marker;
};

/// Metadata of the structured lattice a mesh was generated from. Coarse
/// observation grids snap their cell boundaries to this lattice so cell
/// integrals stay exact even after barycentric refinement.
struct RectLattice {
  double x0 = 0, y0 = 0;
  double dx = 0, dy = 0;
  int nx = 0, ny = 0;
  bool sheared_y = false;  // y-coordinates no longer sit on the lattice
};

/// Conforming 2D triangulation. Immutable after generation; safe to share
/// read-only across threads.
struct Mesh {
  std::vector<Eigen::Vector2d> vertices;
  std::vector<std::array<int, 3>> cells;  // CCW vertex indices
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<std::pair<int, int>> periodic_pairs;  // (left vertex, right vertex)
  std::optional<RectLattice> lattice;

  double cell_area(int c) const;
  double max_edge_length() const;
  double total_area() const;
  Eigen::AlignedBox2d bounding_box() const;
  std::uint64_t hash() const;
};

Mesh uniform_rect_mesh(int nx, int ny, const Eigen::AlignedBox2d& rect);

/// Split every cell into 3 at its barycenter.
Mesh barycentric_refine(const Mesh& m);

/// Channel bounded by y=sin(x), y=1+sin(x), x=0, x=4*pi: a uniform strip
/// mesh with the sine shear applied to every vertex. Markers: inflow at
/// x=0, outflow at x=4*pi, wall on the two sine curves.
Mesh shear_channel_mesh(int nx, int ny);

/// Pair left/right boundary vertices with equal y (to 1e-12). Throws
/// std::invalid_argument if any left vertex has no matching partner.
Mesh identify_periodic_x(Mesh m);

// Invariant helpers shared by tests and the `verify-properties` command.
bool check_positive_areas(const Mesh& m, double* min_area = nullptr);
bool check_edge_manifold(const Mesh& m, std::string* detail = nullptr);

/// Plain-text export: header `vertices N cells M`, N lines `x y`,
/// M lines `i j k`; floats printed with 17 significant digits.
void export_mesh(const Mesh& m, const std::string& path);

}  // namespace cdafem
