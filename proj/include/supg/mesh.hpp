#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "supg/geometry.hpp"

namespace supg {

using VertexTriple = std::array<std::size_t, 3>;

/// Structured triangulation of the unit square.
///
/// Each of the N x N sub-squares is split along its lower-left to upper-right
/// diagonal into a lower-right and an upper-left triangle, both stored
/// counterclockwise. Vertices are numbered row-major, cells as
/// 2 * (j * N + i) + {0 (lower), 1 (upper)} for sub-square (i, j).
class Mesh {
 public:
  /// Throws std::invalid_argument for n == 0.
  static Mesh uniform(int n);

  int cells_per_side() const { return n_; }
  std::size_t n_vertices() const { return vertices_.size(); }
  std::size_t n_cells() const { return cells_.size(); }

  std::span<const Vec2> vertices() const { return vertices_; }
  std::span<const VertexTriple> cells() const { return cells_; }
  const Vec2& vertex(std::size_t i) const { return vertices_[i]; }
  const VertexTriple& cell(std::size_t k) const { return cells_[k]; }
  bool is_boundary_vertex(std::size_t i) const { return boundary_[i] != 0; }

  /// Signed area (positive for counterclockwise cells).
  double cell_area(std::size_t k) const;
  /// Longest edge length, i.e. the diameter h_K.
  double cell_diameter(std::size_t k) const;

  /// Index of a cell containing p, found by grid arithmetic.
  /// Throws std::invalid_argument when p lies outside [0,1]^2.
  std::size_t locate(Vec2 p) const;

 private:
  Mesh() = default;

  int n_{0};
  std::vector<Vec2> vertices_;
  std::vector<VertexTriple> cells_;
  std::vector<char> boundary_;
};

inline Mesh build_uniform_mesh(int n) { return Mesh::uniform(n); }

/// True when a coordinate of p equals 0 or 1 within 1e-14.
bool on_unit_square_boundary(Vec2 p);

}  // namespace supg
