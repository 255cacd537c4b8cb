#include "supg/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace supg {

namespace {
constexpr double kBoundaryTol = 1e-14;
}

bool on_unit_square_boundary(Vec2 p) {
  return std::abs(p.x) <= kBoundaryTol || std::abs(p.x - 1.0) <= kBoundaryTol ||
         std::abs(p.y) <= kBoundaryTol || std::abs(p.y - 1.0) <= kBoundaryTol;
}

Mesh Mesh::uniform(int n) {
  if (n < 1) {
    throw std::invalid_argument("Mesh::uniform: cells per side must be >= 1, got " +
                                std::to_string(n));
  }
  Mesh mesh;
  mesh.n_ = n;
  const auto np = static_cast<std::size_t>(n) + 1;
  const double h = 1.0 / n;

  mesh.vertices_.reserve(np * np);
  mesh.boundary_.reserve(np * np);
  for (std::size_t j = 0; j < np; ++j) {
    for (std::size_t i = 0; i < np; ++i) {
      // i == n is written as exactly 1.0 so boundary detection is exact.
      const Vec2 p{i == np - 1 ? 1.0 : static_cast<double>(i) * h,
                   j == np - 1 ? 1.0 : static_cast<double>(j) * h};
      mesh.vertices_.push_back(p);
      mesh.boundary_.push_back(on_unit_square_boundary(p) ? 1 : 0);
    }
  }

  const auto nn = static_cast<std::size_t>(n);
  mesh.cells_.reserve(2 * nn * nn);
  for (std::size_t j = 0; j < nn; ++j) {
    for (std::size_t i = 0; i < nn; ++i) {
      const std::size_t v00 = j * np + i;
      const std::size_t v10 = v00 + 1;
      const std::size_t v01 = v00 + np;
      const std::size_t v11 = v01 + 1;
      mesh.cells_.push_back({v00, v10, v11});
      mesh.cells_.push_back({v00, v11, v01});
    }
  }
  return mesh;
}

double Mesh::cell_area(std::size_t k) const {
  const auto& c = cells_[k];
  const Vec2 a = vertices_[c[0]];
  return 0.5 * cross(vertices_[c[1]] - a, vertices_[c[2]] - a);
}

double Mesh::cell_diameter(std::size_t k) const {
  const auto& c = cells_[k];
  const Vec2 p0 = vertices_[c[0]], p1 = vertices_[c[1]], p2 = vertices_[c[2]];
  return std::max({norm(p1 - p0), norm(p2 - p1), norm(p0 - p2)});
}

std::size_t Mesh::locate(Vec2 p) const {
  if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
    throw std::invalid_argument("Mesh::locate: point outside the unit square");
  }
  const int i = std::min(static_cast<int>(p.x * n_), n_ - 1);
  const int j = std::min(static_cast<int>(p.y * n_), n_ - 1);
  const std::size_t square = static_cast<std::size_t>(j) * static_cast<std::size_t>(n_) +
                             static_cast<std::size_t>(i);
  const Vec2 origin = vertices_[cells_[2 * square][0]];
  const Vec2 local = p - origin;
  // Lower-right triangle lies on or below the diagonal.
  return local.x >= local.y ? 2 * square : 2 * square + 1;
}

}  // namespace supg
