#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "supg/geometry.hpp"
#include "supg/mesh.hpp"
#include "supg/p2_basis.hpp"

namespace supg {

using CellDofs = std::array<std::size_t, kP2LocalDofs>;

/// Continuous P2 degree-of-freedom numbering.
///
/// Vertex DoFs come first and keep the mesh vertex numbers; edge-midpoint
/// DoFs follow, numbered by ascending (min vertex, max vertex) pair.
class DofMapP2 {
 public:
  static DofMapP2 build(const Mesh& mesh);

  std::size_t n_dofs() const { return coords_.size(); }
  std::size_t n_cells() const { return cell_dofs_.size(); }
  const CellDofs& cell_dofs(std::size_t k) const { return cell_dofs_[k]; }
  std::span<const Vec2> dof_coords() const { return coords_; }
  const Vec2& dof_coord(std::size_t i) const { return coords_[i]; }
  bool is_boundary(std::size_t i) const { return boundary_[i] != 0; }
  std::size_t n_boundary_dofs() const;

 private:
  std::vector<CellDofs> cell_dofs_;
  std::vector<Vec2> coords_;
  std::vector<char> boundary_;
};

inline DofMapP2 build_dof_map(const Mesh& mesh) { return DofMapP2::build(mesh); }

/// Affine data of one triangle.
struct CellGeometry {
  std::array<Vec2, 3> vertices;
  BarycentricGradients grad_lambda;
  double area{0.0};
  double diameter{0.0};

  Vec2 map(const Barycentric& l) const {
    return l[0] * vertices[0] + l[1] * vertices[1] + l[2] * vertices[2];
  }
  Barycentric barycentric(Vec2 p) const;
};

/// Row-compressed pattern of the P2 stiffness matrix plus, per cell, the
/// position of each local (row, col) entry in the value array.
struct SparsityPattern {
  std::vector<int> row_offsets;
  std::vector<int> columns;
  std::vector<std::size_t> cell_slots;  // n_cells * 36, row-major local blocks
  std::vector<std::size_t> diagonal;    // slot of (i, i)

  std::size_t nnz() const { return columns.size(); }
  std::size_t slot(std::size_t cell, int a, int b) const {
    return cell_slots[cell * kP2LocalDofs * kP2LocalDofs +
                      static_cast<std::size_t>(a * kP2LocalDofs + b)];
  }
};

/// Mesh, DoF map, cell geometry and matrix pattern. Immutable and shared.
class FeSpace {
 public:
  explicit FeSpace(Mesh mesh);

  const Mesh& mesh() const { return mesh_; }
  const DofMapP2& dofs() const { return dofs_; }
  const SparsityPattern& pattern() const { return pattern_; }
  const CellGeometry& geometry(std::size_t k) const { return geometry_[k]; }
  std::size_t n_cells() const { return mesh_.n_cells(); }
  std::size_t n_dofs() const { return dofs_.n_dofs(); }
  int cells_per_side() const { return mesh_.cells_per_side(); }
  /// Uniform cell diameter sqrt(2)/N.
  double h() const { return geometry_.front().diameter; }

 private:
  Mesh mesh_;
  DofMapP2 dofs_;
  std::vector<CellGeometry> geometry_;
  SparsityPattern pattern_;
};

using SpacePtr = std::shared_ptr<const FeSpace>;

SpacePtr make_space(int cells_per_side);

/// Piecewise-quadratic function u_h = sum_i c_i phi_i.
struct FeFunction {
  SpacePtr space;
  std::vector<double> coefficients;

  FeFunction() = default;
  explicit FeFunction(SpacePtr s);
  FeFunction(SpacePtr s, std::vector<double> c);

  std::size_t size() const { return coefficients.size(); }
  P2Values local(std::size_t cell) const;
};

template <typename Fn>
FeFunction interpolate(const SpacePtr& space, Fn&& g) {
  FeFunction u(space);
  const auto coords = space->dofs().dof_coords();
  for (std::size_t i = 0; i < coords.size(); ++i) u.coefficients[i] = g(coords[i]);
  return u;
}

/// Value at a point of the unit square; throws std::invalid_argument outside.
double evaluate_fe(const FeFunction& u, Vec2 point);
Vec2 evaluate_fe_gradient(const FeFunction& u, Vec2 point);

}  // namespace supg
