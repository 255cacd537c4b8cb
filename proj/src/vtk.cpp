#include "supg/vtk.hpp"

#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace supg {

namespace {
constexpr int kVtkTriangle = 5;
// Sub-triangles of a P2 cell in local DoF numbering.
constexpr int kSubTriangles[4][3] = {{0, 3, 5}, {3, 1, 4}, {5, 4, 2}, {3, 4, 5}};
}  // namespace

void write_vtk_p2(std::ostream& os, const FeFunction& u, const std::string& name) {
  const FeSpace& space = *u.space;
  const auto coords = space.dofs().dof_coords();
  const std::size_t nc = space.n_cells();
  os << "# vtk DataFile Version 3.0\n" << name << " (P2, subdivided)\nASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << coords.size() << " double\n" << std::setprecision(17);
  for (const Vec2& p : coords) os << p.x << ' ' << p.y << " 0\n";
  os << "CELLS " << 4 * nc << ' ' << 16 * nc << '\n';
  for (std::size_t k = 0; k < nc; ++k) {
    const auto& cd = space.dofs().cell_dofs(k);
    for (const auto& sub : kSubTriangles) {
      os << "3 " << cd[static_cast<std::size_t>(sub[0])] << ' '
         << cd[static_cast<std::size_t>(sub[1])] << ' ' << cd[static_cast<std::size_t>(sub[2])]
         << '\n';
    }
  }
  os << "CELL_TYPES " << 4 * nc << '\n';
  for (std::size_t k = 0; k < 4 * nc; ++k) os << kVtkTriangle << '\n';
  os << "POINT_DATA " << coords.size() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : u.coefficients) os << v << '\n';
}

void write_vtk_cells(std::ostream& os, const FeSpace& space, const TauField& tau,
                     const std::string& name) {
  if (tau.size() != space.n_cells()) {
    throw std::invalid_argument("write_vtk_cells: tau size does not match the mesh");
  }
  const Mesh& mesh = space.mesh();
  os << "# vtk DataFile Version 3.0\n" << name << " (per cell)\nASCII\n";
  os << "DATASET UNSTRUCTURED_GRID\n";
  os << "POINTS " << mesh.n_vertices() << " double\n" << std::setprecision(17);
  for (const Vec2& p : mesh.vertices()) os << p.x << ' ' << p.y << " 0\n";
  os << "CELLS " << mesh.n_cells() << ' ' << 4 * mesh.n_cells() << '\n';
  for (const auto& c : mesh.cells()) os << "3 " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  os << "CELL_TYPES " << mesh.n_cells() << '\n';
  for (std::size_t k = 0; k < mesh.n_cells(); ++k) os << kVtkTriangle << '\n';
  os << "CELL_DATA " << mesh.n_cells() << "\nSCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
  for (double v : tau.values) os << v << '\n';
}

}  // namespace supg
