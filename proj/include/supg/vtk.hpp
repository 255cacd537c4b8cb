#pragma once

#include <iosfwd>
#include <string>

#include "supg/fe_space.hpp"
#include "supg/fields.hpp"

namespace supg {

/// Legacy ASCII unstructured grid. Every P2 cell is written as four linear
/// sub-triangles over its six DoF points, with the coefficients as point data.
void write_vtk_p2(std::ostream& os, const FeFunction& u, const std::string& name = "u");

/// Legacy ASCII unstructured grid of the mesh cells with tau_K as cell data.
void write_vtk_cells(std::ostream& os, const FeSpace& space, const TauField& tau,
                     const std::string& name = "tau");

}  // namespace supg
