#pragma once

#include <array>

#include "supg/geometry.hpp"
#include "supg/quadrature.hpp"

namespace supg {

// Local P2 numbering: 0,1,2 are the vertex functions lambda_i (2 lambda_i - 1);
// 3,4,5 are the midpoint functions on edges (0,1), (1,2), (2,0).
inline constexpr int kP2LocalDofs = 6;
inline constexpr std::array<std::array<int, 2>, 3> kP2LocalEdges = {{{0, 1}, {1, 2}, {2, 0}}};

using P2Values = std::array<double, kP2LocalDofs>;
using P2Gradients = std::array<Vec2, kP2LocalDofs>;
using BarycentricGradients = std::array<Vec2, 3>;

struct P2Eval {
  P2Values values;
  P2Gradients ref_gradients;  // with respect to reference (xi, eta)
};

/// Values and reference gradients at a barycentric point. Throws
/// std::invalid_argument when the point lies outside the simplex.
P2Eval eval_p2_basis(const Barycentric& bary);

P2Values p2_values(const Barycentric& l);

/// Gradients for a cell whose barycentric coordinates have gradients `gl`.
P2Gradients p2_gradients(const Barycentric& l, const BarycentricGradients& gl);

/// Laplacians, constant over the cell.
P2Values p2_laplacians(const BarycentricGradients& gl);

}  // namespace supg
