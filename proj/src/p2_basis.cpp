#include "supg/p2_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace supg {

namespace {
constexpr double kSimplexTol = 1e-12;
constexpr BarycentricGradients kReferenceLambdaGradients = {Vec2{-1.0, -1.0}, Vec2{1.0, 0.0},
                                                            Vec2{0.0, 1.0}};
}  // namespace

P2Values p2_values(const Barycentric& l) {
  return {l[0] * (2.0 * l[0] - 1.0), l[1] * (2.0 * l[1] - 1.0), l[2] * (2.0 * l[2] - 1.0),
          4.0 * l[0] * l[1],         4.0 * l[1] * l[2],         4.0 * l[2] * l[0]};
}

P2Gradients p2_gradients(const Barycentric& l, const BarycentricGradients& gl) {
  return {(4.0 * l[0] - 1.0) * gl[0],
          (4.0 * l[1] - 1.0) * gl[1],
          (4.0 * l[2] - 1.0) * gl[2],
          4.0 * (l[0] * gl[1] + l[1] * gl[0]),
          4.0 * (l[1] * gl[2] + l[2] * gl[1]),
          4.0 * (l[2] * gl[0] + l[0] * gl[2])};
}

P2Values p2_laplacians(const BarycentricGradients& gl) {
  return {4.0 * dot(gl[0], gl[0]), 4.0 * dot(gl[1], gl[1]), 4.0 * dot(gl[2], gl[2]),
          8.0 * dot(gl[0], gl[1]), 8.0 * dot(gl[1], gl[2]), 8.0 * dot(gl[2], gl[0])};
}

P2Eval eval_p2_basis(const Barycentric& bary) {
  for (double c : bary) {
    if (!(c >= -kSimplexTol && c <= 1.0 + kSimplexTol)) {
      throw std::invalid_argument("eval_p2_basis: barycentric coordinate outside [0,1]");
    }
  }
  if (std::abs(bary[0] + bary[1] + bary[2] - 1.0) > kSimplexTol) {
    throw std::invalid_argument("eval_p2_basis: barycentric coordinates must sum to 1");
  }
  return {p2_values(bary), p2_gradients(bary, kReferenceLambdaGradients)};
}

}  // namespace supg
