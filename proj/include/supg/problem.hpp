#pragma once

#include <functional>
#include <optional>
#include <string>

#include "supg/geometry.hpp"

namespace supg {

using ScalarField = std::function<double(Vec2)>;
using VectorField = std::function<Vec2(Vec2)>;

struct ExactSolution {
  ScalarField value;
  VectorField gradient;
};

/// -eps Lap u + b . grad u = f in (0,1)^2, u = u_b on the boundary.
struct ProblemSpec {
  std::string name;
  double epsilon{1.0};
  Vec2 b{};
  ScalarField source;
  ScalarField boundary;
  std::optional<ExactSolution> exact;

  /// Throws std::invalid_argument unless epsilon > 0 and both fields are set.
  void validate() const;
};

/// Problem with constant source and constant boundary value.
ProblemSpec constant_problem(double epsilon, Vec2 b, double source, double boundary_value);

}  // namespace supg
