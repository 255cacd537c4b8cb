#include "supg/problem.hpp"

#include <cmath>
#include <stdexcept>

#include "supg/fields.hpp"

namespace supg {

void ProblemSpec::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("ProblemSpec: epsilon must be positive and finite");
  }
  if (!std::isfinite(b.x) || !std::isfinite(b.y)) {
    throw std::invalid_argument("ProblemSpec: convection field must be finite");
  }
  if (!source || !boundary) {
    throw std::invalid_argument("ProblemSpec: source and boundary data are required");
  }
}

ProblemSpec constant_problem(double epsilon, Vec2 b, double source, double boundary_value) {
  ProblemSpec p;
  p.name = "custom";
  p.epsilon = epsilon;
  p.b = b;
  p.source = [source](Vec2) { return source; };
  p.boundary = [boundary_value](Vec2) { return boundary_value; };
  p.validate();
  return p;
}

void TauField::validate(std::size_t n_cells) const {
  if (values.size() != n_cells) {
    throw std::invalid_argument("TauField: expected one value per cell");
  }
  for (double t : values) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("TauField: values must be non-negative and finite");
    }
  }
}

}  // namespace supg
