#pragma once

#include <array>
#include <vector>

namespace supg {

using Barycentric = std::array<double, 3>;

/// Symmetric quadrature on the reference triangle {(0,0),(1,0),(0,1)}.
/// Weights sum to the reference area 1/2. Points are barycentric
/// (lambda0, lambda1, lambda2) with reference coordinates (lambda1, lambda2).
struct QuadratureRule {
  int degree{0};
  std::vector<Barycentric> points;
  std::vector<double> weights;

  std::size_t size() const { return weights.size(); }
};

/// Smallest tabulated rule exact for polynomials of total degree
/// `min_degree` (1..6). Throws std::invalid_argument otherwise.
QuadratureRule quadrature(int min_degree);

/// Same rules, built once and shared.
const QuadratureRule& cached_quadrature(int min_degree);

inline constexpr int kAssemblyQuadratureDegree = 4;
inline constexpr int kErrorQuadratureDegree = 6;

}  // namespace supg
