#include "supg/stabilization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "supg/quadrature.hpp"

namespace supg {

double peclet(double epsilon, Vec2 b, double h) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("peclet: epsilon must be positive");
  if (!(h > 0.0)) throw std::invalid_argument("peclet: h must be positive");
  return norm(b) * h / (2.0 * epsilon);
}

double tau_standard(double epsilon, Vec2 b, double h) {
  const double pe = peclet(epsilon, b, h);
  const double bn = norm(b);
  if (bn == 0.0) return 0.0;
  double bracket;
  if (pe < kTauSeriesThreshold) {
    bracket = pe / 3.0 - pe * pe * pe / 45.0;
  } else {
    bracket = 1.0 / std::tanh(pe) - 1.0 / pe;
  }
  return h / (2.0 * bn) * bracket;
}

GradNormField gradient_norms(const FeFunction& u, Execution exec) {
  const FeSpace& space = *u.space;
  const QuadratureRule& rule = cached_quadrature(kAssemblyQuadratureDegree);
  GradNormField out;
  out.values.resize(space.n_cells());
  for_each_cell(space.n_cells(), exec, [&](std::size_t k) {
    const CellGeometry& geo = space.geometry(k);
    const P2Values c = u.local(k);
    double integral = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const P2Gradients dphi = p2_gradients(rule.points[q], geo.grad_lambda);
      Vec2 g;
      for (std::size_t a = 0; a < kP2LocalDofs; ++a) g += c[a] * dphi[a];
      integral += rule.weights[q] * dot(g, g);
    }
    // Weights sum to 1/2, so 2 * integral is the cell average.
    out.values[k] = std::sqrt(2.0 * integral);
  });
  return out;
}

TauField scale_by_gradient(double tau, const GradNormField& grads, double floor) {
  if (!(floor > 0.0)) throw std::invalid_argument("gradient floor must be positive");
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("tau must be non-negative and finite");
  }
  TauField out;
  out.values.reserve(grads.size());
  for (double g : grads.values) out.values.push_back(tau / std::max(g, floor));
  return out;
}

TauField normalize_tau(double tau_hat, const GradNormField& grads, double floor) {
  if (!(tau_hat > 0.0 && tau_hat < 1.0)) {
    throw std::invalid_argument("normalize_tau: tau_hat must lie in (0, 1)");
  }
  return scale_by_gradient(tau_hat, grads, floor);
}

}  // namespace supg
