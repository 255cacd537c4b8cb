#pragma once

#include "supg/fe_space.hpp"
#include "supg/fields.hpp"
#include "supg/geometry.hpp"
#include "supg/parallel.hpp"

namespace supg {

/// Cell Peclet number |b| h / (2 eps). Throws std::invalid_argument unless
/// eps > 0 and h > 0.
double peclet(double epsilon, Vec2 b, double h);

/// tau_std = h / (2|b|) (coth(Pe) - 1/Pe); zero when b = 0. Below
/// Pe = 1e-4 the bracket is evaluated by its series Pe/3 - Pe^3/45.
double tau_standard(double epsilon, Vec2 b, double h);

inline constexpr double kTauSeriesThreshold = 1e-4;
inline constexpr double kDefaultGradientFloor = 1e-3;

/// Per-cell sqrt(|K|^-1 int_K |grad u|^2).
GradNormField gradient_norms(const FeFunction& u, Execution exec = Execution::parallel);

/// tau_K = tau_hat / max(g_K, floor). Throws std::invalid_argument for a
/// non-positive floor or a tau_hat outside (0, 1).
TauField normalize_tau(double tau_hat, const GradNormField& grads,
                       double floor = kDefaultGradientFloor);

/// tau_K = tau / max(g_K, floor) for any tau >= 0; used for the normalized
/// standard baseline where tau_std need not lie in (0, 1).
TauField scale_by_gradient(double tau, const GradNormField& grads,
                           double floor = kDefaultGradientFloor);

}  // namespace supg
