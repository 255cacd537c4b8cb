#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "supg/fe_space.hpp"
#include "supg/parallel.hpp"
#include "supg/problem.hpp"

namespace supg {

/// Residual-plus-crosswind indicator used as the training cost:
///   C(u_h) = sum_K ||-eps Lap u_h + b . grad u_h - f||^2_K + sum_K q(s_K),
///   s_K = ||b_perp . grad u_h||_{L2(K)}.
struct IndicatorBreakdown {
  double residual_part{0.0};
  double crosswind_part{0.0};
  double total{0.0};
  std::vector<std::pair<double, double>> per_cell;  // (residual^2, q(s_K))
};

/// (b2, -b1) / |b|, or zero for b = 0.
Vec2 crosswind_direction(Vec2 b);

/// 2.5 s^2 - 1.5 s^3 for s <= 1, sqrt(s) above. C^1 at s = 1.
double q_smoother(double s);
double q_smoother_derivative(double s);

double cell_residual_sq(const FeFunction& u, const ProblemSpec& problem, std::size_t cell);
/// ||b_perp . grad u_h||_{L2(K)}.
double cell_crosswind_norm(const FeFunction& u, const ProblemSpec& problem, std::size_t cell);

IndicatorBreakdown total_cost(const FeFunction& u, const ProblemSpec& problem,
                              Execution exec = Execution::parallel);

/// Gradient of total_cost with respect to the coefficient vector of u.
Eigen::VectorXd cost_gradient_wrt_u(const FeFunction& u, const ProblemSpec& problem,
                                    Execution exec = Execution::parallel);

}  // namespace supg
