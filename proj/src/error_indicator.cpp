#include "supg/error_indicator.hpp"

#include <cmath>

#include "supg/quadrature.hpp"

namespace supg {

Vec2 crosswind_direction(Vec2 b) {
  const double n = norm(b);
  if (n == 0.0) return {0.0, 0.0};
  return {b.y / n, -b.x / n};
}

double q_smoother(double s) {
  if (s > 1.0) return std::sqrt(s);
  return 2.5 * s * s - 1.5 * s * s * s;
}

double q_smoother_derivative(double s) {
  if (s > 1.0) return 0.5 / std::sqrt(s);
  return 5.0 * s - 4.5 * s * s;
}

namespace {

// q'(s) / s, finite at s = 0 (the cubic branch has no linear term).
double q_derivative_over_s(double s) {
  if (s > 1.0) return 0.5 / (s * std::sqrt(s));
  return 5.0 - 4.5 * s;
}

struct CellTerms {
  double residual_sq{0.0};
  double crosswind_sq{0.0};
};

CellTerms cell_terms(const FeFunction& u, const ProblemSpec& problem, std::size_t k) {
  const FeSpace& space = *u.space;
  const CellGeometry& geo = space.geometry(k);
  const QuadratureRule& rule = cached_quadrature(kAssemblyQuadratureDegree);
  const P2Values c = u.local(k);
  const P2Values lap = p2_laplacians(geo.grad_lambda);
  const Vec2 bp = crosswind_direction(problem.b);
  double lap_u = 0.0;
  for (std::size_t a = 0; a < kP2LocalDofs; ++a) lap_u += c[a] * lap[a];

  CellTerms t;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const Barycentric& l = rule.points[q];
    const double w = 2.0 * geo.area * rule.weights[q];
    const P2Gradients dphi = p2_gradients(l, geo.grad_lambda);
    Vec2 g;
    for (std::size_t a = 0; a < kP2LocalDofs; ++a) g += c[a] * dphi[a];
    const double r = -problem.epsilon * lap_u + dot(problem.b, g) - problem.source(geo.map(l));
    const double cw = dot(bp, g);
    t.residual_sq += w * r * r;
    t.crosswind_sq += w * cw * cw;
  }
  return t;
}

}  // namespace

double cell_residual_sq(const FeFunction& u, const ProblemSpec& problem, std::size_t cell) {
  return cell_terms(u, problem, cell).residual_sq;
}

double cell_crosswind_norm(const FeFunction& u, const ProblemSpec& problem, std::size_t cell) {
  return std::sqrt(cell_terms(u, problem, cell).crosswind_sq);
}

IndicatorBreakdown total_cost(const FeFunction& u, const ProblemSpec& problem, Execution exec) {
  const std::size_t nc = u.space->n_cells();
  IndicatorBreakdown out;
  out.per_cell.resize(nc);
  for_each_cell(nc, exec, [&](std::size_t k) {
    const CellTerms t = cell_terms(u, problem, k);
    out.per_cell[k] = {t.residual_sq, q_smoother(std::sqrt(t.crosswind_sq))};
  });
  for (const auto& [r, q] : out.per_cell) {
    out.residual_part += r;
    out.crosswind_part += q;
  }
  out.total = out.residual_part + out.crosswind_part;
  return out;
}

Eigen::VectorXd cost_gradient_wrt_u(const FeFunction& u, const ProblemSpec& problem,
                                    Execution exec) {
  const FeSpace& space = *u.space;
  const std::size_t nc = space.n_cells();
  const QuadratureRule& rule = cached_quadrature(kAssemblyQuadratureDegree);
  const Vec2 bp = crosswind_direction(problem.b);
  std::vector<P2Values> local(nc);

  for_each_cell(nc, exec, [&](std::size_t k) {
    const CellGeometry& geo = space.geometry(k);
    const P2Values c = u.local(k);
    const P2Values lap = p2_laplacians(geo.grad_lambda);
    double lap_u = 0.0;
    for (std::size_t a = 0; a < kP2LocalDofs; ++a) lap_u += c[a] * lap[a];

    P2Values d_residual{}, d_crosswind{};
    double crosswind_sq = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Barycentric& l = rule.points[q];
      const double w = 2.0 * geo.area * rule.weights[q];
      const P2Gradients dphi = p2_gradients(l, geo.grad_lambda);
      Vec2 g;
      for (std::size_t a = 0; a < kP2LocalDofs; ++a) g += c[a] * dphi[a];
      const double r = -problem.epsilon * lap_u + dot(problem.b, g) - problem.source(geo.map(l));
      const double cw = dot(bp, g);
      crosswind_sq += w * cw * cw;
      for (std::size_t j = 0; j < kP2LocalDofs; ++j) {
        d_residual[j] += 2.0 * w * r * (-problem.epsilon * lap[j] + dot(problem.b, dphi[j]));
        d_crosswind[j] += w * cw * dot(bp, dphi[j]);
      }
    }
    // d q(s)/du_j = q'(s) / s * int_K (b_perp . grad u)(b_perp . grad phi_j)
    const double factor = q_derivative_over_s(std::sqrt(crosswind_sq));
    for (std::size_t j = 0; j < kP2LocalDofs; ++j) {
      local[k][j] = d_residual[j] + factor * d_crosswind[j];
    }
  });

  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(space.n_dofs()));
  for (std::size_t k = 0; k < nc; ++k) {
    const auto& cd = space.dofs().cell_dofs(k);
    for (std::size_t j = 0; j < kP2LocalDofs; ++j) {
      grad[static_cast<Eigen::Index>(cd[j])] += local[k][j];
    }
  }
  return grad;
}

}  // namespace supg
