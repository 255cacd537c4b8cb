#include "supg/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "supg/assembly.hpp"
#include "supg/error_indicator.hpp"
#include "supg/quadrature.hpp"
#include "supg/stabilization.hpp"

namespace supg {

ExampleId example_from_int(int id) {
  if (id < 1 || id > 4) {
    throw std::invalid_argument("unknown example id " + std::to_string(id) + " (expected 1..4)");
  }
  return static_cast<ExampleId>(id);
}

namespace {

constexpr double kEpsilon = 1e-8;
constexpr double kExponentFloor = -700.0;
constexpr double kCoordTol = 1e-12;

double clamped_exp(double arg) { return std::exp(std::max(arg, kExponentFloor)); }

bool inside_box(Vec2 p) { return std::abs(p.x - 0.5) < 0.25 && std::abs(p.y - 0.5) < 0.25; }

ProblemSpec example1() {
  ProblemSpec p;
  p.name = "example1";
  p.epsilon = kEpsilon;
  p.b = {1.0, 0.0};
  p.source = [](Vec2) { return 1.0; };
  p.boundary = [](Vec2) { return 0.0; };
  p.exact = ExactSolution{
      [](Vec2 q) { return on_unit_square_boundary(q) ? 0.0 : q.x; },
      [](Vec2) { return Vec2{1.0, 0.0}; },
  };
  return p;
}

ProblemSpec example3() {
  ProblemSpec p;
  p.name = "example3";
  p.epsilon = kEpsilon;
  const double theta = -std::numbers::pi / 3.0;
  p.b = {std::cos(theta), std::sin(theta)};
  p.source = [](Vec2) { return 0.0; };
  p.boundary = [](Vec2 q) {
    return (std::abs(q.x - 1.0) <= kCoordTol || q.y <= 0.7 + kCoordTol) ? 0.0 : 1.0;
  };
  p.exact = ExactSolution{
      [bc = p.boundary](Vec2 q) {
        return on_unit_square_boundary(q) ? bc(q) : example3_reduced_solution(q);
      },
      [](Vec2) { return Vec2{0.0, 0.0}; },
  };
  return p;
}

ProblemSpec example4() {
  ProblemSpec p;
  p.name = "example4";
  p.epsilon = kEpsilon;
  p.b = {1.0, 0.0};
  p.source = [](Vec2 q) { return inside_box(q) ? -32.0 * (q.x - 0.5) : 0.0; };
  p.boundary = [](Vec2) { return 0.0; };
  p.exact = ExactSolution{
      [](Vec2 q) { return inside_box(q) ? -16.0 * (q.x - 0.25) * (q.x - 0.75) : 0.0; },
      [](Vec2 q) { return inside_box(q) ? Vec2{-32.0 * (q.x - 0.5), 0.0} : Vec2{0.0, 0.0}; },
  };
  return p;
}

}  // namespace

double example3_reduced_solution(Vec2 p) {
  return p.y + std::sqrt(3.0) * p.x > 0.7 ? 1.0 : 0.0;
}

ProblemSpec example2_problem(double eps) {
  ProblemSpec p;
  p.name = "example2";
  p.epsilon = eps;
  p.b = {2.0, 3.0};
  // Layer factors e1 = exp(3(y-1)/eps), e2 = exp(2(x-1)/eps), e3 = e1 e2.
  p.source = [eps](Vec2 q) {
    const double e1 = clamped_exp(3.0 * (q.y - 1.0) / eps);
    const double e2 = clamped_exp(2.0 * (q.x - 1.0) / eps);
    return 2.0 * q.y * q.y + 6.0 * q.x * q.y - 2.0 * eps * q.x + e2 * (2.0 * eps - 6.0 * q.y) -
           2.0 * e1;
  };
  p.boundary = [](Vec2) { return 0.0; };
  p.exact = ExactSolution{
      [eps](Vec2 q) {
        const double e1 = clamped_exp(3.0 * (q.y - 1.0) / eps);
        const double e2 = clamped_exp(2.0 * (q.x - 1.0) / eps);
        const double e3 = clamped_exp((2.0 * (q.x - 1.0) + 3.0 * (q.y - 1.0)) / eps);
        return q.x * q.y * q.y - q.x * e1 - q.y * q.y * e2 + e3;
      },
      [eps](Vec2 q) {
        const double e1 = clamped_exp(3.0 * (q.y - 1.0) / eps);
        const double e2 = clamped_exp(2.0 * (q.x - 1.0) / eps);
        const double e3 = clamped_exp((2.0 * (q.x - 1.0) + 3.0 * (q.y - 1.0)) / eps);
        return Vec2{q.y * q.y - e1 - q.y * q.y * (2.0 / eps) * e2 + (2.0 / eps) * e3,
                    2.0 * q.x * q.y - q.x * (3.0 / eps) * e1 - 2.0 * q.y * e2 + (3.0 / eps) * e3};
      },
  };
  return p;
}

ProblemSpec example(ExampleId id) {
  switch (id) {
    case ExampleId::ex1:
      return example1();
    case ExampleId::ex2:
      return example2_problem(kEpsilon);
    case ExampleId::ex3:
      return example3();
    case ExampleId::ex4:
      return example4();
  }
  throw std::invalid_argument("unknown example id");
}

ErrorReport compute_errors(const FeFunction& u_h, const ProblemSpec& problem, Execution exec) {
  if (!problem.exact) {
    throw UnsupportedMetric("compute_errors: problem '" + problem.name +
                            "' has no exact solution");
  }
  const ExactSolution& exact = *problem.exact;
  const FeSpace& space = *u_h.space;
  const std::size_t nc = space.n_cells();
  const QuadratureRule& rule = cached_quadrature(kErrorQuadratureDegree);

  std::vector<std::array<double, 2>> cell_err(nc);
  for_each_cell(nc, exec, [&](std::size_t k) {
    const CellGeometry& geo = space.geometry(k);
    const P2Values c = u_h.local(k);
    double l2 = 0.0, semi = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Barycentric& l = rule.points[q];
      const double w = 2.0 * geo.area * rule.weights[q];
      const Vec2 x = geo.map(l);
      const P2Values phi = p2_values(l);
      const P2Gradients dphi = p2_gradients(l, geo.grad_lambda);
      double uh = 0.0;
      Vec2 guh;
      for (std::size_t a = 0; a < kP2LocalDofs; ++a) {
        uh += c[a] * phi[a];
        guh += c[a] * dphi[a];
      }
      const double e = uh - exact.value(x);
      const Vec2 ge = guh - exact.gradient(x);
      l2 += w * e * e;
      semi += w * dot(ge, ge);
    }
    cell_err[k] = {l2, semi};
  });

  ErrorReport r;
  double l2sq = 0.0, semisq = 0.0;
  for (const auto& [a, b] : cell_err) {
    l2sq += a;
    semisq += b;
  }
  r.l2 = std::sqrt(l2sq);
  r.h1_semi = std::sqrt(semisq);
  r.h1 = std::sqrt(l2sq + semisq);

  double diff_sq = 0.0, ref_sq = 0.0, linf = 0.0;
  const auto coords = space.dofs().dof_coords();
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double u = exact.value(coords[i]);
    const double d = u_h.coefficients[i] - u;
    diff_sq += d * d;
    ref_sq += u * u;
    linf = std::max(linf, std::abs(d));
  }
  r.rel_l2 = ref_sq > 0.0 ? std::sqrt(diff_sq / ref_sq) : std::sqrt(diff_sq);

  const int m = kLinfSamplesPerSide;
  std::vector<double> row_max(static_cast<std::size_t>(m), 0.0);
  for_each_cell(static_cast<std::size_t>(m), exec, [&](std::size_t j) {
    double best = 0.0;
    const double y = static_cast<double>(j) / (m - 1);
    for (int i = 0; i < m; ++i) {
      const Vec2 p{static_cast<double>(i) / (m - 1), y};
      best = std::max(best, std::abs(evaluate_fe(u_h, p) - exact.value(p)));
    }
    row_max[j] = best;
  });
  for (double v : row_max) linf = std::max(linf, v);
  r.linf = linf;

  r.residual = std::sqrt(total_cost(u_h, problem, exec).residual_part);
  return r;
}

double nodal_overshoot(const FeFunction& u_h, const ProblemSpec& problem) {
  if (!problem.exact) throw UnsupportedMetric("nodal_overshoot: no exact solution");
  const auto coords = u_h.space->dofs().dof_coords();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  double ulo = lo, uhi = -lo;
  for (std::size_t i = 0; i < coords.size(); ++i) {
    const double u = problem.exact->value(coords[i]);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    ulo = std::min(ulo, u_h.coefficients[i]);
    uhi = std::max(uhi, u_h.coefficients[i]);
  }
  return std::max({0.0, uhi - hi, lo - ulo});
}

TauMode parse_tau_mode(const std::string& s) {
  if (s == "galerkin") return TauMode::galerkin;
  if (s == "standard") return TauMode::standard;
  if (s == "standard-normalized") return TauMode::standard_normalized;
  if (s == "trained") return TauMode::trained;
  throw std::invalid_argument("unknown tau mode '" + s +
                              "' (expected galerkin|standard|standard-normalized|trained)");
}

std::string to_string(TauMode m) {
  switch (m) {
    case TauMode::galerkin:
      return "galerkin";
    case TauMode::standard:
      return "standard";
    case TauMode::standard_normalized:
      return "standard-normalized";
    case TauMode::trained:
      return "trained";
  }
  return "unknown";
}

SolveOutcome solve_with_mode(const ProblemSpec& problem, const SpacePtr& space, TauMode mode,
                             const TrainConfig& train_config, Execution exec) {
  const SupgOperator op(problem, space, exec);
  const double tau_std = tau_standard(problem.epsilon, problem.b, space->h());
  switch (mode) {
    case TauMode::galerkin:
      return {op.solve(nullptr), std::nullopt, 0.0, std::nullopt};
    case TauMode::standard: {
      TauField tau = TauField::constant(space->n_cells(), tau_std);
      FeFunction u = op.solve(&tau);
      return {std::move(u), std::move(tau), tau_std, std::nullopt};
    }
    case TauMode::standard_normalized: {
      const FeFunction u_gal = op.solve(nullptr);
      TauField tau = scale_by_gradient(tau_std, gradient_norms(u_gal, exec), train_config.grad_floor);
      FeFunction u = op.solve(&tau);
      return {std::move(u), std::move(tau), tau_std, std::nullopt};
    }
    case TauMode::trained: {
      TrainRecord rec = train(op, train_config, exec);
      if (!rec.best_solution) {
        throw SolverFailure("training stopped before any epoch completed: " + rec.abort_reason,
                            std::numeric_limits<double>::infinity());
      }
      FeFunction u = *rec.best_solution;
      TauField tau = rec.best_tau;
      const double tau_hat = rec.best_tau_hat;
      return {std::move(u), std::move(tau), tau_hat, std::move(rec)};
    }
  }
  throw std::invalid_argument("unknown tau mode");
}

std::vector<StudyRow> convergence_study(const ProblemSpec& problem, TauMode mode,
                                        const std::vector<int>& ns,
                                        const TrainConfig& train_config) {
  if (ns.empty()) throw std::invalid_argument("convergence_study: no mesh sizes given");
  for (std::size_t i = 1; i < ns.size(); ++i) {
    if (ns[i] != 2 * ns[i - 1]) {
      throw std::invalid_argument("convergence_study: each N must double the previous one");
    }
  }
  std::vector<StudyRow> rows;
  for (int n : ns) {
    const SpacePtr space = make_space(n);
    TrainConfig cfg = train_config;
    cfg.n_cells = n;
    const SolveOutcome out = solve_with_mode(problem, space, mode, cfg);
    StudyRow row{n, space->h(), compute_errors(out.solution, problem), std::nullopt};
    if (!rows.empty() && row.errors.l2 > 0.0) {
      row.l2_order = std::log2(rows.back().errors.l2 / row.errors.l2);
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace supg
