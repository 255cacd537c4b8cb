#include "supg/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <stdexcept>

namespace supg {

void TrainConfig::validate() const {
  if (n_epochs < 1) throw std::invalid_argument("TrainConfig: n_epochs must be >= 1");
  if (!(lr > 0.0)) throw std::invalid_argument("TrainConfig: lr must be positive");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("TrainConfig: gamma in (0,1]");
  if (step_size < 1) throw std::invalid_argument("TrainConfig: step_size must be >= 1");
  if (!(grad_floor > 0.0)) throw std::invalid_argument("TrainConfig: grad_floor must be > 0");
  if (n_cells < 1) throw std::invalid_argument("TrainConfig: n_cells must be >= 1");
}

namespace {

std::vector<double> adjoint_tau_gradient(const SupgOperator& op, const FeFunction& u,
                                         const Eigen::VectorXd& lambda, Execution exec) {
  const FeSpace& space = *op.space();
  const DofMapP2& dofs = space.dofs();
  const CellBlocks& blocks = op.blocks();
  std::vector<double> grad(space.n_cells(), 0.0);
  for_each_cell(space.n_cells(), exec, [&](std::size_t k) {
    const auto& cd = dofs.cell_dofs(k);
    const P2Values uk = u.local(k);
    const LocalMatrix& s = blocks.supg_matrix[k];
    const LocalVector& sr = blocks.supg_rhs[k];
    double acc = 0.0;
    for (std::size_t a = 0; a < kP2LocalDofs; ++a) {
      if (dofs.is_boundary(cd[a])) continue;
      double row = -sr[a];
      for (std::size_t b = 0; b < kP2LocalDofs; ++b) row += s[6 * a + b] * uk[b];
      acc += lambda[static_cast<Eigen::Index>(cd[a])] * row;
    }
    grad[k] = -acc;
  });
  return grad;
}

FeFunction to_function(const SpacePtr& space, const Eigen::VectorXd& x) {
  return FeFunction(space, std::vector<double>(x.data(), x.data() + x.size()));
}

}  // namespace

CostEvaluation evaluate_cost_and_gradient(const SupgOperator& op, const std::vector<double>& tau,
                                          Execution exec) {
  const SparseSystem sys = op.system_unchecked(tau);
  const LinearSolver solver(sys.matrix);
  FeFunction u = to_function(op.space(), solver.solve(sys.rhs));
  IndicatorBreakdown cost = total_cost(u, op.problem(), exec);
  const Eigen::VectorXd lambda = solver.solve_transpose(cost_gradient_wrt_u(u, op.problem(), exec));
  std::vector<double> grad = adjoint_tau_gradient(op, u, lambda, exec);
  return {std::move(u), std::move(cost), std::move(grad)};
}

std::vector<double> cost_gradient_wrt_tau(const SupgOperator& op, const TauField& tau,
                                          const FeFunction& u_h, Execution exec) {
  tau.validate(op.space()->n_cells());
  const SparseSystem sys = op.system(&tau);
  const LinearSolver solver(sys.matrix);
  const Eigen::VectorXd lambda = solver.solve_transpose(cost_gradient_wrt_u(u_h, op.problem(), exec));
  return adjoint_tau_gradient(op, u_h, lambda, exec);
}

double cost_at(const SupgOperator& op, const std::vector<double>& tau) {
  const SparseSystem sys = op.system_unchecked(tau);
  const FeFunction u = solve_linear(sys);
  return total_cost(u, op.problem()).total;
}

FdCheckResult finite_difference_check(const SupgOperator& op, const TauField& tau, double delta,
                                      std::span<const std::size_t> cells) {
  if (!(delta > 0.0)) throw std::invalid_argument("finite_difference_check: delta must be > 0");
  tau.validate(op.space()->n_cells());
  const CostEvaluation base = evaluate_cost_and_gradient(op, tau.values);

  FdCheckResult out;
  out.cells.assign(cells.begin(), cells.end());
  double scale = 0.0;
  for (double g : base.dcost_dtau) scale = std::max(scale, std::abs(g));
  for (std::size_t k : cells) {
    std::vector<double> plus = tau.values, minus = tau.values;
    plus[k] += delta;
    minus[k] -= delta;
    const double fd = (cost_at(op, plus) - cost_at(op, minus)) / (2.0 * delta);
    const double adj = base.dcost_dtau[k];
    const double denom = std::max({std::abs(adj), std::abs(fd), 1e-8 * scale});
    const double rel = denom > 0.0 ? std::abs(adj - fd) / denom : 0.0;
    out.adjoint.push_back(adj);
    out.finite_difference.push_back(fd);
    out.max_relative_error = std::max(out.max_relative_error, rel);
  }
  return out;
}

std::vector<std::size_t> sample_cells(std::size_t n_cells, std::size_t count, std::uint64_t seed) {
  std::vector<std::size_t> all(n_cells);
  for (std::size_t k = 0; k < n_cells; ++k) all[k] = k;
  if (count >= n_cells) return all;
  std::mt19937_64 gen(seed);
  // Partial Fisher-Yates with a plain modulo draw, identical on every standard library.
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(gen() % (n_cells - i));
    std::swap(all[i], all[j]);
  }
  all.resize(count);
  std::sort(all.begin(), all.end());
  return all;
}

FeatureVector features_for(const ProblemSpec& problem, const FeSpace& space) {
  return {problem.epsilon, problem.b.x, problem.b.y, space.h()};
}

TrainRecord train(const SupgOperator& op, const TrainConfig& config, Execution exec) {
  config.validate();
  const FeSpace& space = *op.space();
  const std::size_t nc = space.n_cells();

  TrainRecord rec;
  const FeFunction u_galerkin = op.solve(nullptr);
  rec.galerkin_grad_norms = gradient_norms(u_galerkin, exec);
  std::vector<double> inv_denominator(nc);
  for (std::size_t k = 0; k < nc; ++k) {
    inv_denominator[k] = 1.0 / std::max(rec.galerkin_grad_norms[k], config.grad_floor);
  }

  const FeatureVector features = features_for(op.problem(), space);
  const auto input = features.network_input(config.feature_mode);
  MlpParams params = init_params(config.seed);
  AdamState adam = make_adam_state(params.size(), config.lr, config.step_size, config.gamma);

  rec.best_cost = std::numeric_limits<double>::infinity();
  for (int epoch = 0; epoch < config.n_epochs; ++epoch) {
    const ForwardResult fr = forward(params, input);
    TauField tau = normalize_tau(fr.tau_hat, rec.galerkin_grad_norms, config.grad_floor);

    CostEvaluation eval;
    try {
      eval = evaluate_cost_and_gradient(op, tau.values, exec);
    } catch (const SolverFailure& e) {
      rec.aborted = true;
      rec.abort_reason = e.what();
      break;
    }

    rec.epochs.push_back({epoch, fr.tau_hat, eval.cost.residual_part, eval.cost.crosswind_part,
                          eval.cost.total, adam.lr});
    if (eval.cost.total < rec.best_cost) {
      rec.best_cost = eval.cost.total;
      rec.best_epoch = static_cast<std::size_t>(epoch);
      rec.best_params = params;
      rec.best_tau_hat = fr.tau_hat;
      rec.best_tau = std::move(tau);
      rec.best_solution = std::move(eval.solution);
    }

    double upstream = 0.0;
    for (std::size_t k = 0; k < nc; ++k) upstream += eval.dcost_dtau[k] * inv_denominator[k];
    adam_step(params, backward(params, fr.cache, upstream), adam);
    steplr_update(adam, epoch + 1);
  }
  return rec;
}

void write_train_csv(std::ostream& os, const TrainRecord& record) {
  os << "epoch,tau_hat,residual_part,crosswind_part,total,lr\n";
  os << std::setprecision(17);
  for (const auto& e : record.epochs) {
    os << e.epoch << ',' << e.tau_hat << ',' << e.residual_part << ',' << e.crosswind_part << ','
       << e.total << ',' << e.lr << '\n';
  }
}

}  // namespace supg
