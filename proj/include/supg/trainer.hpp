#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "supg/assembly.hpp"
#include "supg/error_indicator.hpp"
#include "supg/fields.hpp"
#include "supg/mlp.hpp"
#include "supg/stabilization.hpp"

namespace supg {

struct TrainConfig {
  int n_epochs{500};
  std::uint64_t seed{0};
  double lr{1e-4};
  double gamma{0.1};
  int step_size{100};
  double grad_floor{kDefaultGradientFloor};
  FeatureMode feature_mode{FeatureMode::peclet};
  int n_cells{40};

  /// Throws std::invalid_argument on n_epochs < 1, lr <= 0 and the like.
  void validate() const;
};

struct EpochRecord {
  int epoch{0};
  double tau_hat{0.0};
  double residual_part{0.0};
  double crosswind_part{0.0};
  double total{0.0};
  double lr{0.0};
};

struct TrainRecord {
  std::vector<EpochRecord> epochs;
  std::size_t best_epoch{0};
  double best_cost{0.0};
  MlpParams best_params;
  double best_tau_hat{0.0};
  TauField best_tau;
  std::optional<FeFunction> best_solution;
  GradNormField galerkin_grad_norms;
  bool aborted{false};
  std::string abort_reason;
};

/// Cost, solution and dC/dtau_K for one tau field, sharing a single LU
/// factorization between the forward and the adjoint solve.
struct CostEvaluation {
  FeFunction solution;
  IndicatorBreakdown cost;
  std::vector<double> dcost_dtau;
};

/// Solves A(tau) u = F(tau), evaluates the indicator and its gradient by the
/// adjoint method:
///   A^T lambda = dC/du,   dC/dtau_K = -lambda^T (dA/dtau_K u - dF/dtau_K),
/// where dA/dtau_K and dF/dtau_K are the cell-K SUPG blocks with Dirichlet
/// rows removed. Throws SolverFailure when either solve fails.
CostEvaluation evaluate_cost_and_gradient(const SupgOperator& op, const std::vector<double>& tau,
                                          Execution exec = Execution::parallel);

/// dC/dtau_K given a solution u_h of the SUPG system for `tau`.
std::vector<double> cost_gradient_wrt_tau(const SupgOperator& op, const TauField& tau,
                                          const FeFunction& u_h,
                                          Execution exec = Execution::parallel);

/// Indicator cost of the SUPG solution for an arbitrary (possibly slightly
/// negative) tau vector.
double cost_at(const SupgOperator& op, const std::vector<double>& tau);

struct FdCheckResult {
  double max_relative_error{0.0};
  std::vector<std::size_t> cells;
  std::vector<double> adjoint;
  std::vector<double> finite_difference;
};

/// Central differences (C(tau + delta e_K) - C(tau - delta e_K)) / (2 delta)
/// against the adjoint gradient on the given cells. The relative error of a
/// cell is |a - f| / max(|a|, |f|, 1e-8 max_K |a_K|).
FdCheckResult finite_difference_check(const SupgOperator& op, const TauField& tau, double delta,
                                      std::span<const std::size_t> cells);

/// `count` distinct cells drawn deterministically from `seed`.
std::vector<std::size_t> sample_cells(std::size_t n_cells, std::size_t count, std::uint64_t seed);

FeatureVector features_for(const ProblemSpec& problem, const FeSpace& space);

/// Per-epoch: tau_hat = net(features); tau_K = tau_hat / max(g_K, floor)
/// with g_K from the Galerkin solution (computed once); solve SUPG; cost;
/// dC/dtheta = (sum_K dC/dtau_K / max(g_K, floor)) dtau_hat/dtheta; Adam;
/// StepLR. Keeps the lowest-cost state. A solver failure stops training and
/// returns what was recorded so far with `aborted` set.
TrainRecord train(const SupgOperator& op, const TrainConfig& config,
                  Execution exec = Execution::parallel);

/// CSV with header epoch,tau_hat,residual_part,crosswind_part,total,lr.
void write_train_csv(std::ostream& os, const TrainRecord& record);

}  // namespace supg
