#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "supg/fe_space.hpp"
#include "supg/fields.hpp"
#include "supg/parallel.hpp"
#include "supg/problem.hpp"

namespace supg {

using LocalMatrix = std::array<double, kP2LocalDofs * kP2LocalDofs>;  // (row i, col j) at 6*i+j
using LocalVector = std::array<double, kP2LocalDofs>;
using RowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Cell contributions of the discrete operator. The SUPG system is affine in
/// every tau_K:
///   A(tau) = sum_K G_K + tau_K S_K,  F(tau) = sum_K g_K + tau_K s_K
/// with
///   G_K[i][j] = int_K eps grad phi_j . grad phi_i + (b . grad phi_j) phi_i
///   S_K[i][j] = int_K (-eps Lap phi_j + b . grad phi_j)(b . grad phi_i)
///   g_K[i]    = int_K f phi_i,   s_K[i] = int_K f (b . grad phi_i).
struct CellBlocks {
  std::vector<LocalMatrix> galerkin_matrix;
  std::vector<LocalVector> galerkin_rhs;
  std::vector<LocalMatrix> supg_matrix;
  std::vector<LocalVector> supg_rhs;
};

CellBlocks compute_cell_blocks(const ProblemSpec& problem, const FeSpace& space,
                               Execution exec = Execution::parallel);

struct SparseSystem {
  SpacePtr space;
  RowMatrix matrix;
  Eigen::VectorXd rhs;
};

/// Sums cell blocks in cell order. A null `tau` yields the Galerkin system.
SparseSystem scatter_blocks(const CellBlocks& blocks, const SpacePtr& space,
                            const TauField* tau = nullptr);

SparseSystem assemble_galerkin(const ProblemSpec& problem, const SpacePtr& space,
                               Execution exec = Execution::parallel);

/// Throws std::invalid_argument for a negative, non-finite or mis-sized tau.
SparseSystem assemble_supg(const ProblemSpec& problem, const SpacePtr& space, const TauField& tau,
                           Execution exec = Execution::parallel);

/// Replaces each boundary row by the identity row and sets its right-hand
/// side to u_b at the DoF. Columns are left untouched.
SparseSystem apply_dirichlet(SparseSystem system, const ProblemSpec& problem);

class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

inline constexpr double kSolveTolerance = 1e-10;
inline constexpr int kMaxRefinementSteps = 3;

/// Sparse LU factorization with residual-checked solves against A and A^T.
class LinearSolver {
 public:
  /// Throws SolverFailure when the factorization fails.
  explicit LinearSolver(const RowMatrix& matrix);
  ~LinearSolver();
  LinearSolver(LinearSolver&&) noexcept;
  LinearSolver& operator=(LinearSolver&&) noexcept;

  /// Both throw SolverFailure if ||Ax - b|| / ||b|| exceeds kSolveTolerance.
  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  Eigen::VectorXd solve_transpose(const Eigen::VectorXd& rhs) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Direct solve of a (Dirichlet-constrained) system.
FeFunction solve_linear(const SparseSystem& system);

/// ||Ax - b||_2 / ||b||_2, or ||Ax - b||_2 when b = 0.
double relative_residual(const RowMatrix& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b);


/// Cell blocks of one problem on one space, computed once and reused for
/// any number of tau fields.
class SupgOperator {
 public:
  SupgOperator(ProblemSpec problem, SpacePtr space, Execution exec = Execution::parallel);

  const ProblemSpec& problem() const { return problem_; }
  const SpacePtr& space() const { return space_; }
  const CellBlocks& blocks() const { return blocks_; }

  /// Dirichlet-constrained system; null tau gives the Galerkin system.
  SparseSystem system(const TauField* tau) const;
  /// Same, without the sign check on tau. Used to probe negative
  /// perturbations around tau = 0 in finite-difference checks.
  SparseSystem system_unchecked(const std::vector<double>& tau) const;
  FeFunction solve(const TauField* tau) const;

 private:
  ProblemSpec problem_;
  SpacePtr space_;
  CellBlocks blocks_;
};

}  // namespace supg
