#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "supg/assembly.hpp"
#include "supg/benchmarks.hpp"
#include "supg/stabilization.hpp"

using namespace supg;

namespace {

// u = x(1-x)y(1-y), eps = 1, b = 0.
ProblemSpec quartic_problem() {
  ProblemSpec p;
  p.name = "quartic";
  p.epsilon = 1.0;
  p.b = {0.0, 0.0};
  p.source = [](Vec2 q) { return 2.0 * (q.y * (1.0 - q.y) + q.x * (1.0 - q.x)); };
  p.boundary = [](Vec2) { return 0.0; };
  p.exact = ExactSolution{
      [](Vec2 q) { return q.x * (1.0 - q.x) * q.y * (1.0 - q.y); },
      [](Vec2 q) {
        return Vec2{(1.0 - 2.0 * q.x) * q.y * (1.0 - q.y), q.x * (1.0 - q.x) * (1.0 - 2.0 * q.y)};
      }};
  return p;
}

// u = x^2 + 2xy + 3y^2 with eps = 1, b = (1,1).
ProblemSpec quadratic_problem() {
  const auto u = [](Vec2 q) { return q.x * q.x + 2.0 * q.x * q.y + 3.0 * q.y * q.y; };
  ProblemSpec p;
  p.name = "quadratic";
  p.epsilon = 1.0;
  p.b = {1.0, 1.0};
  p.source = [](Vec2 q) { return -8.0 + 4.0 * q.x + 8.0 * q.y; };
  p.boundary = u;
  p.exact = ExactSolution{u, [](Vec2 q) { return Vec2{2.0 * q.x + 2.0 * q.y, 2.0 * q.x + 6.0 * q.y}; }};
  return p;
}

Eigen::MatrixXd dense(const RowMatrix& a) { return Eigen::MatrixXd(a); }

}  // namespace

TEST(Assembly, PureDiffusionSymmetric) {
  const auto space = make_space(4);
  const SparseSystem s = assemble_galerkin(constant_problem(0.3, {0, 0}, 1.0, 0.0), space);
  const Eigen::MatrixXd a = dense(s.matrix);
  EXPECT_LT((a - a.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Assembly, PureDiffusionSpdOnInterior) {
  for (int n : {2, 3, 4}) {
    const auto space = make_space(n);
    const Eigen::MatrixXd a = dense(assemble_galerkin(constant_problem(1.0, {0, 0}, 1.0, 0.0), space).matrix);
    std::vector<Eigen::Index> interior;
    for (std::size_t i = 0; i < space->n_dofs(); ++i) {
      if (!space->dofs().is_boundary(i)) interior.push_back(static_cast<Eigen::Index>(i));
    }
    Eigen::MatrixXd ai(interior.size(), interior.size());
    for (std::size_t r = 0; r < interior.size(); ++r)
      for (std::size_t c = 0; c < interior.size(); ++c) ai(r, c) = a(interior[r], interior[c]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(ai);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Assembly, ConstantsInKernel) {
  const auto space = make_space(5);
  const ProblemSpec p = constant_problem(0.01, {2.0, -1.0}, 1.0, 0.0);
  const TauField tau = TauField::constant(space->n_cells(), 0.05);
  for (const SparseSystem& s : {assemble_galerkin(p, space), assemble_supg(p, space, tau)}) {
    const Eigen::VectorXd r = s.matrix * Eigen::VectorXd::Ones(static_cast<Eigen::Index>(space->n_dofs()));
    for (std::size_t i = 0; i < space->n_dofs(); ++i) {
      if (!space->dofs().is_boundary(i)) EXPECT_NEAR(r[static_cast<Eigen::Index>(i)], 0.0, 1e-12);
    }
  }
}

TEST(Assembly, ZeroTauIsGalerkin) {
  const auto space = make_space(6);
  const ProblemSpec p = example(ExampleId::ex2);
  const SparseSystem g = assemble_galerkin(p, space);
  const SparseSystem s = assemble_supg(p, space, TauField::constant(space->n_cells(), 0.0));
  EXPECT_LE((dense(g.matrix) - dense(s.matrix)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((g.rhs - s.rhs).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Assembly, NoConvectionMeansNoStabilization) {
  const auto space = make_space(4);
  const ProblemSpec p = constant_problem(0.1, {0, 0}, 2.0, 0.0);
  const SparseSystem g = assemble_galerkin(p, space);
  const SparseSystem s = assemble_supg(p, space, TauField::constant(space->n_cells(), 0.7));
  EXPECT_LE((dense(g.matrix) - dense(s.matrix)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LE((g.rhs - s.rhs).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Assembly, RejectsBadTau) {
  const auto space = make_space(2);
  const ProblemSpec p = example(ExampleId::ex1);
  EXPECT_THROW(assemble_supg(p, space, TauField::constant(space->n_cells(), -1e-3)), std::invalid_argument);
  EXPECT_THROW(assemble_supg(p, space, TauField::constant(3, 0.1)), std::invalid_argument);
  EXPECT_THROW(assemble_supg(p, space, TauField::constant(space->n_cells(), NAN)), std::invalid_argument);
}

TEST(Assembly, SparsityBound) {
  const auto space = make_space(8);
  const SparseSystem s = assemble_galerkin(example(ExampleId::ex1), space);
  for (int r = 0; r < s.matrix.outerSize(); ++r) {
    const int nnz = s.matrix.outerIndexPtr()[r + 1] - s.matrix.outerIndexPtr()[r];
    EXPECT_LE(nnz, 25);
  }
}

TEST(Assembly, DirichletRowsAndData) {
  const auto space = make_space(10);
  const ProblemSpec p = example(ExampleId::ex3);
  const SparseSystem s = apply_dirichlet(assemble_galerkin(p, space), p);
  const auto& dofs = space->dofs();
  for (std::size_t i = 0; i < space->n_dofs(); ++i) {
    if (!dofs.is_boundary(i)) continue;
    const Vec2 x = dofs.dof_coord(i);
    const double expected = (std::abs(x.x - 1.0) < 1e-12 || x.y <= 0.7 + 1e-12) ? 0.0 : 1.0;
    EXPECT_EQ(s.rhs[static_cast<Eigen::Index>(i)], expected);
    const int r = static_cast<int>(i);
    for (RowMatrix::InnerIterator it(s.matrix, r); it; ++it) {
      EXPECT_EQ(it.value(), it.col() == r ? 1.0 : 0.0);
    }
  }
  const ProblemSpec zero = example(ExampleId::ex1);
  const SparseSystem z = apply_dirichlet(assemble_galerkin(zero, space), zero);
  for (std::size_t i = 0; i < space->n_dofs(); ++i) {
    if (dofs.is_boundary(i)) EXPECT_EQ(z.rhs[static_cast<Eigen::Index>(i)], 0.0);
  }
}

TEST(Assembly, SingleSquareReturnsBoundaryData) {
  const auto space = make_space(1);
  const ProblemSpec p = constant_problem(1.0, {1.0, 0.0}, 1.0, 0.25);
  const FeFunction u = solve_linear(apply_dirichlet(assemble_galerkin(p, space), p));
  std::size_t n_boundary = 0;
  for (std::size_t i = 0; i < space->n_dofs(); ++i) {
    if (space->dofs().is_boundary(i)) {
      ++n_boundary;
      EXPECT_DOUBLE_EQ(u.coefficients[i], 0.25);
    }
  }
  EXPECT_EQ(n_boundary, 8u);
}

TEST(Solver, IdentityReturnsRhs) {
  RowMatrix a(4, 4);
  a.setIdentity();
  const Eigen::VectorXd b = Eigen::Vector4d(1.0, -2.0, 3.5, 0.0);
  const LinearSolver s(a);
  EXPECT_EQ(s.solve(b), b);
  EXPECT_EQ(s.solve_transpose(b), b);
}

TEST(Solver, TransposeSolve) {
  const auto space = make_space(4);
  const SupgOperator op(example(ExampleId::ex2), space);
  const TauField tau = TauField::constant(space->n_cells(), 0.01);
  const SparseSystem s = op.system(&tau);
  const Eigen::VectorXd rhs = Eigen::VectorXd::LinSpaced(s.rhs.size(), -1.0, 2.0);
  const Eigen::VectorXd x = LinearSolver(s.matrix).solve_transpose(rhs);
  const RowMatrix at = s.matrix.transpose();
  EXPECT_LT(relative_residual(at, x, rhs), 1e-10);
}

TEST(Solver, SingularMatrixFails) {
  RowMatrix a(3, 3);
  a.insert(0, 0) = 1.0;
  a.insert(1, 1) = 1.0;
  a.makeCompressed();
  EXPECT_THROW(
      {
        const LinearSolver s(a);
        (void)s.solve(Eigen::Vector3d(1.0, 1.0, 1.0));
      },
      SolverFailure);
}

TEST(Solver, PatchTestQuadratic) {
  const ProblemSpec p = quadratic_problem();
  for (int n : {2, 5}) {
    const auto space = make_space(n);
    const SupgOperator op(p, space);
    const TauField tau = TauField::constant(space->n_cells(), tau_standard(p.epsilon, p.b, space->h()));
    for (const TauField* t : {static_cast<const TauField*>(nullptr), &tau}) {
      const FeFunction u = op.solve(t);
      double err = 0.0;
      for (std::size_t i = 0; i < space->n_dofs(); ++i) {
        err = std::max(err, std::abs(u.coefficients[i] - p.exact->value(space->dofs().dof_coord(i))));
      }
      EXPECT_LE(err, 1e-10);
    }
  }
}

TEST(Solver, ManufacturedQuarticOrderThree) {
  const ProblemSpec p = quartic_problem();
  double prev = 0.0;
  for (int n : {4, 8, 16, 32}) {
    const auto space = make_space(n);
    const FeFunction u = SupgOperator(p, space).solve(nullptr);
    const double e = compute_errors(u, p).l2;
    if (prev > 0.0) EXPECT_NEAR(std::log2(prev / e), 3.0, 0.2) << n;
    prev = e;
  }
}

TEST(Solver, GalerkinOvershootsOnFirstExample) {
  const ProblemSpec p = example(ExampleId::ex1);
  const auto space = make_space(40);
  const FeFunction u = SupgOperator(p, space).solve(nullptr);
  EXPECT_GT(*std::max_element(u.coefficients.begin(), u.coefficients.end()), 1.05);
}

TEST(Solver, SerialAndParallelBitwiseEqual) {
  const auto space = make_space(12);
  const ProblemSpec p = example(ExampleId::ex2);
  const CellBlocks a = compute_cell_blocks(p, *space, Execution::serial);
  const CellBlocks b = compute_cell_blocks(p, *space, Execution::parallel);
  EXPECT_EQ(a.galerkin_matrix, b.galerkin_matrix);
  EXPECT_EQ(a.supg_matrix, b.supg_matrix);
  EXPECT_EQ(a.galerkin_rhs, b.galerkin_rhs);
  EXPECT_EQ(a.supg_rhs, b.supg_rhs);
}
