#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "supg/fe_space.hpp"
#include "supg/fields.hpp"
#include "supg/parallel.hpp"
#include "supg/problem.hpp"
#include "supg/trainer.hpp"

namespace supg {

enum class ExampleId { ex1 = 1, ex2 = 2, ex3 = 3, ex4 = 4 };

/// Throws std::invalid_argument for ids outside 1..4.
ExampleId example_from_int(int id);

/// Ex1: eps=1e-8, b=(1,0), f=1, u_b=0; u = x inside, 0 on the boundary.
/// Ex2: eps=1e-8, b=(2,3), u_b=0, u = xy^2 with outflow layers at x=1, y=1.
/// Ex3: eps=1e-8, b=(cos(-pi/3), sin(-pi/3)), f=0, u_b = 0 on x=1 or y<=0.7
///      and 1 elsewhere; compared against the reduced transport solution.
/// Ex4: eps=1e-8, b=(1,0), u_b=0, source -32(x-0.5) on the square
///      [0.25,0.75]^2 with u = -16(x-0.25)(x-0.75) there, zero elsewhere.
ProblemSpec example(ExampleId id);

/// Ex2 data at an arbitrary epsilon, for checking the source derivation.
ProblemSpec example2_problem(double epsilon);

/// Ex3 reduced solution: 1 above the line through (0, 0.7) along b, else 0.
double example3_reduced_solution(Vec2 p);

struct ErrorReport {
  double l2{0.0};
  double rel_l2{0.0};
  double h1{0.0};       // sqrt(||e||^2 + |e|_1^2)
  double h1_semi{0.0};  // |e|_1
  double linf{0.0};
  double residual{0.0};  // sqrt(sum_K ||R(u_h)||_K^2)
};

class UnsupportedMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kLinfSamplesPerSide = 201;

/// L2 and H1 by degree-6 quadrature; relative l2 over all DoF points as the
/// ratio of vector 2-norms; L-infinity over a 201x201 grid plus every DoF.
/// Throws UnsupportedMetric when the problem has no exact solution.
ErrorReport compute_errors(const FeFunction& u_h, const ProblemSpec& problem,
                           Execution exec = Execution::parallel);

/// Largest nodal excursion of u_h outside [min u, max u] of the exact nodal
/// values; zero for a solution within the exact range.
double nodal_overshoot(const FeFunction& u_h, const ProblemSpec& problem);

enum class TauMode { galerkin, standard, standard_normalized, trained };

TauMode parse_tau_mode(const std::string& s);
std::string to_string(TauMode m);

struct SolveOutcome {
  FeFunction solution;
  std::optional<TauField> tau;
  double tau_scalar{0.0};  // tau_std, or the trained tau_hat
  std::optional<TrainRecord> training;
};

/// Galerkin, constant tau_std, tau_std / max(g_K, floor), or the best state
/// of a training run.
SolveOutcome solve_with_mode(const ProblemSpec& problem, const SpacePtr& space, TauMode mode,
                             const TrainConfig& train_config = {},
                             Execution exec = Execution::parallel);

struct StudyRow {
  int n_cells{0};
  double h{0.0};
  ErrorReport errors;
  std::optional<double> l2_order;
};

/// Errors per level and successive orders log2(e_coarse / e_fine). Throws
/// std::invalid_argument unless each N is twice the previous one.
std::vector<StudyRow> convergence_study(const ProblemSpec& problem, TauMode mode,
                                        const std::vector<int>& ns,
                                        const TrainConfig& train_config = {});

}  // namespace supg
