#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "supg/fe_space.hpp"
#include "supg/mesh.hpp"
#include "supg/p2_basis.hpp"
#include "supg/quadrature.hpp"

using namespace supg;

TEST(Mesh, CellCountAndArea) {
  for (int n : {1, 3, 10}) {
    const Mesh m = Mesh::uniform(n);
    EXPECT_EQ(m.n_cells(), static_cast<std::size_t>(2 * n * n));
    double area = 0.0;
    for (std::size_t k = 0; k < m.n_cells(); ++k) {
      EXPECT_GT(m.cell_area(k), 0.0);
      area += m.cell_area(k);
    }
    EXPECT_NEAR(area, 1.0, 1e-12);
  }
}

TEST(Mesh, DiameterAtForty) {
  const Mesh m = Mesh::uniform(40);
  EXPECT_EQ(m.n_cells(), 3200u);
  for (std::size_t k = 0; k < m.n_cells(); ++k) {
    EXPECT_NEAR(m.cell_diameter(k), std::sqrt(2.0) / 40.0, 1e-15);
  }
  EXPECT_NEAR(Mesh::uniform(10).cell_diameter(0), 1.41e-1, 5e-4);
}

TEST(Mesh, BoundaryFlags) {
  const Mesh m = Mesh::uniform(5);
  for (std::size_t i = 0; i < m.n_vertices(); ++i) {
    EXPECT_EQ(m.is_boundary_vertex(i), on_unit_square_boundary(m.vertex(i)));
  }
  EXPECT_TRUE(on_unit_square_boundary({0.3, 1.0}));
  EXPECT_FALSE(on_unit_square_boundary({0.3, 0.5}));
}

TEST(Mesh, RejectsEmpty) {
  EXPECT_THROW(Mesh::uniform(0), std::invalid_argument);
  EXPECT_THROW(Mesh::uniform(-2), std::invalid_argument);
}

TEST(Mesh, LocateFindsContainingCell) {
  const auto space = make_space(7);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    const Vec2 p{d(gen), d(gen)};
    const Barycentric l = space->geometry(space->mesh().locate(p)).barycentric(p);
    for (double v : l) EXPECT_GE(v, -1e-12);
  }
  EXPECT_THROW(space->mesh().locate({1.2, 0.5}), std::invalid_argument);
}

TEST(DofMap, Counts) {
  for (int n = 1; n <= 16; ++n) {
    const DofMapP2 d = build_dof_map(Mesh::uniform(n));
    EXPECT_EQ(d.n_dofs(), static_cast<std::size_t>((2 * n + 1) * (2 * n + 1)));
  }
  EXPECT_EQ(build_dof_map(Mesh::uniform(40)).n_dofs(), 6561u);
  const DofMapP2 d10 = build_dof_map(Mesh::uniform(10));
  EXPECT_EQ(d10.n_dofs(), 441u);
  EXPECT_EQ(d10.n_boundary_dofs(), 80u);
}

TEST(DofMap, MidpointsSharedAndPlaced) {
  const Mesh m = Mesh::uniform(4);
  const DofMapP2 d = build_dof_map(m);
  std::set<std::size_t> seen;
  for (std::size_t k = 0; k < m.n_cells(); ++k) {
    const auto& cd = d.cell_dofs(k);
    const auto& c = m.cell(k);
    for (int a = 0; a < 3; ++a) {
      EXPECT_EQ(cd[static_cast<std::size_t>(a)], c[static_cast<std::size_t>(a)]);
      const auto [i, j] = kP2LocalEdges[static_cast<std::size_t>(a)];
      const Vec2 mid = 0.5 * (m.vertex(c[static_cast<std::size_t>(i)]) + m.vertex(c[static_cast<std::size_t>(j)]));
      const Vec2 got = d.dof_coord(cd[static_cast<std::size_t>(3 + a)]);
      EXPECT_DOUBLE_EQ(got.x, mid.x);
      EXPECT_DOUBLE_EQ(got.y, mid.y);
    }
    seen.insert(cd.begin(), cd.end());
  }
  EXPECT_EQ(seen.size(), d.n_dofs());
}

TEST(P2Basis, LagrangeProperty) {
  const Barycentric nodes[6] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0.5, 0.5, 0}, {0, 0.5, 0.5}, {0.5, 0, 0.5}};
  for (int i = 0; i < 6; ++i) {
    const P2Values v = eval_p2_basis(nodes[i]).values;
    for (int j = 0; j < 6; ++j) EXPECT_NEAR(v[static_cast<std::size_t>(j)], i == j ? 1.0 : 0.0, 1e-15);
  }
}

TEST(P2Basis, PartitionOfUnity) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    double a = d(gen), b = d(gen);
    if (a + b > 1.0) { a = 1.0 - a; b = 1.0 - b; }
    const P2Eval e = eval_p2_basis({1.0 - a - b, a, b});
    double sum = 0.0;
    Vec2 gsum{};
    for (int i = 0; i < 6; ++i) {
      sum += e.values[static_cast<std::size_t>(i)];
      gsum = gsum + e.ref_gradients[static_cast<std::size_t>(i)];
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_NEAR(gsum.x, 0.0, 1e-12);
    EXPECT_NEAR(gsum.y, 0.0, 1e-12);
  }
  const P2Values c = p2_values({1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_NEAR(c[0] + c[1] + c[2] + c[3] + c[4] + c[5], 1.0, 1e-15);
}

TEST(P2Basis, RejectsOutsidePoint) {
  EXPECT_THROW(eval_p2_basis({1.2, -0.2, 0.0}), std::invalid_argument);
  EXPECT_THROW(eval_p2_basis({0.5, 0.5, 0.5}), std::invalid_argument);
}

TEST(P2Basis, AffineGradientConsistency) {
  const auto space = make_space(3);
  const auto g = [](Vec2 p) { return 2.0 - 3.0 * p.x + 0.5 * p.y; };
  for (std::size_t k = 0; k < space->n_cells(); ++k) {
    const CellGeometry& geo = space->geometry(k);
    const P2Gradients grads = p2_gradients({0.2, 0.3, 0.5}, geo.grad_lambda);
    Vec2 sum{};
    const auto& cd = space->dofs().cell_dofs(k);
    for (int i = 0; i < 6; ++i) sum = sum + g(space->dofs().dof_coord(cd[static_cast<std::size_t>(i)])) * grads[static_cast<std::size_t>(i)];
    EXPECT_NEAR(sum.x, -3.0, 1e-12);
    EXPECT_NEAR(sum.y, 0.5, 1e-12);
  }
}

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

double integrate_monomial(const QuadratureRule& q, int a, int b) {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    s += q.weights[i] * std::pow(q.points[i][1], a) * std::pow(q.points[i][2], b);
  }
  return s;
}

}  // namespace

TEST(Quadrature, CentroidRule) {
  const QuadratureRule q = quadrature(1);
  ASSERT_EQ(q.size(), 1u);
  EXPECT_DOUBLE_EQ(q.weights[0], 0.5);
}

TEST(Quadrature, MonomialsExact) {
  for (int deg = 1; deg <= 6; ++deg) {
    const QuadratureRule& q = cached_quadrature(deg);
    EXPECT_GE(q.degree, deg);
    for (int a = 0; a <= deg; ++a) {
      for (int b = 0; a + b <= deg; ++b) {
        const double exact = factorial(a) * factorial(b) / factorial(a + b + 2);
        EXPECT_NEAR(integrate_monomial(q, a, b), exact, 1e-15) << deg << ' ' << a << ' ' << b;
      }
    }
  }
  EXPECT_NEAR(integrate_monomial(quadrature(4), 2, 2), 1.0 / 180.0, 1e-16);
  EXPECT_NEAR(integrate_monomial(quadrature(2), 2, 0), 1.0 / 12.0, 1e-16);
  EXPECT_THROW(quadrature(0), std::invalid_argument);
  EXPECT_THROW(quadrature(7), std::invalid_argument);
}

TEST(FeFunction, InterpolationAndEvaluation) {
  const auto space = make_space(5);
  const FeFunction lin = interpolate(space, [](Vec2 p) { return p.x + p.y; });
  EXPECT_NEAR(evaluate_fe(lin, {0.3, 0.4}), 0.7, 1e-14);
  const FeFunction sq = interpolate(space, [](Vec2 p) { return p.x * p.x; });
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> d(0.0, 1.0);
  for (int t = 0; t < 200; ++t) {
    const Vec2 p{d(gen), d(gen)};
    EXPECT_NEAR(evaluate_fe(sq, p), p.x * p.x, 1e-12);
    EXPECT_NEAR(evaluate_fe_gradient(sq, p).x, 2.0 * p.x, 1e-12);
  }
  const FeFunction zero(space);
  EXPECT_EQ(evaluate_fe(zero, {0.61, 0.17}), 0.0);
  EXPECT_THROW(evaluate_fe(zero, {-0.1, 0.5}), std::invalid_argument);
}
