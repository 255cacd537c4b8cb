#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "mlp_reference.hpp"
#include "supg/mlp.hpp"

using namespace supg;

namespace {

MlpParams random_params(std::uint64_t seed, double scale) {
  MlpParams p;
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d(0.0, scale);
  for (double& v : p.flat()) v = d(gen);
  return p;
}

}  // namespace

TEST(Mlp, Layout) {
  EXPECT_EQ(MlpParams::kSize, 369u);
  EXPECT_EQ(MlpParams::kB1, 64u);
  EXPECT_EQ(MlpParams::kW2, 80u);
  EXPECT_EQ(MlpParams::kB2, 336u);
  EXPECT_EQ(MlpParams::kW3, 352u);
  EXPECT_EQ(MlpParams::kB3, 368u);
}

TEST(Mlp, InitDeterministicAndBounded) {
  const MlpParams a = init_params(0);
  EXPECT_EQ(a, init_params(0));
  EXPECT_FALSE(a == init_params(1));
  EXPECT_TRUE(a.all_finite());
  const double b1 = glorot_bound(4, 16), b2 = glorot_bound(16, 16), b3 = glorot_bound(16, 1);
  EXPECT_DOUBLE_EQ(b1, std::sqrt(6.0 / 20.0));
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 4; ++c) EXPECT_LE(std::abs(a.w1(r, c)), b1);
    for (int c = 0; c < 16; ++c) EXPECT_LE(std::abs(a.w2(r, c)), b2);
    EXPECT_LE(std::abs(a.w3(r)), b3);
    EXPECT_EQ(a.b1(r), 0.0);
    EXPECT_EQ(a.b2(r), 0.0);
  }
  EXPECT_EQ(a.b3(), 0.0);
}

TEST(Mlp, ZeroWeightsGiveHalf) {
  EXPECT_EQ(forward(MlpParams{}, std::array<double, 4>{1.0, -2.0, 3.0, 4.0}).tau_hat, 0.5);
}

TEST(Mlp, OutputStrictlyInsideUnitInterval) {
  std::mt19937_64 gen(4);
  std::normal_distribution<double> d(0.0, 30.0);
  for (int t = 0; t < 10000; ++t) {
    const MlpParams p = random_params(static_cast<std::uint64_t>(t), t % 2 ? 1.0 : 50.0);
    const double y = forward(p, std::array<double, 4>{d(gen), d(gen), d(gen), d(gen)}).tau_hat;
    EXPECT_GT(y, 0.0);
    EXPECT_LT(y, 1.0);
  }
}

TEST(Mlp, RejectsNonFiniteInput) {
  EXPECT_THROW(forward(init_params(0), std::array<double, 4>{NAN, 0, 0, 0}), std::invalid_argument);
}

namespace {

// Plain central differences in double precision. Components below `floor`
// times the largest one are compared at that scale, where roundoff (about
// 1e-16 / h) dominates.
double central_fd_error(const MlpParams& p, const std::array<double, 4>& x, double h, double floor) {
  const MlpParams g = backward(p, forward(p, x).cache, 1.0);
  double scale = 0.0;
  for (double v : g.flat()) scale = std::max(scale, std::abs(v));
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    MlpParams pp = p, pm = p;
    pp[i] += h;
    pm[i] -= h;
    const double fd = (forward(pp, x).tau_hat - forward(pm, x).tau_hat) / (2.0 * h);
    const double denom = std::max({std::abs(fd), std::abs(g[i]), floor * scale});
    worst = std::max(worst, std::abs(fd - g[i]) / denom);
  }
  return worst;
}

}  // namespace

TEST(Mlp, BackwardMatchesFiniteDifferences) {
  const std::array<double, 4> x{-8.0, 1.0, 0.0, 6.25};
  for (std::uint64_t s = 0; s < 5; ++s) {
    const MlpParams p = random_params(100 + s, 0.4);
    EXPECT_LT(oracle::backward_fd_error(p, x), 1e-6) << "seed " << s;
  }
  // Plain central differences with h = 1e-5 at initialization-scale weights.
  for (std::uint64_t s = 1; s <= 5; ++s) {
    MlpParams p = init_params(s);
    const MlpParams noise = random_params(200 + s, 0.1);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] += noise[i];
    EXPECT_LT(central_fd_error(p, x, 1e-5, 1e-5), 1e-5) << "seed " << s;
  }
  EXPECT_LT(oracle::backward_fd_error(init_params(0), x), 1e-6);
}

TEST(Mlp, BackwardLinearInUpstream) {
  const MlpParams p = init_params(3);
  const ForwardResult f = forward(p, FeatureVector{1e-8, 1.0, 0.0, 0.035});
  const MlpParams g1 = backward(p, f.cache, 1.0);
  const MlpParams g2 = backward(p, f.cache, 2.0);
  const MlpParams g0 = backward(p, f.cache, 0.0);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_EQ(g2[i], 2.0 * g1[i]);
    EXPECT_EQ(g0[i], 0.0);
  }
}

TEST(Features, PecletAndRawModes) {
  const FeatureVector f{1e-8, 1.0, 0.0, std::sqrt(2.0) / 40.0};
  const auto x = f.network_input(FeatureMode::peclet);
  EXPECT_NEAR(x[0], -8.0, 1e-12);
  EXPECT_EQ(x[1], 1.0);
  EXPECT_EQ(x[2], 0.0);
  EXPECT_NEAR(x[3], std::log10(1.7677669529663689e6), 1e-12);
  const auto r = f.network_input(FeatureMode::raw);
  EXPECT_EQ(r[0], 1e-8);
  EXPECT_EQ(r[3], f.h);
  const FeatureVector still{1.0, 0.0, 0.0, 0.1};
  EXPECT_EQ(still.network_input(FeatureMode::peclet)[3], std::log10(kPecletFeatureFloor));
  EXPECT_THROW((FeatureVector{0.0, 1.0, 0.0, 0.1}.network_input(FeatureMode::peclet)), std::invalid_argument);
  EXPECT_EQ(parse_feature_mode("pe"), FeatureMode::peclet);
  EXPECT_EQ(parse_feature_mode("raw"), FeatureMode::raw);
  EXPECT_THROW(parse_feature_mode("h"), std::invalid_argument);
}

TEST(Adam, ZeroGradientLeavesParams) {
  MlpParams p = init_params(1);
  const MlpParams before = p;
  AdamState s = make_adam_state(p.size(), 1e-4, 100, 0.1);
  adam_step(p, MlpParams{}, s);
  EXPECT_EQ(p, before);
}

TEST(Adam, FirstStepHasLearningRateSize) {
  MlpParams p;
  MlpParams g;
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = (i % 2 ? -1.0 : 1.0) * (0.1 + 1e-3 * static_cast<double>(i));
  AdamState s = make_adam_state(p.size(), 1e-4, 100, 0.1);
  adam_step(p, g, s);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(std::abs(p[i]), 1e-4, 1e-10);
    EXPECT_LT(p[i] * g[i], 0.0);
  }
}

TEST(Adam, DeterministicTrajectory) {
  const auto run = [] {
    MlpParams p = init_params(7);
    AdamState s = make_adam_state(p.size(), 1e-3, 5, 0.5);
    for (int e = 0; e < 20; ++e) {
      const ForwardResult f = forward(p, std::array<double, 4>{-2.0, 1.0, 1.0, 3.0});
      adam_step(p, backward(p, f.cache, f.tau_hat - 0.2), s);
      steplr_update(s, e + 1);
    }
    return p;
  };
  EXPECT_EQ(run(), run());
}

TEST(Adam, RejectsShapeMismatch) {
  MlpParams p;
  AdamState s = make_adam_state(10, 1e-4, 100, 0.1);
  EXPECT_THROW(adam_step(p, MlpParams{}, s), std::invalid_argument);
  EXPECT_THROW(make_adam_state(10, 0.0, 100, 0.1), std::invalid_argument);
  EXPECT_THROW(make_adam_state(10, 1e-4, 0, 0.1), std::invalid_argument);
  EXPECT_THROW(make_adam_state(10, 1e-4, 100, 1.5), std::invalid_argument);
}

TEST(StepLr, Schedule) {
  AdamState s = make_adam_state(1, 1e-4, 100, 0.1);
  steplr_update(s, 99);
  EXPECT_EQ(s.lr, 1e-4);
  steplr_update(s, 100);
  EXPECT_NEAR(s.lr, 1e-5, 1e-20);
  steplr_update(s, 250);
  EXPECT_NEAR(s.lr, 1e-6, 1e-21);
  AdamState c = make_adam_state(1, 1e-4, 100, 1.0);
  steplr_update(c, 450);
  EXPECT_EQ(c.lr, 1e-4);
}

TEST(Checkpoint, RoundTrip) {
  const MlpParams p = random_params(42, 0.3);
  std::stringstream ss;
  write_checkpoint(ss, p, {42, 17, 0.125});
  CheckpointHeader h;
  const MlpParams q = read_checkpoint(ss, &h);
  EXPECT_EQ(p, q);
  EXPECT_EQ(h.seed, 42u);
  EXPECT_EQ(h.epoch, 17);
  EXPECT_EQ(h.cost, 0.125);
  std::stringstream bad("layers 4 8 1\n");
  EXPECT_THROW(read_checkpoint(bad), std::runtime_error);
}
