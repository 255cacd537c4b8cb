#include "supg/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace supg {

bool MlpParams::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

double glorot_bound(int fan_in, int fan_out) { return std::sqrt(6.0 / (fan_in + fan_out)); }

namespace {

double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

void fill_uniform(std::span<double> out, double bound, std::mt19937_64& gen) {
  for (double& w : out) w = (2.0 * uniform01(gen) - 1.0) * bound;
}

double sigmoid(double z) {
  // Clamped away from 0 and 1 so the output stays strictly inside (0, 1).
  const double s = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
  return std::clamp(s, 0x1.0p-60, 1.0 - 0x1.0p-53);
}

}  // namespace

MlpParams init_params(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  MlpParams p;
  auto flat = p.flat();
  fill_uniform(flat.subspan(MlpParams::kW1, MlpParams::kB1 - MlpParams::kW1),
               glorot_bound(kMlpInputs, kMlpHidden1), gen);
  fill_uniform(flat.subspan(MlpParams::kW2, MlpParams::kB2 - MlpParams::kW2),
               glorot_bound(kMlpHidden1, kMlpHidden2), gen);
  fill_uniform(flat.subspan(MlpParams::kW3, MlpParams::kB3 - MlpParams::kW3),
               glorot_bound(kMlpHidden2, kMlpOutputs), gen);
  return p;
}

FeatureMode parse_feature_mode(const std::string& s) {
  if (s == "pe" || s == "peclet") return FeatureMode::peclet;
  if (s == "raw") return FeatureMode::raw;
  throw std::invalid_argument("unknown feature mode '" + s + "' (expected pe|raw)");
}

std::string to_string(FeatureMode m) { return m == FeatureMode::peclet ? "pe" : "raw"; }

double FeatureVector::peclet() const { return std::hypot(b1, b2) * h / (2.0 * epsilon); }

std::array<double, kMlpInputs> FeatureVector::network_input(FeatureMode mode) const {
  if (!std::isfinite(epsilon) || !std::isfinite(b1) || !std::isfinite(b2) || !std::isfinite(h)) {
    throw std::invalid_argument("FeatureVector: non-finite feature");
  }
  if (!(epsilon > 0.0) || !(h > 0.0)) {
    throw std::invalid_argument("FeatureVector: epsilon and h must be positive");
  }
  if (mode == FeatureMode::raw) return {epsilon, b1, b2, h};
  return {std::log10(epsilon), b1, b2, std::log10(std::max(peclet(), kPecletFeatureFloor))};
}

ForwardResult forward(const MlpParams& p, const std::array<double, kMlpInputs>& x) {
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("forward: non-finite input");
  }
  ForwardResult r;
  r.cache.x = x;
  for (int i = 0; i < kMlpHidden1; ++i) {
    double z = p.b1(i);
    for (int j = 0; j < kMlpInputs; ++j) z += p.w1(i, j) * x[static_cast<std::size_t>(j)];
    r.cache.h1[static_cast<std::size_t>(i)] = std::tanh(z);
  }
  for (int i = 0; i < kMlpHidden2; ++i) {
    double z = p.b2(i);
    for (int j = 0; j < kMlpHidden1; ++j) z += p.w2(i, j) * r.cache.h1[static_cast<std::size_t>(j)];
    r.cache.h2[static_cast<std::size_t>(i)] = std::tanh(z);
  }
  double z = p.b3();
  for (int j = 0; j < kMlpHidden2; ++j) z += p.w3(j) * r.cache.h2[static_cast<std::size_t>(j)];
  r.cache.out = sigmoid(z);
  r.tau_hat = r.cache.out;
  return r;
}

ForwardResult forward(const MlpParams& params, const FeatureVector& features, FeatureMode mode) {
  return forward(params, features.network_input(mode));
}

MlpParams backward(const MlpParams& p, const MlpCache& c, double upstream) {
  MlpParams g;
  if (upstream == 0.0) return g;
  auto gf = g.flat();

  const double d3 = upstream * c.out * (1.0 - c.out);
  std::array<double, kMlpHidden2> d2{};
  for (int j = 0; j < kMlpHidden2; ++j) {
    const auto jj = static_cast<std::size_t>(j);
    gf[MlpParams::kW3 + jj] = d3 * c.h2[jj];
    d2[jj] = d3 * p.w3(j) * (1.0 - c.h2[jj] * c.h2[jj]);
  }
  gf[MlpParams::kB3] = d3;

  std::array<double, kMlpHidden1> d1{};
  for (int i = 0; i < kMlpHidden2; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    for (int j = 0; j < kMlpHidden1; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      gf[MlpParams::kW2 + ii * kMlpHidden1 + jj] = d2[ii] * c.h1[jj];
      d1[jj] += d2[ii] * p.w2(i, j);
    }
    gf[MlpParams::kB2 + ii] = d2[ii];
  }
  for (int i = 0; i < kMlpHidden1; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    d1[ii] *= 1.0 - c.h1[ii] * c.h1[ii];
    for (int j = 0; j < kMlpInputs; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      gf[MlpParams::kW1 + ii * kMlpInputs + jj] = d1[ii] * c.x[jj];
    }
    gf[MlpParams::kB1 + ii] = d1[ii];
  }
  return g;
}

AdamState make_adam_state(std::size_t n_params, double lr, int step_size, double gamma) {
  if (!(lr > 0.0)) throw std::invalid_argument("Adam: learning rate must be positive");
  if (step_size < 1) throw std::invalid_argument("StepLR: step_size must be >= 1");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("StepLR: gamma must be in (0,1]");
  AdamState s;
  s.m.assign(n_params, 0.0);
  s.v.assign(n_params, 0.0);
  s.initial_lr = lr;
  s.lr = lr;
  s.step_size = step_size;
  s.gamma = gamma;
  return s;
}

void adam_step(MlpParams& params, const MlpParams& grads, AdamState& s) {
  if (grads.size() != params.size() || s.m.size() != params.size() ||
      s.v.size() != params.size()) {
    throw std::invalid_argument("adam_step: parameter, gradient and moment shapes differ");
  }
  ++s.step;
  const double c1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double c2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    s.m[i] = s.beta1 * s.m[i] + (1.0 - s.beta1) * g;
    s.v[i] = s.beta2 * s.v[i] + (1.0 - s.beta2) * g * g;
    const double m_hat = s.m[i] / c1;
    const double v_hat = s.v[i] / c2;
    params[i] -= s.lr * m_hat / (std::sqrt(v_hat) + s.epsilon);
  }
}

void steplr_update(AdamState& s, int epoch) {
  if (epoch < 0) throw std::invalid_argument("steplr_update: epoch must be >= 0");
  s.lr = s.initial_lr * std::pow(s.gamma, static_cast<double>(epoch / s.step_size));
}

namespace {
struct ArrayBlock {
  const char* name;
  std::size_t offset;
  std::size_t count;
};
constexpr std::array<ArrayBlock, 6> kBlocks = {{
    {"W1", MlpParams::kW1, MlpParams::kB1 - MlpParams::kW1},
    {"b1", MlpParams::kB1, MlpParams::kW2 - MlpParams::kB1},
    {"W2", MlpParams::kW2, MlpParams::kB2 - MlpParams::kW2},
    {"b2", MlpParams::kB2, MlpParams::kW3 - MlpParams::kB2},
    {"W3", MlpParams::kW3, MlpParams::kB3 - MlpParams::kW3},
    {"b3", MlpParams::kB3, MlpParams::kSize - MlpParams::kB3},
}};

template <typename T>
T expect_field(std::istream& is, const std::string& key) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("checkpoint: missing '" + key + "' line");
  std::istringstream ls(line);
  std::string got;
  T value{};
  if (!(ls >> got >> value) || got != key) {
    throw std::runtime_error("checkpoint: expected '" + key + "' line, got '" + line + "'");
  }
  return value;
}
}  // namespace

void write_checkpoint(std::ostream& os, const MlpParams& params, const CheckpointHeader& header) {
  os << "layers " << kMlpInputs << ' ' << kMlpHidden1 << ' ' << kMlpHidden2 << ' ' << kMlpOutputs
     << '\n';
  os << "seed " << header.seed << '\n';
  os << "epoch " << header.epoch << '\n';
  os << "cost " << std::setprecision(17) << header.cost << '\n';
  for (const auto& blk : kBlocks) {
    os << blk.name << ' ' << blk.count << '\n';
    for (std::size_t i = 0; i < blk.count; ++i) {
      os << std::setprecision(17) << params[blk.offset + i] << (i + 1 == blk.count ? '\n' : ' ');
    }
  }
}

MlpParams read_checkpoint(std::istream& is, CheckpointHeader* header) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("checkpoint: empty stream");
  std::istringstream ls(line);
  std::string key;
  int l0 = 0, l1 = 0, l2 = 0, l3 = 0;
  if (!(ls >> key >> l0 >> l1 >> l2 >> l3) || key != "layers" || l0 != kMlpInputs ||
      l1 != kMlpHidden1 || l2 != kMlpHidden2 || l3 != kMlpOutputs) {
    throw std::runtime_error("checkpoint: unsupported layer sizes '" + line + "'");
  }
  CheckpointHeader h;
  h.seed = expect_field<std::uint64_t>(is, "seed");
  h.epoch = expect_field<int>(is, "epoch");
  h.cost = expect_field<double>(is, "cost");
  MlpParams p;
  for (const auto& blk : kBlocks) {
    std::string name;
    std::size_t count = 0;
    if (!(is >> name >> count) || name != blk.name || count != blk.count) {
      throw std::runtime_error(std::string("checkpoint: bad array header for ") + blk.name);
    }
    for (std::size_t i = 0; i < count; ++i) {
      if (!(is >> p[blk.offset + i])) {
        throw std::runtime_error(std::string("checkpoint: truncated array ") + blk.name);
      }
    }
  }
  if (header != nullptr) *header = h;
  return p;
}

}  // namespace supg
