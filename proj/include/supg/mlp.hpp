#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace supg {

// 4 -> 16 -> 16 -> 1, tanh hidden layers, sigmoid output.
inline constexpr int kMlpInputs = 4;
inline constexpr int kMlpHidden1 = 16;
inline constexpr int kMlpHidden2 = 16;
inline constexpr int kMlpOutputs = 1;

/// Network weights stored contiguously as W1 (16x4), b1, W2 (16x16), b2,
/// W3 (1x16), b3; matrices row-major. Gradients use the same layout.
class MlpParams {
 public:
  static constexpr std::size_t kW1 = 0;
  static constexpr std::size_t kB1 = kW1 + kMlpHidden1 * kMlpInputs;
  static constexpr std::size_t kW2 = kB1 + kMlpHidden1;
  static constexpr std::size_t kB2 = kW2 + kMlpHidden2 * kMlpHidden1;
  static constexpr std::size_t kW3 = kB2 + kMlpHidden2;
  static constexpr std::size_t kB3 = kW3 + kMlpOutputs * kMlpHidden2;
  static constexpr std::size_t kSize = kB3 + kMlpOutputs;

  MlpParams() : data_(kSize, 0.0) {}

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }
  std::size_t size() const { return data_.size(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }

  double w1(int row, int col) const { return data_[kW1 + idx(row, col, kMlpInputs)]; }
  double w2(int row, int col) const { return data_[kW2 + idx(row, col, kMlpHidden1)]; }
  double w3(int col) const { return data_[kW3 + static_cast<std::size_t>(col)]; }
  double b1(int i) const { return data_[kB1 + static_cast<std::size_t>(i)]; }
  double b2(int i) const { return data_[kB2 + static_cast<std::size_t>(i)]; }
  double b3() const { return data_[kB3]; }

  bool all_finite() const;
  friend bool operator==(const MlpParams&, const MlpParams&) = default;

 private:
  static std::size_t idx(int r, int c, int cols) { return static_cast<std::size_t>(r * cols + c); }
  std::vector<double> data_;
};

/// Glorot-uniform weights in +-sqrt(6 / (fan_in + fan_out)), zero biases.
/// The generator is mt19937_64 with a hand-rolled [0,1) map, so the draw is
/// identical across standard libraries.
MlpParams init_params(std::uint64_t seed);

double glorot_bound(int fan_in, int fan_out);

enum class FeatureMode { peclet, raw };

FeatureMode parse_feature_mode(const std::string& s);
std::string to_string(FeatureMode m);

/// Problem-and-mesh descriptor I = {eps, b1, b2, h}.
struct FeatureVector {
  double epsilon{1.0};
  double b1{0.0};
  double b2{0.0};
  double h{1.0};

  double peclet() const;
  /// Network input. Peclet mode: (log10 eps, b1, b2, log10 Pe) with Pe
  /// floored at kPecletFeatureFloor; raw mode: (eps, b1, b2, h).
  /// Throws std::invalid_argument for non-finite or non-positive eps / h.
  std::array<double, kMlpInputs> network_input(FeatureMode mode) const;
};

inline constexpr double kPecletFeatureFloor = 1e-12;

struct MlpCache {
  std::array<double, kMlpInputs> x{};
  std::array<double, kMlpHidden1> h1{};
  std::array<double, kMlpHidden2> h2{};
  double out{0.5};
};

struct ForwardResult {
  double tau_hat{0.5};
  MlpCache cache;
};

/// tau_hat = sigmoid(W3 tanh(W2 tanh(W1 x + b1) + b2) + b3), strictly in (0,1).
ForwardResult forward(const MlpParams& params, const std::array<double, kMlpInputs>& x);
ForwardResult forward(const MlpParams& params, const FeatureVector& features,
                      FeatureMode mode = FeatureMode::peclet);

/// upstream * d tau_hat / d theta.
MlpParams backward(const MlpParams& params, const MlpCache& cache, double upstream);

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step{0};
  double initial_lr{1e-4};
  double lr{1e-4};
  int step_size{100};
  double gamma{0.1};
  double beta1{0.9};
  double beta2{0.999};
  double epsilon{1e-8};
};

/// Throws std::invalid_argument unless lr > 0, step_size >= 1, 0 < gamma <= 1.
AdamState make_adam_state(std::size_t n_params, double lr, int step_size, double gamma);

/// One bias-corrected Adam update at the current learning rate.
/// Throws std::invalid_argument on a shape mismatch.
void adam_step(MlpParams& params, const MlpParams& grads, AdamState& state);

/// lr = initial_lr * gamma^floor(epoch / step_size).
void steplr_update(AdamState& state, int epoch);

struct CheckpointHeader {
  std::uint64_t seed{0};
  int epoch{0};
  double cost{0.0};
};

/// Plain-text checkpoint: four header lines (layer sizes, seed, epoch, cost)
/// followed by one "<name> <count>" line and the values of each array.
void write_checkpoint(std::ostream& os, const MlpParams& params, const CheckpointHeader& header);
MlpParams read_checkpoint(std::istream& is, CheckpointHeader* header = nullptr);

}  // namespace supg
