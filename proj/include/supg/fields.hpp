#pragma once

#include <cstddef>
#include <vector>

namespace supg {

/// Per-cell (DG0) stabilization parameters tau_K. Values are >= 0 and finite.
struct TauField {
  std::vector<double> values;

  TauField() = default;
  explicit TauField(std::vector<double> v) : values(std::move(v)) {}
  static TauField constant(std::size_t n_cells, double tau) {
    return TauField(std::vector<double>(n_cells, tau));
  }
  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }

  /// Throws std::invalid_argument on a size mismatch or a negative or
  /// non-finite entry.
  void validate(std::size_t n_cells) const;
};

/// Per-cell magnitude of a discrete gradient, sqrt(|K|^-1 int_K |grad u|^2).
struct GradNormField {
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t k) const { return values[k]; }
};

}  // namespace supg
