#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "nskp/errors.hpp"
#include "nskp/spectral/fft.hpp"
#include "nskp/spectral/grid.hpp"

namespace nskp {

using Complex = std::complex<double>;
using Point = std::array<double, 3>;

/// Scalar or vector field on a periodic grid, held both as grid samples and as
/// Fourier coefficients. Whichever representation was written last is
/// authoritative; the other is synthesized on first read.
///
/// Copies are deep. Reads through a const reference may fill the cache, so a
/// single field must not be read from several threads at once; distinct
/// fields are independent.
class SpectralField {
 public:
  SpectralField() = default;

  SpectralField(Grid grid, int components)
      : grid_(std::move(grid)),
        components_(components),
        values_(static_cast<std::size_t>(components) * grid_.real_size(), 0.0),
        coeffs_(static_cast<std::size_t>(components) * grid_.spectral_size(), Complex{}),
        values_valid_(true),
        coeffs_valid_(true) {
    if (components != 1 && components != grid_.dim()) {
      throw ContractViolation("field must have 1 or dim components, got " +
                              std::to_string(components));
    }
  }

  static SpectralField scalar(const Grid& grid) { return SpectralField(grid, 1); }
  static SpectralField vector(const Grid& grid) { return SpectralField(grid, grid.dim()); }

  /// Sample f(x) at the grid points.
  static SpectralField from_function(const Grid& grid, const std::function<double(const Point&)>& f) {
    SpectralField out(grid, 1);
    auto v = out.mutable_values(0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.position(i));
    return out;
  }

  /// Sample a vector function; f(x, component) returns one component.
  static SpectralField from_function(const Grid& grid,
                                     const std::function<double(const Point&, int)>& f) {
    SpectralField out(grid, grid.dim());
    for (int c = 0; c < grid.dim(); ++c) {
      auto v = out.mutable_values(c);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.position(i), c);
    }
    return out;
  }

  const Grid& grid() const noexcept { return grid_; }
  int components() const noexcept { return components_; }
  bool is_scalar() const noexcept { return components_ == 1; }

  std::span<const double> values(int c = 0) const {
    check_component(c);
    sync_values();
    return {values_.data() + offset_real(c), grid_.real_size()};
  }

  std::span<const Complex> coeffs(int c = 0) const {
    check_component(c);
    sync_coeffs();
    return {coeffs_.data() + offset_spec(c), grid_.spectral_size()};
  }

  /// Writable grid samples of one component; invalidates the coefficients.
  std::span<double> mutable_values(int c = 0) {
    check_component(c);
    sync_values();
    coeffs_valid_ = false;
    return {values_.data() + offset_real(c), grid_.real_size()};
  }

  /// Writable coefficients of one component; invalidates the grid samples.
  std::span<Complex> mutable_coeffs(int c = 0) {
    check_component(c);
    sync_coeffs();
    values_valid_ = false;
    return {coeffs_.data() + offset_spec(c), grid_.spectral_size()};
  }

  /// Mean over the box of one component (the zero Fourier mode).
  double mean(int c = 0) const { return coeffs(c)[0].real(); }

 private:
  void check_component(int c) const {
    if (c < 0 || c >= components_) {
      throw ContractViolation("component " + std::to_string(c) + " out of range");
    }
  }
  std::size_t offset_real(int c) const { return static_cast<std::size_t>(c) * grid_.real_size(); }
  std::size_t offset_spec(int c) const { return static_cast<std::size_t>(c) * grid_.spectral_size(); }

  void sync_values() const {
    if (values_valid_) return;
    for (int c = 0; c < components_; ++c) {
      fft::backward(grid_, {coeffs_.data() + offset_spec(c), grid_.spectral_size()},
                    {values_.data() + offset_real(c), grid_.real_size()});
    }
    values_valid_ = true;
  }
  void sync_coeffs() const {
    if (coeffs_valid_) return;
    for (int c = 0; c < components_; ++c) {
      fft::forward(grid_, {values_.data() + offset_real(c), grid_.real_size()},
                   {coeffs_.data() + offset_spec(c), grid_.spectral_size()});
    }
    coeffs_valid_ = true;
  }

  Grid grid_;
  int components_ = 0;
  mutable std::vector<double> values_;
  mutable std::vector<Complex> coeffs_;
  mutable bool values_valid_ = false;
  mutable bool coeffs_valid_ = false;
};

inline void require_same_grid(const SpectralField& a, const SpectralField& b, const char* what) {
  if (!(a.grid() == b.grid())) throw ContractViolation(std::string(what) + ": grid mismatch");
}

}  // namespace nskp
