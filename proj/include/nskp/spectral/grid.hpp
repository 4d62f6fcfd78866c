#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "nskp/errors.hpp"

namespace nskp {

/// Wavevector and bookkeeping for one stored Fourier mode of a real field.
///
/// Coefficients are stored in the half-spectrum (r2c) layout: the last axis
/// keeps frequencies 0..n/2 only, the remaining modes follow from conjugate
/// symmetry. `weight` is the number of full-spectrum modes represented by the
/// stored one (1 on the l=0 and l=n/2 planes, 2 elsewhere), which is what
/// quadratic sums over the half spectrum need.
struct Mode {
  std::size_t index;
  std::array<double, 3> k;
  double k2;
  double weight;
  bool retained;  // survives the 2/3 dealiasing rule
  bool nyquist;   // some axis sits on the n/2 frequency
};

/// Uniform periodic grid on the box [0, L)^dim.
class Grid {
 public:
  Grid() = default;

  Grid(int dim, int n, double length) : dim_(dim), n_(n), length_(length) {
    if (dim != 2 && dim != 3) {
      throw ContractViolation("grid dimension must be 2 or 3, got " + std::to_string(dim));
    }
    if (n < 8 || n % 2 != 0) {
      throw ContractViolation("points per axis must be even and >= 8, got " + std::to_string(n));
    }
    if (!(length > 0.0) || !std::isfinite(length)) {
      throw ContractViolation("box length must be positive and finite");
    }
    wavenumbers_.resize(static_cast<std::size_t>(n));
    const double base = 2.0 * std::numbers::pi / length;
    for (int i = 0; i < n; ++i) {
      wavenumbers_[static_cast<std::size_t>(i)] = base * frequency(i);
    }
  }

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  int half() const noexcept { return n_ / 2 + 1; }

  std::size_t real_size() const noexcept {
    std::size_t s = 1;
    for (int d = 0; d < dim_; ++d) s *= static_cast<std::size_t>(n_);
    return s;
  }
  std::size_t spectral_size() const noexcept {
    return real_size() / static_cast<std::size_t>(n_) * static_cast<std::size_t>(half());
  }

  double spacing() const noexcept { return length_ / n_; }
  double volume() const noexcept { return std::pow(length_, dim_); }
  double cell_volume() const noexcept { return volume() / static_cast<double>(real_size()); }

  /// Signed integer frequency of array index i (FFT ordering).
  int frequency(int i) const noexcept { return i <= n_ / 2 ? i : i - n_; }
  double wavenumber(int i) const { return wavenumbers_.at(static_cast<std::size_t>(i)); }
  const std::vector<double>& wavenumbers() const noexcept { return wavenumbers_; }

  /// 2/3 rule: keep |frequency| < n/3 on every axis.
  bool retained_frequency(int f) const noexcept { return 3 * std::abs(f) < n_; }

  /// Physical coordinates of the real-space point with flat index `idx`.
  std::array<double, 3> position(std::size_t idx) const noexcept {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    const double h = spacing();
    const auto n = static_cast<std::size_t>(n_);
    for (int d = dim_ - 1; d >= 0; --d) {
      x[static_cast<std::size_t>(d)] = h * static_cast<double>(idx % n);
      idx /= n;
    }
    return x;
  }

  Grid with_length(double length) const { return Grid(dim_, n_, length); }

  /// Visit every stored spectral mode in memory order.
  template <class F>
  void for_each_mode(F&& f) const {
    const int h = half();
    const double base = 2.0 * std::numbers::pi / length_;
    std::size_t idx = 0;
    if (dim_ == 2) {
      for (int i = 0; i < n_; ++i) {
        const int fi = frequency(i);
        for (int l = 0; l < h; ++l, ++idx) {
          Mode m;
          m.index = idx;
          m.k = {base * fi, base * l, 0.0};
          m.k2 = m.k[0] * m.k[0] + m.k[1] * m.k[1];
          m.weight = (l == 0 || l == n_ / 2) ? 1.0 : 2.0;
          m.retained = retained_frequency(fi) && retained_frequency(l);
          m.nyquist = (i == n_ / 2) || (l == n_ / 2);
          f(m);
        }
      }
    } else {
      for (int i = 0; i < n_; ++i) {
        const int fi = frequency(i);
        for (int j = 0; j < n_; ++j) {
          const int fj = frequency(j);
          for (int l = 0; l < h; ++l, ++idx) {
            Mode m;
            m.index = idx;
            m.k = {base * fi, base * fj, base * l};
            m.k2 = m.k[0] * m.k[0] + m.k[1] * m.k[1] + m.k[2] * m.k[2];
            m.weight = (l == 0 || l == n_ / 2) ? 1.0 : 2.0;
            m.retained = retained_frequency(fi) && retained_frequency(fj) && retained_frequency(l);
            m.nyquist = (i == n_ / 2) || (j == n_ / 2) || (l == n_ / 2);
            f(m);
          }
        }
      }
    }
  }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dim_ == b.dim_ && a.n_ == b.n_ && a.length_ == b.length_;
  }

 private:
  int dim_ = 2;
  int n_ = 0;
  double length_ = 0.0;
  std::vector<double> wavenumbers_;
};

inline std::string describe(const Grid& g) {
  return std::to_string(g.dim()) + "D n=" + std::to_string(g.n()) +
         " L=" + std::to_string(g.length());
}

}  // namespace nskp
