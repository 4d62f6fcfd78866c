#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "nskp/spectral.hpp"

namespace nskp {

/// Matrix-valued test function phi_ab(x) = weight(x) M_ab with M symmetric.
struct TestFunction {
  SpectralField weight;
  std::array<std::array<double, 3>, 3> matrix{};
  double radius = 0.0;
  Point center{0.0, 0.0, 0.0};
};

/// exp(1 - 1/(1 - s^2)) on |s| < 1, zero outside; peak value 1.
inline double bump(double s) {
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

/// Product of 1D bumps of the given radius around `center`, periodically wrapped.
inline SpectralField bump_field(const Grid& g, const Point& center, double radius) {
  const double L = g.length();
  return SpectralField::from_function(g, [&](const Point& x) {
    double v = 1.0;
    for (int d = 0; d < g.dim(); ++d) {
      double dx = x[static_cast<std::size_t>(d)] - center[static_cast<std::size_t>(d)];
      dx -= L * std::round(dx / L);
      v *= bump(dx / radius);
    }
    return v;
  });
}

/// Five bumps at radii L/4, L/4, L/8, L/8, L/16 with seeded centres and
/// symmetric matrices drawn uniformly from [-1, 1].
inline std::vector<TestFunction> make_test_functions(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  const double L = g.length();
  const std::array<double, 5> radii{L / 4.0, L / 4.0, L / 8.0, L / 8.0, L / 16.0};
  std::vector<TestFunction> out;
  for (double r : radii) {
    TestFunction tf;
    tf.radius = r;
    for (int d = 0; d < g.dim(); ++d) tf.center[static_cast<std::size_t>(d)] = L * unit(rng);
    for (int a = 0; a < 3; ++a) {
      for (int b = a; b < 3; ++b) {
        const double v = entry(rng);
        tf.matrix[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = v;
        tf.matrix[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = v;
      }
    }
    tf.weight = bump_field(g, tf.center, r);
    out.push_back(std::move(tf));
  }
  return out;
}

}  // namespace nskp
