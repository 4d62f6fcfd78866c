#pragma once

#include <cstdint>
#include <random>

#include "nskp/spectral.hpp"

namespace nskp::testing {

/// White-noise field with standard normal grid samples.
inline SpectralField random_field(const Grid& g, int components, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SpectralField f(g, components);
  for (int c = 0; c < components; ++c) {
    for (auto& x : f.mutable_values(c)) x = normal(rng);
  }
  return f;
}

/// Random field restricted to the dealiased band.
inline SpectralField random_band_limited(const Grid& g, int components, std::uint64_t seed) {
  return dealias(random_field(g, components, seed));
}

inline double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    auto x = a.values(c);
    auto y = b.values(c);
    for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  }
  return m;
}

}  // namespace nskp::testing
