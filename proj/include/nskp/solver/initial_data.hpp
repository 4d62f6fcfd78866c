#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "nskp/solver/state.hpp"

namespace nskp {

/// Amplitudes are RMS values; `band` is the largest physical |k| kept.
struct InitialDataOptions {
  double band = 0.75;
  double sigma_rms = 1.0;
  double solenoidal_rms = 1.0;
  double gradient_rms = 1.0;
};

struct InitialData {
  FluidState state;
  SpectralField u_solenoidal;  // the divergence-free part of u0, for the NS reference
};

namespace detail {

inline double rms(const SpectralField& f) {
  return std::sqrt(inner_product(f, f) / f.grid().volume());
}

/// Gaussian white noise restricted to 0 < |k| <= band and normalized to unit RMS.
inline SpectralField random_band(const Grid& g, int components, double band, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  SpectralField f(g, components);
  for (int c = 0; c < components; ++c) {
    for (auto& x : f.mutable_values(c)) x = normal(rng);
  }
  const double b2 = band * band;
  f = apply_multiplier(f, [b2](const Mode& m) { return (m.retained && m.k2 > 0.0 && m.k2 <= b2) ? 1.0 : 0.0; });
  const double r = rms(f);
  if (r == 0.0) throw ContractViolation("initial-data band contains no Fourier modes");
  return (1.0 / r) * f;
}

}  // namespace detail

/// The solenoidal part of u0 that ill_prepared draws for this seed, without
/// building a state.
inline SpectralField solenoidal_draw(const Grid& g, std::uint64_t seed, const InitialDataOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  (void)detail::random_band(g, 1, opt.band, rng);
  SpectralField sol = helmholtz_project(detail::random_band(g, g.dim(), opt.band, rng), HelmholtzPart::solenoidal);
  return (opt.solenoidal_rms / detail::rms(sol)) * sol;
}

/// Ill-prepared data: rho0 = 1 + lambda sigma0, u0 = solenoidal + gradient,
/// m0 = rho0 u0. The random draws depend on the seed only, so a lambda sweep
/// with a shared seed differs only through the lambda in rho0.
inline InitialData ill_prepared(const Grid& g, const PhysParams& p, std::uint64_t seed,
                                const InitialDataOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  const SpectralField sigma = detail::random_band(g, 1, opt.band, rng);
  SpectralField sol = helmholtz_project(detail::random_band(g, g.dim(), opt.band, rng), HelmholtzPart::solenoidal);
  sol = (opt.solenoidal_rms / detail::rms(sol)) * sol;
  const SpectralField chi = detail::random_band(g, 1, opt.band, rng);
  SpectralField grad = gradient(chi);
  grad = (opt.gradient_rms / detail::rms(grad)) * grad;

  SpectralField rho = (p.lambda * opt.sigma_rms) * sigma;
  rho.mutable_coeffs(0)[0] = 1.0;
  const SpectralField u = sol + grad;
  SpectralField m = dealias(multiply(rho, u));
  return {make_state(std::move(rho), std::move(m), p), sol};
}

/// Well-prepared data for the same seed: no density fluctuation, u0 solenoidal.
inline InitialData well_prepared(const Grid& g, const PhysParams& p, std::uint64_t seed,
                                 const InitialDataOptions& opt = {}) {
  InitialDataOptions w = opt;
  w.sigma_rms = 0.0;
  InitialData d = ill_prepared(g, p, seed, w);
  FluidState s = make_state(d.state.rho, d.u_solenoidal, p);
  return {std::move(s), std::move(d.u_solenoidal)};
}

/// Taylor-Green velocity (sin kx cos ky, -cos kx sin ky) at unit density, k = 2 pi / L.
inline SpectralField taylor_green_velocity(const Grid& g, double amplitude = 1.0) {
  const double k = 2.0 * std::numbers::pi / g.length();
  return SpectralField::from_function(g, [&](const Point& x, int c) {
    if (c == 0) return amplitude * std::sin(k * x[0]) * std::cos(k * x[1]);
    if (c == 1) return -amplitude * std::cos(k * x[0]) * std::sin(k * x[1]);
    return 0.0;
  });
}

inline FluidState taylor_green_state(const Grid& g, const PhysParams& p, double amplitude = 1.0) {
  SpectralField rho = SpectralField::scalar(g);
  rho.mutable_coeffs(0)[0] = 1.0;
  return make_state(std::move(rho), taylor_green_velocity(g, amplitude), p);
}

}  // namespace nskp
