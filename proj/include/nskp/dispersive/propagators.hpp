#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>

#include "nskp/spectral.hpp"

namespace nskp {

enum class WaveEquation { kg, beam };

inline const char* to_string(WaveEquation e) { return e == WaveEquation::kg ? "kg" : "beam"; }

/// (w, d_t w) at one time.
struct WavePair {
  SpectralField w;
  SpectralField wt;
  double time = 0.0;
};

/// Mode frequency: sqrt(1 + |k|^2) for Klein-Gordon, sqrt(1 + |k|^4) for Beam.
inline double frequency(WaveEquation eq, double k2) {
  return eq == WaveEquation::kg ? std::sqrt(1.0 + k2) : std::sqrt(1.0 + k2 * k2);
}

/// d omega / d|k|.
inline double group_velocity(WaveEquation eq, double k) {
  const double om = frequency(eq, k * k);
  return eq == WaveEquation::kg ? k / om : 2.0 * k * k * k / om;
}

/// Right-hand side F(t) of w_tt + A w = F. Quadrature nodes are placed on
/// sub-intervals no longer than `interval`.
struct Forcing {
  std::function<SpectralField(double)> at;
  double interval = 0.0;
};

namespace detail {

inline void require_pair(const WavePair& p) {
  if (!p.w.is_scalar() || !p.wt.is_scalar()) throw ContractViolation("wave fields must be scalar");
  require_same_grid(p.w, p.wt, "WavePair");
}

/// Add the exact free flow over `dt` of (a, b) = (w_hat, wt_hat) to (ow, owt), scaled by `scale`.
inline void free_flow_add(WaveEquation eq, const Grid& g, std::span<const Complex> a, std::span<const Complex> b,
                          double dt, double scale, std::span<Complex> ow, std::span<Complex> owt) {
  g.for_each_mode([&](const Mode& m) {
    const double om = frequency(eq, m.k2);
    const double c = std::cos(om * dt);
    const double s = std::sin(om * dt);
    const Complex wa = a.empty() ? Complex{} : a[m.index];
    const Complex wb = b.empty() ? Complex{} : b[m.index];
    ow[m.index] += scale * (c * wa + s / om * wb);
    owt[m.index] += scale * (-om * s * wa + c * wb);
  });
}

}  // namespace detail

/// Exact modewise solution at time t. Without forcing t may lie before
/// init.time (the free flow is a group); with forcing t >= init.time and the
/// Duhamel integral is taken with 2-point Gauss quadrature per sub-interval.
inline WavePair evolve(WaveEquation eq, const WavePair& init, double t,
                       const std::optional<Forcing>& forcing = std::nullopt) {
  detail::require_pair(init);
  const Grid& g = init.w.grid();
  const double elapsed = t - init.time;
  if (elapsed == 0.0) return init;
  if (!std::isfinite(elapsed)) throw ContractViolation("evolve: non-finite target time");

  WavePair out{SpectralField::scalar(g), SpectralField::scalar(g), t};
  auto ow = out.w.mutable_coeffs(0);
  auto owt = out.wt.mutable_coeffs(0);
  detail::free_flow_add(eq, g, init.w.coeffs(0), init.wt.coeffs(0), elapsed, 1.0, ow, owt);
  if (!forcing) return out;

  if (elapsed < 0.0) throw ContractViolation("forced evolution requires t >= init.time");
  if (!(forcing->interval > 0.0)) throw ContractViolation("forcing interval must be positive");
  // The Duhamel kernel oscillates at omega; the quadrature must resolve the
  // fastest frequency present in the forcing.
  const SpectralField f0 = forcing->at(init.time);
  require_same_grid(f0, init.w, "forcing");
  double om_max = 0.0;
  {
    auto fc = f0.coeffs(0);
    double peak = 0.0;
    for (const auto& c : fc) peak = std::max(peak, std::abs(c));
    g.for_each_mode([&](const Mode& m) {
      if (std::abs(fc[m.index]) > 1e-12 * peak) om_max = std::max(om_max, frequency(eq, m.k2));
    });
  }
  if (forcing->interval * om_max > std::numbers::pi) {
    throw ContractViolation("forcing interval " + std::to_string(forcing->interval) +
                            " is coarser than the Nyquist limit pi/omega_max = " + std::to_string(std::numbers::pi / om_max));
  }
  // w(t) += int_0^T sin(om (t - s)) / om F(s) ds, i.e. the free flow of (0, F(s)) over t - s.
  const long pieces = std::max(1L, static_cast<long>(std::ceil(elapsed / forcing->interval - 1e-12)));
  const double h = elapsed / static_cast<double>(pieces);
  const double off = 0.5 / std::sqrt(3.0);
  for (long i = 0; i < pieces; ++i) {
    for (double node : {0.5 - off, 0.5 + off}) {
      const double s = init.time + (static_cast<double>(i) + node) * h;
      const SpectralField fs = forcing->at(s);
      detail::free_flow_add(eq, g, {}, fs.coeffs(0), t - s, 0.5 * h, ow, owt);
    }
  }
  return out;
}

inline WavePair kg_evolve(const WavePair& init, double t, const std::optional<Forcing>& f = std::nullopt) {
  return evolve(WaveEquation::kg, init, t, f);
}
inline WavePair beam_evolve(const WavePair& init, double t, const std::optional<Forcing>& f = std::nullopt) {
  return evolve(WaveEquation::beam, init, t, f);
}

/// int (wt^2 + |grad w|^2 + w^2) for KG, int (wt^2 + |Lap w|^2 + w^2) for Beam.
inline double wave_energy(WaveEquation eq, const WavePair& p) {
  detail::require_pair(p);
  double sum = 0.0;
  auto a = p.w.coeffs(0);
  auto b = p.wt.coeffs(0);
  p.w.grid().for_each_mode([&](const Mode& m) {
    const double om = frequency(eq, m.k2);
    sum += m.weight * (std::norm(b[m.index]) + om * om * std::norm(a[m.index]));
  });
  return sum * p.w.grid().volume();
}

/// Grid values of the half-wave amplitude |w + i Omega^{-1} w_t|, which for a
/// free solution is the modulus of e^{-i t Omega}(f + i Omega^{-1} g).
inline std::vector<double> half_wave_modulus(WaveEquation eq, const WavePair& p) {
  const SpectralField v =
      apply_multiplier(p.wt, [eq](const Mode& m) { return 1.0 / frequency(eq, m.k2); });
  auto a = p.w.values(0);
  auto b = v.values(0);
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::hypot(a[i], b[i]);
  return out;
}

}  // namespace nskp
