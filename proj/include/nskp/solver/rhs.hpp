#pragma once

#include <cmath>
#include <vector>

#include "nskp/solver/state.hpp"

namespace nskp {

/// Time derivatives of (rho, m).
struct Tendency {
  SpectralField rho;
  SpectralField m;
};

namespace detail {

inline void mask_in_place(SpectralField& f) { dealias_in_place(f); }

}  // namespace detail

/// Full right-hand side:
///   rho_t = -div m
///   m_t   = -div(m (x) m / rho) - grad rho^gamma + div(mu rho D(u)) + rho grad phi + kappa rho grad Lap rho
/// Products are formed on the grid and truncated by the 2/3 rule.
inline Tendency compute_rhs(const SpectralField& rho, const SpectralField& m, const PhysParams& p) {
  require_no_vacuum(rho, p.rho_floor);
  const Grid& g = rho.grid();
  const int d = g.dim();
  const std::size_t n = g.real_size();
  auto r = rho.values(0);

  const SpectralField u = velocity(rho, m);
  const auto strain = strain_upper(dealias(u));

  // Symmetric flux tensor -m_a u_b + mu rho D_ab, stored as its upper triangle.
  std::vector<SpectralField> flux;
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      SpectralField t = SpectralField::scalar(g);
      auto out = t.mutable_values(0);
      auto ma = m.values(a);
      auto ub = u.values(b);
      const auto& dab = strain[detail::sym_index(a, b, d)];
      for (std::size_t i = 0; i < n; ++i) out[i] = -ma[i] * ub[i] + p.mu * r[i] * dab[i];
      flux.push_back(std::move(t));
    }
  }

  SpectralField pressure = SpectralField::scalar(g);
  {
    auto out = pressure.mutable_values(0);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::pow(r[i], p.gamma);
  }

  const SpectralField efield = gradient(potential_for(rho, p.lambda));
  const SpectralField korteweg = gradient(laplacian(rho));
  SpectralField body = SpectralField::vector(g);
  for (int a = 0; a < d; ++a) {
    auto e = efield.values(a);
    auto kk = korteweg.values(a);
    auto out = body.mutable_values(a);
    for (std::size_t i = 0; i < n; ++i) out[i] = r[i] * (e[i] + p.kappa * kk[i]);
  }

  Tendency t{SpectralField::scalar(g), SpectralField::vector(g)};
  std::vector<std::span<const Complex>> fc;
  for (const auto& f : flux) fc.push_back(f.coeffs(0));
  auto pc = pressure.coeffs(0);
  for (int a = 0; a < d; ++a) {
    auto bc = body.coeffs(a);
    auto out = t.m.mutable_coeffs(a);
    g.for_each_mode([&](const Mode& md) {
      if (!md.retained) {
        out[md.index] = Complex{};
        return;
      }
      Complex acc = bc[md.index] - kI * md.k[static_cast<std::size_t>(a)] * pc[md.index];
      for (int b = 0; b < d; ++b) {
        acc += kI * md.k[static_cast<std::size_t>(b)] * fc[detail::sym_index(a, b, d)][md.index];
      }
      out[md.index] = acc;
    });
  }
  t.rho = -1.0 * divergence(m);
  detail::mask_in_place(t.rho);
  return t;
}

inline Tendency compute_rhs(const FluidState& s) { return compute_rhs(s.rho, s.m, s.params); }

/// Linearization about rho = 1, m = 0: the part the stepper integrates exactly.
///   rho_t = -div m
///   m_t   = -gamma grad delta + (mu/2)(Lap m + grad div m) + grad phi(delta) + kappa grad Lap delta
inline Tendency linear_rhs(const SpectralField& rho, const SpectralField& m, const PhysParams& p) {
  const Grid& g = rho.grid();
  const int d = g.dim();
  const double l2 = p.lambda * p.lambda;
  Tendency t{SpectralField::scalar(g), SpectralField::vector(g)};
  auto rc = rho.coeffs(0);
  std::vector<std::span<const Complex>> mc;
  std::vector<std::span<Complex>> out;
  for (int a = 0; a < d; ++a) mc.push_back(m.coeffs(a));
  for (int a = 0; a < d; ++a) out.push_back(t.m.mutable_coeffs(a));
  auto orho = t.rho.mutable_coeffs(0);
  g.for_each_mode([&](const Mode& md) {
    if (!md.retained || md.k2 == 0.0) return;
    Complex divm{};
    for (int a = 0; a < d; ++a) divm += kI * md.k[static_cast<std::size_t>(a)] * mc[static_cast<std::size_t>(a)][md.index];
    orho[md.index] = -divm;
    const Complex delta = rc[md.index];
    const Complex scalar = (-p.gamma - 1.0 / (l2 * md.k2) - p.kappa * md.k2) * delta;
    for (int a = 0; a < d; ++a) {
      const double ka = md.k[static_cast<std::size_t>(a)];
      out[static_cast<std::size_t>(a)][md.index] =
          kI * ka * scalar + 0.5 * p.mu * (-md.k2 * mc[static_cast<std::size_t>(a)][md.index] + kI * ka * divm);
    }
  });
  return t;
}

/// Everything compute_rhs has beyond linear_rhs. The continuity equation is
/// linear, so the density component is identically zero.
inline Tendency nonlinear_rhs(const SpectralField& rho, const SpectralField& m, const PhysParams& p) {
  Tendency full = compute_rhs(rho, m, p);
  Tendency lin = linear_rhs(rho, m, p);
  return {SpectralField::scalar(rho.grid()), full.m - lin.m};
}

}  // namespace nskp
