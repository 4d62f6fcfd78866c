#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "nskp/solver/params.hpp"
#include "nskp/spectral.hpp"

namespace nskp {

/// (rho, m, phi) at one instant. phi is always re-derived from rho.
struct FluidState {
  double time = 0.0;
  SpectralField rho;
  SpectralField m;
  SpectralField phi;
  PhysParams params;

  const Grid& grid() const { return rho.grid(); }
};

inline constexpr double kMassTolerance = 1e-12;
inline constexpr double kPoissonConsistencyTolerance = 1e-10;

/// Throws VacuumError at the first grid point below the floor.
inline void require_no_vacuum(const SpectralField& rho, double floor) {
  auto v = rho.values(0);
  auto it = std::min_element(v.begin(), v.end());
  if (it == v.end()) return;
  if (!(*it >= floor) || !std::isfinite(*it)) {
    const auto loc = static_cast<std::size_t>(it - v.begin());
    throw VacuumError("density " + std::to_string(*it) + " below floor " + std::to_string(floor) +
                          " at grid index " + std::to_string(loc),
                      *it, loc);
  }
}

inline SpectralField density_excess(const SpectralField& rho) {
  SpectralField d = rho;
  d.mutable_coeffs(0)[0] -= 1.0;
  return d;
}

inline SpectralField potential_for(const SpectralField& rho, double lambda) {
  return solve_poisson(density_excess(rho), lambda);
}

/// Assemble a state, solving Poisson for phi. Checks every state invariant.
inline FluidState make_state(SpectralField rho, SpectralField m, const PhysParams& params,
                             double time = 0.0) {
  params.validate();
  if (!rho.is_scalar()) throw ContractViolation("density must be scalar");
  if (m.components() != rho.grid().dim()) throw ContractViolation("momentum must be a vector field");
  require_same_grid(rho, m, "make_state");
  if (std::abs(rho.mean(0) - 1.0) > kMassTolerance) {
    throw ContractViolation("mean density must be 1, got " + std::to_string(rho.mean(0)));
  }
  require_no_vacuum(rho, params.rho_floor);
  FluidState s;
  s.time = time;
  s.phi = potential_for(rho, params.lambda);
  s.rho = std::move(rho);
  s.m = std::move(m);
  s.params = params;
  return s;
}

/// Equilibrium rho = 1, m = 0.
inline FluidState equilibrium(const Grid& g, const PhysParams& params) {
  SpectralField rho = SpectralField::scalar(g);
  rho.mutable_coeffs(0)[0] = 1.0;
  return make_state(std::move(rho), SpectralField::vector(g), params);
}

/// pi = (rho^g - 1 - g (rho - 1)) / (g - 1), pointwise.
inline SpectralField renormalized_pressure(const SpectralField& rho, double gamma) {
  if (!rho.is_scalar()) throw ContractViolation("renormalized_pressure expects a scalar density");
  if (!(gamma > 1.0)) throw ContractViolation("renormalized_pressure needs gamma > 1");
  SpectralField out = SpectralField::scalar(rho.grid());
  auto r = rho.values(0);
  auto o = out.mutable_values(0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0)) {
      throw VacuumError("renormalized_pressure: nonpositive density at grid index " + std::to_string(i), r[i], i);
    }
    // pow(rho, g) - 1 - g (rho - 1) cancels badly near rho = 1; expm1/log1p keeps it accurate.
    const double x = r[i] - 1.0;
    const double val = std::expm1(gamma * std::log1p(x)) - gamma * x;
    o[i] = std::max(val, 0.0) / (gamma - 1.0);
  }
  return out;
}

/// sigma = (rho - 1) / lambda.
inline SpectralField fluctuation(const FluidState& s) {
  return (1.0 / s.params.lambda) * density_excess(s.rho);
}

/// u = m / rho on the grid (not dealiased).
inline SpectralField velocity(const SpectralField& rho, const SpectralField& m) {
  SpectralField u = SpectralField::vector(m.grid());
  auto r = rho.values(0);
  for (int c = 0; c < m.components(); ++c) {
    auto mv = m.values(c);
    auto o = u.mutable_values(c);
    for (std::size_t i = 0; i < r.size(); ++i) o[i] = mv[i] / r[i];
  }
  return u;
}

namespace detail {

inline std::size_t sym_index(int a, int b, int d) {
  if (a > b) std::swap(a, b);
  return static_cast<std::size_t>(a * d - a * (a - 1) / 2 + (b - a));
}

}  // namespace detail

/// Grid values of D(u) = (grad u + grad u^T)/2 for the dealiased velocity `ud`,
/// upper triangle in detail::sym_index order. Each partial is transformed once.
inline std::vector<std::vector<double>> strain_upper(const SpectralField& ud) {
  const int d = ud.grid().dim();
  const std::size_t n = ud.grid().real_size();
  std::vector<SpectralField> du;  // du[a*d+b] = d_b u_a
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) du.push_back(partial(ud, b, a));
  }
  std::vector<std::vector<double>> out;
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      auto x = du[static_cast<std::size_t>(a * d + b)].values(0);
      auto y = du[static_cast<std::size_t>(b * d + a)].values(0);
      std::vector<double> v(n);
      for (std::size_t i = 0; i < n; ++i) v[i] = 0.5 * (x[i] + y[i]);
      out.push_back(std::move(v));
    }
  }
  return out;
}

/// H-perp(m): the gradient part of the momentum.
inline SpectralField gradient_momentum(const FluidState& s) {
  return helmholtz_project(s.m, HelmholtzPart::gradient);
}

/// The same quantity through the continuity equation: -lambda grad Delta^{-1} d_t sigma
/// with d_t sigma = -div m / lambda. Agrees with gradient_momentum on dealiased
/// fields; odd derivatives drop the Nyquist planes, the projector does not.
inline SpectralField gradient_momentum_via_continuity(const FluidState& s) {
  const double lambda = s.params.lambda;
  const SpectralField dt_sigma = (-1.0 / lambda) * divergence(s.m);
  const SpectralField inv_lap =
      apply_multiplier(dt_sigma, [](const Mode& md) { return md.k2 == 0.0 ? 0.0 : -1.0 / md.k2; });
  return (-lambda) * gradient(inv_lap);
}

/// |mean(rho) - 1|.
inline double mass_error(const FluidState& s) { return std::abs(s.rho.mean(0) - 1.0); }

/// Residual of lambda^2 Laplace(phi) = rho - 1 in the max norm.
inline double poisson_residual(const FluidState& s) {
  const double l2 = s.params.lambda * s.params.lambda;
  return max_abs(l2 * laplacian(s.phi) - density_excess(s.rho));
}

}  // namespace nskp
