#pragma once

#include "nskp/solver/state.hpp"

namespace nskp {

/// Energy split of one state. The electric part carries the factor 1/2 that
/// makes E + dissipation nonincreasing for the system as written.
struct EnergyReport {
  double kinetic = 0.0;    // int rho |u|^2 / 2
  double internal = 0.0;   // int pi
  double capillary = 0.0;  // kappa int |grad rho|^2 / 2
  double electric = 0.0;   // lambda^2 int |grad phi|^2 / 2
  double dissipation_accum = 0.0;
  double bd_kinetic = 0.0;  // int rho |u + grad log rho|^2 / 2
  double total = 0.0;
};

namespace detail {

inline double grid_integral(std::span<const double> v, double cell) {
  double s = 0.0;
  for (double x : v) s += x;
  return s * cell;
}

inline double sum_of_squares(const SpectralField& f, double cell) {
  double s = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    for (double x : f.values(c)) s += x * x;
  }
  return s * cell;
}

}  // namespace detail

/// Instantaneous dissipation mu int rho |D(u)|^2.
inline double dissipation_rate(const FluidState& s) {
  require_no_vacuum(s.rho, s.params.rho_floor);
  const SpectralField u = velocity(s.rho, s.m);
  const int d = s.grid().dim();
  const auto dd = strain_upper(dealias(u));
  auto r = s.rho.values(0);
  double sum = 0.0;
  for (int a = 0; a < d; ++a) {
    for (int b = a; b < d; ++b) {
      const auto& v = dd[detail::sym_index(a, b, d)];
      const double w = a == b ? 1.0 : 2.0;  // off-diagonal entries appear twice
      for (std::size_t i = 0; i < r.size(); ++i) sum += w * r[i] * v[i] * v[i];
    }
  }
  return s.params.mu * sum * s.grid().cell_volume();
}

inline EnergyReport energy(const FluidState& s, double dissipation_accum = 0.0) {
  require_no_vacuum(s.rho, s.params.rho_floor);
  const Grid& g = s.grid();
  const double cell = g.cell_volume();
  const double lambda = s.params.lambda;
  EnergyReport e;

  auto r = s.rho.values(0);
  const SpectralField u = velocity(s.rho, s.m);
  const SpectralField grad_rho = gradient(s.rho);
  for (int c = 0; c < g.dim(); ++c) {
    auto mv = s.m.values(c);
    auto uv = u.values(c);
    auto gr = grad_rho.values(c);
    for (std::size_t i = 0; i < r.size(); ++i) {
      e.kinetic += 0.5 * mv[i] * uv[i];
      const double w = uv[i] + gr[i] / r[i];
      e.bd_kinetic += 0.5 * r[i] * w * w;
    }
  }
  e.kinetic *= cell;
  e.bd_kinetic *= cell;
  e.internal = detail::grid_integral(renormalized_pressure(s.rho, s.params.gamma).values(0), cell);
  e.capillary = 0.5 * s.params.kappa * detail::sum_of_squares(grad_rho, cell);
  e.electric = 0.5 * lambda * lambda * detail::sum_of_squares(gradient(s.phi), cell);
  e.dissipation_accum = dissipation_accum;
  e.total = e.kinetic + e.internal + e.capillary + e.electric;
  return e;
}

/// Running time integral of the dissipation rate sampled once per step.
/// Third-order Adams-Moulton weights after the first (trapezoid) interval.
class DissipationIntegral {
 public:
  explicit DissipationIntegral(double initial_rate) : prev_(initial_rate), cur_(initial_rate) {}

  void advance(double dt, double rate) {
    if (steps_ == 0) {
      value_ += 0.5 * dt * (cur_ + rate);
    } else {
      value_ += dt / 12.0 * (-prev_ + 8.0 * cur_ + 5.0 * rate);
    }
    prev_ = cur_;
    cur_ = rate;
    ++steps_;
  }

  double value() const noexcept { return value_; }

 private:
  double prev_;
  double cur_;
  double value_ = 0.0;
  long steps_ = 0;
};

}  // namespace nskp
