#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "nskp/solver/rhs.hpp"

namespace nskp {

struct StepOptions {
  bool linear_only = false;  // drop every nonlinear term (dispersion tests)
  bool check_cfl = true;
  double cfl = 0.5;
};

/// Advective limit cfl * h / max|u|; infinity for a fluid at rest.
inline double cfl_limit(const FluidState& s, double cfl = 0.5) {
  const SpectralField u = velocity(s.rho, s.m);
  double umax = 0.0;
  for (double x : magnitude(u)) umax = std::max(umax, x);
  if (umax == 0.0) return std::numeric_limits<double>::infinity();
  return cfl * s.grid().spacing() / umax;
}

/// Exact flow of linear_rhs over time h, in place on the coefficients.
///
/// Per wavevector with a = |k| the longitudinal pair (delta, k.m/a) obeys
///   d/dt [delta, g] = [[0, -i a], [-i a c2, -mu a^2]] [delta, g],
///   c2 = gamma + 1/(lambda^2 a^2) + kappa a^2,
/// and the transverse momentum decays at rate mu a^2 / 2.
inline void propagate_linear(SpectralField& rho, SpectralField& m, const PhysParams& p, double h) {
  const Grid& g = rho.grid();
  const int d = g.dim();
  const double l2 = p.lambda * p.lambda;
  auto rc = rho.mutable_coeffs(0);
  std::vector<std::span<Complex>> mc;
  for (int a = 0; a < d; ++a) mc.push_back(m.mutable_coeffs(a));
  g.for_each_mode([&](const Mode& md) {
    if (md.k2 == 0.0) return;
    const double a = std::sqrt(md.k2);
    std::array<double, 3> khat{md.k[0] / a, md.k[1] / a, md.k[2] / a};
    Complex gl{};
    for (int c = 0; c < d; ++c) gl += khat[static_cast<std::size_t>(c)] * mc[static_cast<std::size_t>(c)][md.index];
    const double c2 = p.gamma + 1.0 / (l2 * md.k2) + p.kappa * md.k2;
    const double s = -0.5 * p.mu * md.k2;
    const double disc = s * s - md.k2 * c2;
    // E = e^{sh} C, F = e^{sh} S with exp(Ah) = E I + F (A - sI).
    double e_c, e_s;
    if (disc < 0.0) {
      const double th = std::sqrt(-disc);
      const double ex = std::exp(s * h);
      e_c = ex * std::cos(th * h);
      e_s = ex * std::sin(th * h) / th;
    } else if (disc > 0.0) {
      const double q = std::sqrt(disc);
      const double up = std::exp((s + q) * h);
      const double dn = std::exp((s - q) * h);
      e_c = 0.5 * (up + dn);
      e_s = 0.5 * (up - dn) / q;
    } else {
      const double ex = std::exp(s * h);
      e_c = ex;
      e_s = ex * h;
    }
    const Complex delta = rc[md.index];
    const Complex nd = e_c * delta + e_s * (-s * delta - kI * a * gl);
    const Complex ng = e_c * gl + e_s * (-kI * a * c2 * delta + s * gl);
    const double et = std::exp(-0.5 * p.mu * md.k2 * h);
    rc[md.index] = nd;
    for (int c = 0; c < d; ++c) {
      auto& mv = mc[static_cast<std::size_t>(c)][md.index];
      const double kc = khat[static_cast<std::size_t>(c)];
      mv = et * (mv - kc * gl) + kc * ng;
    }
  });
}

namespace detail {

inline void check_finite(const SpectralField& f, double time, double dt) {
  for (int c = 0; c < f.components(); ++c) {
    for (double x : f.values(c)) {
      if (!std::isfinite(x)) throw StepFailure("non-finite value after step", time, dt);
    }
  }
}

}  // namespace detail

/// One IMEX step: the linear part is integrated exactly and the remainder by
/// an integrating-factor SSP-RK2 (Heun) stage pair,
///   U1 = P(U + h N(U)),  U+ = (P U + U1 + h N(U1)) / 2.
inline FluidState step(const FluidState& s, double dt, const StepOptions& opt = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ContractViolation("step: dt must be positive");
  if (opt.check_cfl && !opt.linear_only) {
    const double limit = cfl_limit(s, opt.cfl);
    if (dt > limit) {
      throw StepFailure("dt " + std::to_string(dt) + " exceeds advective limit " + std::to_string(limit), s.time, dt);
    }
  }
  const PhysParams& p = s.params;
  SpectralField rho = dealias(s.rho);
  SpectralField m = dealias(s.m);
  try {
    if (opt.linear_only) {
      propagate_linear(rho, m, p, dt);
    } else {
      const Tendency n0 = nonlinear_rhs(rho, m, p);
      SpectralField r1 = rho;
      SpectralField m1 = linear_combination(1.0, m, dt, n0.m);
      propagate_linear(r1, m1, p, dt);
      const Tendency n1 = nonlinear_rhs(r1, m1, p);
      propagate_linear(rho, m, p, dt);
      rho = linear_combination(0.5, rho, 0.5, r1);
      m = linear_combination(0.5, m, 0.5, linear_combination(1.0, m1, dt, n1.m));
    }
  } catch (const VacuumError& e) {
    throw StepFailure(std::string("vacuum inside step: ") + e.what(), s.time, dt);
  }
  detail::check_finite(rho, s.time, dt);
  detail::check_finite(m, s.time, dt);
  try {
    return make_state(std::move(rho), std::move(m), p, s.time + dt);
  } catch (const VacuumError& e) {
    throw StepFailure(std::string("vacuum after step: ") + e.what(), s.time, dt);
  }
}

}  // namespace nskp
