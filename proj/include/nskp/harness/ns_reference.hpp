#pragma once

#include <cmath>
#include <limits>
#include <string>

#include "nskp/dispersive/strichartz.hpp"
#include "nskp/solver/simulation.hpp"

namespace nskp {

struct NsOptions {
  double dt = 2e-3;
  double t_final = 1.0;
  double record_interval = 0.01;
  bool nonlinear = true;
  double cfl = 0.5;
};

struct NsTrajectory {
  FieldSeries velocity;
  double max_divergence = 0.0;  // max over samples of ||div u||_{L^2}
  std::array<double, 3> initial_mean{0.0, 0.0, 0.0};
  double max_mean_drift = 0.0;
};

inline constexpr double kSolenoidalTolerance = 1e-12;
inline constexpr double kTrajectoryDivergenceTolerance = 1e-10;

/// -H(u . grad u), dealiased.
inline SpectralField ns_nonlinear(const SpectralField& u) {
  const Grid& g = u.grid();
  const int d = g.dim();
  SpectralField adv = SpectralField::vector(g);
  for (int a = 0; a < d; ++a) {
    auto out = adv.mutable_values(a);
    std::fill(out.begin(), out.end(), 0.0);
    for (int b = 0; b < d; ++b) {
      const SpectralField dua = partial(u, b, a);
      auto x = dua.values(0);
      auto ub = u.values(b);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += ub[i] * x[i];
    }
  }
  dealias_in_place(adv);
  return -1.0 * helmholtz_project(adv, HelmholtzPart::solenoidal);
}

/// One step of u_t = nu Lap u - H(u . grad u): diffusion exactly, the rest
/// by integrating-factor SSP-RK2.
inline SpectralField ns_step(const SpectralField& u, double nu, double dt, bool nonlinear = true) {
  auto heat = [nu, dt](const SpectralField& f) {
    return apply_multiplier(f, [nu, dt](const Mode& m) { return std::exp(-nu * m.k2 * dt); });
  };
  if (!nonlinear) return heat(u);
  const SpectralField u1 = heat(linear_combination(1.0, u, dt, ns_nonlinear(u)));
  const SpectralField u2 = linear_combination(1.0, u1, dt, ns_nonlinear(u1));
  return linear_combination(0.5, heat(u), 0.5, u2);
}

inline double ns_cfl_limit(const SpectralField& u, double cfl) {
  double umax = 0.0;
  for (double x : magnitude(u)) umax = std::max(umax, x);
  return umax == 0.0 ? std::numeric_limits<double>::infinity() : cfl * u.grid().spacing() / umax;
}

/// Incompressible reference run. Recorded fields are fully synchronized
/// (grid values and coefficients both cached) so they can be read from
/// several threads afterwards.
inline NsTrajectory run_ns_reference(const SpectralField& u0, double nu, const NsOptions& opt = {}) {
  const Grid& g = u0.grid();
  if (u0.components() != g.dim()) throw ContractViolation("NS reference needs a vector field");
  if (!(nu >= 0.0)) throw ContractViolation("NS viscosity must be >= 0");
  const double scale = std::max(1.0, norm(u0, NormSpec::hdot(1.0)));
  if (l2_norm(divergence(u0)) > kSolenoidalTolerance * scale) {
    throw ContractViolation("NS reference initial velocity is not divergence-free");
  }
  const long steps = whole_steps(opt.t_final, opt.dt, "t_final");
  const long every = std::max(1L, whole_steps(opt.record_interval, opt.dt, "record_interval"));

  NsTrajectory out;
  SpectralField u = dealias(u0);
  for (int c = 0; c < g.dim(); ++c) out.initial_mean[static_cast<std::size_t>(c)] = u.mean(c);
  auto record = [&](double t) {
    for (int c = 0; c < u.components(); ++c) {
      u.values(c);
      u.coeffs(c);
    }
    out.velocity.times.push_back(t);
    out.velocity.fields.push_back(u);
    out.max_divergence = std::max(out.max_divergence, l2_norm(divergence(u)));
    for (int c = 0; c < g.dim(); ++c) {
      out.max_mean_drift = std::max(out.max_mean_drift, std::abs(u.mean(c) - out.initial_mean[static_cast<std::size_t>(c)]));
    }
  };
  record(0.0);
  for (long i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i - 1) * opt.dt;
    if (opt.nonlinear && opt.dt > ns_cfl_limit(u, opt.cfl)) {
      throw StepFailure("NS reference: dt exceeds advective limit", t, opt.dt);
    }
    u = ns_step(u, nu, opt.dt, opt.nonlinear);
    for (int c = 0; c < u.components(); ++c) {
      for (double x : u.values(c)) {
        if (!std::isfinite(x)) throw StepFailure("NS reference: non-finite velocity", t, opt.dt);
      }
    }
    if (i % every == 0) record(static_cast<double>(i) * opt.dt);
  }
  return out;
}

}  // namespace nskp
