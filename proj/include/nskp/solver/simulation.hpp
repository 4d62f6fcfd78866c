#pragma once

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "nskp/solver/energy.hpp"
#include "nskp/solver/stepper.hpp"

namespace nskp {

struct RunOptions {
  double dt = 2e-3;
  double t_final = 2.0;
  double record_interval = 0.01;
  StepOptions step;
};

struct Record {
  double time = 0.0;
  EnergyReport energy;
  double dissipation_rate = 0.0;
  double mass_error = 0.0;
  std::array<double, 3> momentum_mean{0.0, 0.0, 0.0};
};

struct RunResult {
  std::vector<Record> records;
  FluidState final_state;
  double initial_energy = 0.0;
  // Largest (E + dissipation - E0) / E0 over every step, not only records.
  double worst_energy_excess = -std::numeric_limits<double>::infinity();
  double max_mass_error = 0.0;
  double max_momentum_drift = 0.0;
  long steps = 0;
};

/// Integer count of `dt` in `span`, rejecting spans that are not a whole multiple.
inline long whole_steps(double span, double dt, const char* what) {
  if (!(dt > 0.0)) throw ContractViolation("dt must be positive");
  const double ratio = span / dt;
  const long n = std::lround(ratio);
  if (n < 0 || std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, ratio)) {
    throw ContractViolation(std::string(what) + " must be a whole multiple of dt");
  }
  return n;
}

/// Default step: 2e-3, shortened to resolve the plasma period 2 pi lambda with
/// about 300 steps, and snapped so `record_interval` is a whole number of steps.
inline double default_dt(double lambda, double record_interval = 0.01, double cap = 2e-3,
                         double per_lambda = 0.02) {
  const double target = per_lambda > 0.0 ? std::min(cap, per_lambda * lambda) : cap;
  const double steps = std::ceil(record_interval / target - 1e-9);
  return record_interval / steps;
}

inline std::array<double, 3> momentum_mean(const FluidState& s) {
  std::array<double, 3> out{0.0, 0.0, 0.0};
  for (int c = 0; c < s.grid().dim(); ++c) out[static_cast<std::size_t>(c)] = s.m.mean(c);
  return out;
}

struct NoObserver {
  void operator()(const FluidState&, const Record&) const {}
};

/// Integrate to t_final with a fixed step. The observer sees the state at
/// t = 0 and at every record time.
template <class Observer = NoObserver>
RunResult simulate(FluidState state, const RunOptions& opt, Observer&& observe = {}) {
  const long steps = whole_steps(opt.t_final, opt.dt, "t_final");
  const long every = std::max(1L, whole_steps(opt.record_interval, opt.dt, "record_interval"));

  RunResult out;
  const EnergyReport e0 = energy(state);
  double rate = dissipation_rate(state);
  DissipationIntegral diss(rate);
  const auto p0 = momentum_mean(state);
  out.initial_energy = e0.total;

  auto make_record = [&](const FluidState& s, const EnergyReport& e, double r) {
    Record rec;
    rec.time = s.time;
    rec.energy = e;
    rec.dissipation_rate = r;
    rec.mass_error = mass_error(s);
    rec.momentum_mean = momentum_mean(s);
    return rec;
  };

  {
    Record rec = make_record(state, e0, rate);
    observe(static_cast<const FluidState&>(state), static_cast<const Record&>(rec));
    out.records.push_back(rec);
  }
  out.max_mass_error = mass_error(state);

  for (long i = 1; i <= steps; ++i) {
    state = step(state, opt.dt, opt.step);
    state.time = static_cast<double>(i) * opt.dt;  // avoid drift from repeated addition
    rate = dissipation_rate(state);
    diss.advance(opt.dt, rate);
    const EnergyReport e = energy(state, diss.value());
    if (e0.total > 0.0) {
      out.worst_energy_excess = std::max(out.worst_energy_excess, (e.total + diss.value() - e0.total) / e0.total);
    }
    out.max_mass_error = std::max(out.max_mass_error, mass_error(state));
    const auto pm = momentum_mean(state);
    for (std::size_t c = 0; c < 3; ++c) {
      out.max_momentum_drift = std::max(out.max_momentum_drift, std::abs(pm[c] - p0[c]));
    }
    if (i % every == 0) {
      Record rec = make_record(state, e, rate);
      observe(static_cast<const FluidState&>(state), static_cast<const Record&>(rec));
      out.records.push_back(rec);
    }
  }
  out.steps = steps;
  out.final_state = std::move(state);
  return out;
}

}  // namespace nskp
