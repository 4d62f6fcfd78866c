#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "nskp/dispersive/decay.hpp"
#include "nskp/harness/metrics.hpp"
#include "nskp/harness/ns_reference.hpp"
#include "nskp/solver/initial_data.hpp"
#include "nskp/solver/simulation.hpp"

namespace nskp {

struct GridSpec {
  int dim = 2;
  int n = 128;
  double box_length = 2.0 * std::numbers::pi * 8.0;

  Grid make() const { return Grid(dim, n, box_length); }
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Exponents of the mixed norm L^q_t L^p_x for the gradient momentum.
inline double mixed_norm_p(double s0) { return 4.0 * (s0 + 3.0) / (4.0 * s0 + 9.0); }
inline double mixed_norm_q(double s0) { return 4.0 * (s0 + 3.0) / (2.0 * s0 + 5.0); }

struct SweepConfig {
  std::vector<double> lambdas{0.2, 0.1, 0.05, 0.025};
  std::uint64_t seed = 42;
  GridSpec grid;
  double t_final = 1.0;
  double dt = 2e-3;               // upper bound on the step
  double dt_per_lambda = 0.02;     // step <= dt_per_lambda * lambda; 0 disables
  double record_interval = 0.01;
  // On divergence-free fields div(mu D(u)) = (mu/2) Lap u, so mu/2 is the
  // self-consistent reference viscosity.
  double ns_viscosity = 0.5;
  PhysParams params;  // lambda is replaced per entry
  InitialDataOptions data;
  bool well_prepared = false;
  double s0 = 1.5;
  int threads = 0;  // 0: one per lambda

  void validate() const {
    if (lambdas.empty()) throw ContractViolation("sweep needs at least one lambda");
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      if (!(lambdas[i] > 0.0)) throw ContractViolation("sweep lambdas must be positive");
      if (i > 0 && !(lambdas[i] < lambdas[i - 1])) throw ContractViolation("sweep lambdas must be strictly decreasing");
    }
    if (!(t_final > 0.0)) throw ContractViolation("sweep t_final must be positive");
    if (!(dt_per_lambda >= 0.0)) throw ContractViolation("dt_per_lambda must be >= 0");
    if (!(ns_viscosity >= 0.0)) throw ContractViolation("ns_viscosity must be >= 0");
    if (!(s0 >= 1.5)) throw ContractViolation("s0 must be >= 3/2");
    whole_steps(t_final, dt, "t_final");
    whole_steps(record_interval, dt, "record_interval");
    grid.make();
  }
};

struct SweepSample {
  double t = 0.0;
  double fluct_l2 = 0.0;       // ||rho - 1||_{L^2_x}
  double grad_mom_norm = 0.0;  // ||H-perp m||_{L^p_x}
  double sol_err = 0.0;        // ||H m - u_NS||_{L^2_x}
  double energy = 0.0;
  double dissipation = 0.0;    // accumulated
};

struct SweepEntry {
  double lambda = 0.0;
  bool ok = false;
  std::string diagnostic;
  double fluct_l2 = std::numeric_limits<double>::quiet_NaN();
  double grad_mom = std::numeric_limits<double>::quiet_NaN();
  double sol_mom_err = std::numeric_limits<double>::quiet_NaN();
  double efield_witness = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> efield_per_function;
  double energy_margin = std::numeric_limits<double>::quiet_NaN();  // min_t E0 - E - dissipation
  double initial_energy = std::numeric_limits<double>::quiet_NaN();
  double median_error = std::numeric_limits<double>::quiet_NaN();
  double max_mass_error = std::numeric_limits<double>::quiet_NaN();
  double max_momentum_drift = std::numeric_limits<double>::quiet_NaN();
  std::vector<SweepSample> series;
};

struct SweepReport {
  std::vector<SweepEntry> entries;
  double s0 = 1.5;
  double p = 0.0;
  double q = 0.0;
  double fluct_slope = std::numeric_limits<double>::quiet_NaN();
  double fluct_slope_r2 = std::numeric_limits<double>::quiet_NaN();
  double ns_max_divergence = 0.0;

  bool all_ok() const {
    return std::all_of(entries.begin(), entries.end(), [](const SweepEntry& e) { return e.ok; });
  }
};

/// Least-squares slope of log(fluct_l2) against log(lambda) over successful entries.
inline void fit_fluct_slope(SweepReport& r) {
  std::vector<double> x, y;
  for (const auto& e : r.entries) {
    if (e.ok && e.fluct_l2 > 0.0) {
      x.push_back(std::log(e.lambda));
      y.push_back(std::log(e.fluct_l2));
    }
  }
  if (x.size() < 2) return;
  const LineFit f = least_squares(x, y);
  r.fluct_slope = f.slope;
  r.fluct_slope_r2 = f.r_squared;
}

namespace detail {

inline SweepEntry run_sweep_entry(const SweepConfig& cfg, double lambda, const NsTrajectory& ns,
                                  const std::vector<TestFunction>& tfs) {
  SweepEntry e;
  e.lambda = lambda;
  try {
    const Grid g = cfg.grid.make();
    PhysParams p = cfg.params;
    p.lambda = lambda;
    const InitialData data =
        cfg.well_prepared ? well_prepared(g, p, cfg.seed, cfg.data) : ill_prepared(g, p, cfg.seed, cfg.data);
    RunOptions ro;
    ro.dt = default_dt(lambda, cfg.record_interval, cfg.dt, cfg.dt_per_lambda);
    ro.t_final = cfg.t_final;
    ro.record_interval = cfg.record_interval;
    const double p_exp = mixed_norm_p(cfg.s0);

    WitnessAccumulator witness(tfs);
    std::vector<double> times, fl, gm, se;
    std::size_t k = 0;
    SpectralField last_m;
    auto observe = [&](const FluidState& s, const Record& rec) {
      if (k >= ns.velocity.times.size() || std::abs(ns.velocity.times[k] - s.time) > 1e-9) {
        throw ContractViolation("sweep: reference samples out of step with the simulation");
      }
      // Copy the shared reference field: copying a synchronized field only reads it.
      const SpectralField u_ns = ns.velocity.fields[k];
      SweepSample row;
      row.t = s.time;
      row.fluct_l2 = l2_norm(density_excess(s.rho));
      row.grad_mom_norm = norm(gradient_momentum(s), NormSpec::lp(p_exp));
      row.sol_err = l2_norm(helmholtz_project(s.m, HelmholtzPart::solenoidal) - u_ns);
      row.energy = rec.energy.total;
      row.dissipation = rec.energy.dissipation_accum;
      e.series.push_back(row);
      times.push_back(row.t);
      fl.push_back(row.fluct_l2);
      gm.push_back(row.grad_mom_norm);
      se.push_back(row.sol_err);
      witness.add(s);
      if (k + 1 == ns.velocity.times.size()) e.median_error = median_abs_error(s.m, u_ns);
      ++k;
    };
    const RunResult res = simulate(data.state, ro, observe);
    e.fluct_l2 = time_norm(times, fl, 2.0);
    e.grad_mom = time_norm(times, gm, mixed_norm_q(cfg.s0));
    e.sol_mom_err = time_norm(times, se, 2.0);
    e.efield_per_function = witness.values();
    e.efield_witness = e.efield_per_function.empty()
                           ? 0.0
                           : *std::max_element(e.efield_per_function.begin(), e.efield_per_function.end());
    e.initial_energy = res.initial_energy;
    e.energy_margin = -res.worst_energy_excess * res.initial_energy;
    e.max_mass_error = res.max_mass_error;
    e.max_momentum_drift = res.max_momentum_drift;
    e.ok = true;
  } catch (const std::exception& ex) {
    e.ok = false;
    e.diagnostic = ex.what();
  }
  return e;
}

}  // namespace detail

/// Run every lambda of the sweep against one shared incompressible reference.
/// Entries are independent and run on separate threads; the result does not
/// depend on scheduling.
inline SweepReport run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  const Grid g = cfg.grid.make();
  // The solenoidal velocity draw depends on the seed only.
  const SpectralField u0 = solenoidal_draw(g, cfg.seed, cfg.data);
  NsOptions no;
  no.dt = cfg.dt;
  no.t_final = cfg.t_final;
  no.record_interval = cfg.record_interval;
  const NsTrajectory ns = run_ns_reference(u0, cfg.ns_viscosity, no);
  const std::vector<TestFunction> tfs = make_test_functions(g, cfg.seed);

  SweepReport report;
  report.s0 = cfg.s0;
  report.p = mixed_norm_p(cfg.s0);
  report.q = mixed_norm_q(cfg.s0);
  report.ns_max_divergence = ns.max_divergence;
  report.entries.resize(cfg.lambdas.size());

  const std::size_t count = cfg.lambdas.size();
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(count, cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads) : count));
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        report.entries[i] = detail::run_sweep_entry(cfg, cfg.lambdas[i], ns, tfs);
      }
    });
  }
  for (auto& t : pool) t.join();
  fit_fluct_slope(report);
  return report;
}

}  // namespace nskp
