#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nskp/io/outputs.hpp"

namespace nskp::io {

struct CheckResult {
  std::string name;
  double value = 0.0;      // measured defect
  double tolerance = 0.0;  // passes when value <= tolerance
  bool passed = false;
  std::string detail;      // exception text when the check could not run
};

struct CheckReport {
  std::vector<CheckResult> results;
  double seconds = 0.0;
  bool all_passed() const {
    for (const auto& r : results) {
      if (!r.passed) return false;
    }
    return true;
  }
};

namespace detail {

inline SpectralField normal_field(const Grid& g, int comps, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  SpectralField f(g, comps);
  for (int c = 0; c < comps; ++c) {
    for (double& x : f.mutable_values(c)) x = nd(rng);
  }
  return f;
}

inline double rel(double err, double scale) { return err / std::max(scale, 1e-300); }

}  // namespace detail

/// Worst relative defect of H and H-perp idempotence, their complementarity
/// away from the mean, div H v = 0 and curl H-perp v = 0, over `count` white
/// noise fields.
inline double projector_defect(const Grid& g, int count) {
  double worst = 0.0;
  for (int s = 0; s < count; ++s) {
    const SpectralField v = detail::normal_field(g, g.dim(), 1000 + static_cast<std::uint64_t>(s));
    const SpectralField hv = helmholtz_project(v, HelmholtzPart::solenoidal);
    const SpectralField gv = helmholtz_project(v, HelmholtzPart::gradient);
    const double scale = l2_norm(v);
    worst = std::max(worst, detail::rel(l2_norm(helmholtz_project(hv, HelmholtzPart::solenoidal) - hv), scale));
    worst = std::max(worst, detail::rel(l2_norm(helmholtz_project(gv, HelmholtzPart::gradient) - gv), scale));
    // H + H-perp is the identity away from the mean mode.
    SpectralField sum = hv + gv;
    SpectralField zero_mean = v;
    for (int c = 0; c < g.dim(); ++c) {
      sum.mutable_coeffs(c)[0] = 0.0;
      zero_mean.mutable_coeffs(c)[0] = 0.0;
    }
    worst = std::max(worst, detail::rel(l2_norm(sum - zero_mean), scale));
    worst = std::max(worst, detail::rel(l2_norm(divergence(hv)), norm(v, NormSpec::hdot(1.0))));
    worst = std::max(worst, detail::rel(l2_norm(curl(gv)), norm(v, NormSpec::hdot(1.0))));
  }
  return worst;
}

/// Worst relative residual of lambda^2 Lap phi = f for `count` zero-mean white
/// noise sources at each lambda in {1, 0.1, 0.01}.
inline double poisson_defect(const Grid& g, int count) {
  double worst = 0.0;
  for (double lambda : {1.0, 0.1, 0.01}) {
    for (int s = 0; s < count; ++s) {
      SpectralField f = detail::normal_field(g, 1, 2000 + static_cast<std::uint64_t>(s));
      f.mutable_coeffs(0)[0] = 0.0;
      const SpectralField phi = solve_poisson(f, lambda);
      worst = std::max(worst, detail::rel(l2_norm((lambda * lambda) * laplacian(phi) - f), l2_norm(f)));
    }
  }
  return worst;
}

/// The invariant suite behind `nskp check`: every module on small grids.
inline CheckReport run_check_suite() {
  using namespace detail;
  const auto start = std::chrono::steady_clock::now();
  CheckReport report;
  auto add = [&](const std::string& name, double tol, const std::function<double()>& measure) {
    CheckResult r{name, 0.0, tol, false, {}};
    try {
      r.value = measure();
      r.passed = std::isfinite(r.value) && r.value <= tol;
    } catch (const std::exception& e) {
      r.value = std::numeric_limits<double>::quiet_NaN();
      r.detail = e.what();
    }
    report.results.push_back(std::move(r));
  };
  const double two_pi = 2.0 * std::numbers::pi;
  const Grid g2(2, 32, two_pi * 8.0);
  const Grid g3(3, 16, two_pi * 8.0);

  add("fft_round_trip", 1e-12, [&] {
    const SpectralField f = normal_field(g3, 1, 1);
    SpectralField h = SpectralField::scalar(g3);
    auto c = f.coeffs(0);
    std::copy(c.begin(), c.end(), h.mutable_coeffs(0).begin());
    return rel(l2_norm(h - f), l2_norm(f)) + max_abs(h - f) / std::max(max_abs(f), 1e-300);
  });
  add("projector_identities_2d", 1e-12, [&] { return projector_defect(g2, 10); });
  add("projector_identities_3d", 1e-12, [&] { return projector_defect(g3, 10); });
  add("poisson_residual", 1e-10, [&] { return poisson_defect(g2, 10); });

  add("rhs_vanishes_at_equilibrium", 1e-14, [&] {
    const Tendency t = compute_rhs(equilibrium(g2, PhysParams{}));
    return max_abs(t.rho) + max_abs(t.m);
  });

  // The energy budget is only as good as the spatial resolution: 64 points on
  // 2 pi 8 already overshoot 1e-6 with band 0.75 data.
  PhysParams p;
  p.lambda = 0.1;
  const InitialData d = ill_prepared(Grid(2, 128, two_pi * 8.0), p, 42);
  RunOptions ro;
  ro.dt = default_dt(p.lambda);
  ro.t_final = 0.1;
  RunResult run;
  add("energy_inequality", 1e-6, [&] {
    run = simulate(d.state, ro);
    return std::max(run.worst_energy_excess, 0.0);
  });
  add("mass_conservation", 1e-12, [&] { return run.records.empty() ? NAN : run.max_mass_error; });
  add("momentum_mean_drift", 1e-10, [&] { return run.records.empty() ? NAN : run.max_momentum_drift; });

  add("checkpoint_round_trip", 0.0, [&] {
    const FluidState back = decode_checkpoint(encode_checkpoint(d.state), "memory");
    return max_abs(back.rho - d.state.rho) + max_abs(back.m - d.state.m);
  });

  for (WaveEquation eq : {WaveEquation::kg, WaveEquation::beam}) {
    const std::string tag = to_string(eq);
    const WavePair w0{gaussian_packet(g3, 1.5), 0.5 * gaussian_packet(g3, 2.0), 0.0};
    add(tag + "_energy_conservation", 1e-10, [&] {
      const double e0 = wave_energy(eq, w0);
      return rel(std::abs(wave_energy(eq, evolve(eq, w0, 50.0)) - e0), e0);
    });
    add(tag + "_group_law", 1e-12, [&] {
      // Target times are absolute.
      const WavePair a = evolve(eq, evolve(eq, w0, 1.3), 3.4);
      const WavePair b = evolve(eq, w0, 3.4);
      const WavePair back = evolve(eq, b, 0.0);
      const double scale = max_abs(w0.w);
      return std::max({max_abs(a.w - b.w), max_abs(a.wt - b.wt), max_abs(back.w - w0.w)}) / scale;
    });
  }

  add("admissibility_tables", 0.0, [] {
    int wrong = 0;
    wrong += !kg_admissible(4.0, 4.0 / 3.0) + !kg_admissible(10.0 / 3.0, 10.0 / 7.0) + kg_admissible(3.2, 1.4) +
             kg_admissible(4.0, 1.5);
    wrong += !beam_admissible(14.0 / 3.0) + beam_admissible(4.6);
    wrong += keel_tao_admissible(2.0, std::numeric_limits<double>::infinity(), 1.0) +
             !keel_tao_admissible(2.0, 6.0, 1.5, true);
    return static_cast<double>(wrong);
  });

  add("ns_taylor_green", 1e-3, [&] {
    const Grid g(2, 32, two_pi);
    NsOptions no;
    no.dt = 0.01;
    no.t_final = 0.5;
    no.record_interval = 0.5;
    const auto traj = run_ns_reference(taylor_green_velocity(g), 1.0, no);
    const SpectralField exact = std::exp(-2.0 * 0.5) * taylor_green_velocity(g);
    return rel(l2_norm(traj.velocity.fields.back() - exact), l2_norm(exact)) +
           (traj.max_divergence > 1e-10 ? 1.0 : 0.0);
  });

  add("sweep_smoke", 0.0, [&] {
    SweepConfig c;
    c.lambdas = {0.2, 0.1};
    c.grid = {2, 32, two_pi * 8.0};
    c.t_final = 0.05;
    c.threads = 1;
    const SweepReport r = run_sweep(c);
    return r.all_ok() && std::isfinite(r.fluct_slope) ? 0.0 : 1.0;
  });

  add("config_round_trip", 0.0, [] {
    int wrong = 0;
    for (RunMode m : {RunMode::simulate, RunMode::sweep, RunMode::decay, RunMode::ns_ref, RunMode::check}) {
      const RunConfig c = parse_config("", {{"mode", to_string(m)}});
      wrong += !(parse_config(emit_config(c)) == c);
    }
    return static_cast<double>(wrong);
  });

  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

inline OutputBundle bundle_check(const CheckReport& r) {
  OutputBundle b;
  Csv csv({"check", "value", "tolerance", "passed"});
  Json list = Json::array();
  for (const auto& c : r.results) {
    csv.row(std::vector<std::string>{c.name, detail::format_double(c.value), detail::format_double(c.tolerance),
                                     c.passed ? "true" : "false"});
    Json j{{"check", c.name}, {"value", detail::finite_or_null(c.value)}, {"tolerance", c.tolerance}, {"passed", c.passed}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    list.push_back(j);
  }
  b.add_csv("check.csv", csv);
  b.add_json("check.json", Json{{"all_passed", r.all_passed()}, {"results", list}});
  return b;
}

}  // namespace nskp::io
