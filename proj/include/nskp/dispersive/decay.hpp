#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "nskp/dispersive/propagators.hpp"

namespace nskp {

struct DecayFit {
  WaveEquation equation = WaveEquation::kg;
  std::vector<double> times;
  std::vector<double> sup_norms;
  double fitted_exponent = 0.0;
  std::pair<double, double> fit_window{0.0, 0.0};
  double r_squared = 0.0;
  double wrap_around_time = 0.0;
  std::size_t fit_points = 0;
};

struct DecayOptions {
  std::optional<std::pair<double, double>> window;  // default [2, 0.8 wrap]
  double mass_fraction = 0.99;
};

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = a x + b.
inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw ContractViolation("least_squares needs >= 2 matching points");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw ContractViolation("least_squares: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  // A perfectly flat series is a perfect fit.
  f.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return f;
}

/// Time for the bulk of a packet to cross half the box: L / (2 v_g(k*)), where
/// k* bounds `fraction` of the L^2 mass of the half-wave field w + i Omega^{-1} w_t.
inline double wrap_around_time(WaveEquation eq, const WavePair& init, double fraction = 0.99) {
  const Grid& g = init.w.grid();
  auto a = init.w.coeffs(0);
  auto b = init.wt.coeffs(0);
  std::vector<std::pair<double, double>> spectrum;
  spectrum.reserve(g.spectral_size());
  double total = 0.0;
  g.for_each_mode([&](const Mode& m) {
    const double om = frequency(eq, m.k2);
    const double mass = m.weight * (std::norm(a[m.index]) + std::norm(b[m.index]) / (om * om));
    spectrum.emplace_back(std::sqrt(m.k2), mass);
    total += mass;
  });
  if (total == 0.0) return std::numeric_limits<double>::infinity();
  std::stable_sort(spectrum.begin(), spectrum.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });
  double acc = 0.0;
  double kstar = 0.0;
  for (const auto& [k, mass] : spectrum) {
    acc += mass;
    kstar = k;
    if (acc >= fraction * total) break;
  }
  const double v = group_velocity(eq, kstar);
  if (v == 0.0) return std::numeric_limits<double>::infinity();
  return g.length() / (2.0 * v);
}

/// Gaussian exp(-|x - c|^2 / (2 width^2)) centred in the box.
inline SpectralField gaussian_packet(const Grid& g, double width) {
  const double c = 0.5 * g.length();
  return SpectralField::from_function(g, [&](const Point& x) {
    double r2 = 0.0;
    for (int d = 0; d < g.dim(); ++d) r2 += (x[static_cast<std::size_t>(d)] - c) * (x[static_cast<std::size_t>(d)] - c);
    return std::exp(-r2 / (2.0 * width * width));
  });
}

/// Evolve freely, record sup_x |w + i Omega^{-1} w_t| at each sample time, and
/// fit the log-log slope over the window. Plain sup|w| carries the oscillation
/// of the mass term and would spoil the fit.
inline DecayFit measure_decay(WaveEquation eq, const WavePair& init, const std::vector<double>& sample_times,
                              const DecayOptions& opt = {}) {
  if (sample_times.size() < 3) throw ContractViolation("measure_decay needs at least 3 sample times");
  for (std::size_t i = 1; i < sample_times.size(); ++i) {
    if (!(sample_times[i] > sample_times[i - 1])) throw ContractViolation("sample times must increase strictly");
  }
  if (!(sample_times.front() > init.time)) throw ContractViolation("sample times must follow the initial time");
  DecayFit fit;
  fit.equation = eq;
  fit.wrap_around_time = wrap_around_time(eq, init, opt.mass_fraction);
  const double horizon = sample_times.back() - init.time;
  if (!(horizon < fit.wrap_around_time)) {
    throw ContractViolation("last sample at elapsed time " + std::to_string(horizon) +
                            " reaches the wrap-around time " + std::to_string(fit.wrap_around_time));
  }
  fit.fit_window = opt.window.value_or(std::make_pair(2.0, 0.8 * fit.wrap_around_time));
  if (!(fit.fit_window.first < fit.fit_window.second)) throw ContractViolation("empty fit window");

  std::vector<double> lx, ly;
  for (double t : sample_times) {
    const WavePair p = evolve(eq, init, t);
    const auto mod = half_wave_modulus(eq, p);
    const double sup = *std::max_element(mod.begin(), mod.end());
    fit.times.push_back(t);
    fit.sup_norms.push_back(sup);
    const double elapsed = t - init.time;
    if (elapsed >= fit.fit_window.first - 1e-12 && elapsed <= fit.fit_window.second + 1e-12) {
      lx.push_back(std::log(elapsed));
      ly.push_back(std::log(sup));
    }
  }
  if (lx.size() < 3) throw ContractViolation("fewer than 3 samples inside the fit window");
  const LineFit lf = least_squares(lx, ly);
  fit.fitted_exponent = -lf.slope;
  fit.r_squared = lf.r_squared;
  fit.fit_points = lx.size();
  return fit;
}

}  // namespace nskp
