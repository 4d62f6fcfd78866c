#pragma once

#include <cmath>
#include <vector>

#include "nskp/dispersive/propagators.hpp"
#include "nskp/dispersive/strichartz.hpp"
#include "nskp/solver/state.hpp"

namespace nskp {

/// Relabel a fluctuation series in the acoustic variables tau = t / lambda and
/// y = x (kg) or y = x / sqrt(lambda) (beam). Values are untouched; the beam
/// case only changes the box length carried by the grid.
inline FieldSeries acoustic_rescale(const FieldSeries& sigma, double lambda, WaveEquation mode) {
  if (!(lambda > 0.0)) throw ContractViolation("acoustic_rescale: lambda must be positive");
  uniform_spacing(sigma.times);
  FieldSeries out;
  out.times.reserve(sigma.times.size());
  for (double t : sigma.times) out.times.push_back(t / lambda);
  for (const auto& f : sigma.fields) {
    if (mode == WaveEquation::kg) {
      out.fields.push_back(f);
      continue;
    }
    const Grid g = f.grid().with_length(f.grid().length() / std::sqrt(lambda));
    SpectralField r(g, f.components());
    for (int c = 0; c < f.components(); ++c) {
      auto src = f.values(c);
      std::copy(src.begin(), src.end(), r.mutable_values(c).begin());
    }
    out.fields.push_back(std::move(r));
  }
  return out;
}

/// The sigma = (rho - 1)/lambda series of a state trajectory, rescaled.
inline FieldSeries acoustic_rescale(const std::vector<FluidState>& states, WaveEquation mode) {
  if (states.empty()) return {};
  const double lambda = states.front().params.lambda;
  FieldSeries sigma;
  for (const auto& s : states) {
    if (s.params.lambda != lambda) throw ContractViolation("acoustic_rescale: mixed lambda in series");
    sigma.times.push_back(s.time);
    sigma.fields.push_back(fluctuation(s));
  }
  return acoustic_rescale(sigma, lambda, mode);
}

}  // namespace nskp
