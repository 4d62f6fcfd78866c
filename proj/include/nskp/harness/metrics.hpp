#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "nskp/dispersive/strichartz.hpp"
#include "nskp/harness/test_functions.hpp"
#include "nskp/solver/state.hpp"

namespace nskp {

/// int (lambda E)_a (lambda E)_b phi_ab dx with E = grad phi, at one instant.
inline double efield_pairing(const SpectralField& scaled_field, const TestFunction& tf) {
  require_same_grid(scaled_field, tf.weight, "efield_pairing");
  const Grid& g = scaled_field.grid();
  const int d = g.dim();
  auto w = tf.weight.values(0);
  double sum = 0.0;
  for (int a = 0; a < d; ++a) {
    auto ea = scaled_field.values(a);
    for (int b = 0; b < d; ++b) {
      const double mab = tf.matrix[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      if (mab == 0.0) continue;
      auto eb = scaled_field.values(b);
      double s = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) s += ea[i] * eb[i] * w[i];
      sum += mab * s;
    }
  }
  return sum * g.cell_volume();
}

/// lambda grad phi.
inline SpectralField scaled_efield(const FluidState& s) { return s.params.lambda * gradient(s.phi); }

/// Space-time pairings |int_0^T <lambda E (x) lambda E, phi_j> dt|, accumulated
/// one uniform time sample at a time.
class WitnessAccumulator {
 public:
  explicit WitnessAccumulator(const std::vector<TestFunction>& tfs) : tfs_(&tfs), samples_(tfs.size()) {}

  void add(const FluidState& s) {
    times_.push_back(s.time);
    const SpectralField e = scaled_efield(s);
    for (std::size_t j = 0; j < tfs_->size(); ++j) samples_[j].push_back(efield_pairing(e, (*tfs_)[j]));
  }

  std::vector<double> values() const {
    std::vector<double> out;
    for (const auto& v : samples_) out.push_back(std::abs(trapezoid(times_, v)));
    return out;
  }

 private:
  const std::vector<TestFunction>* tfs_;
  std::vector<double> times_;
  std::vector<std::vector<double>> samples_;
};

inline std::vector<double> efield_witness(const std::vector<FluidState>& traj, const std::vector<TestFunction>& tfs) {
  WitnessAccumulator acc(tfs);
  for (const auto& s : traj) acc.add(s);
  return acc.values();
}

/// Median over grid points of |a(x) - b(x)| (Euclidean over components).
inline double median_abs_error(const SpectralField& a, const SpectralField& b) {
  auto diff = magnitude(a - b);
  if (diff.empty()) return 0.0;
  const auto mid = diff.begin() + static_cast<std::ptrdiff_t>(diff.size() / 2);
  std::nth_element(diff.begin(), mid, diff.end());
  if (diff.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(diff.begin(), mid);
  return 0.5 * (lower + upper);
}

struct ConvergenceMetrics {
  double solenoidal_l2_error = 0.0;     // ||H(m) - u||_{L^2_t L^2_x}
  double median_pointwise_error = 0.0;  // median_x |m - u| at the last sample
};

/// Compare a momentum trajectory with an incompressible reference sampled at the same times.
inline ConvergenceMetrics convergence_metrics(const FieldSeries& momentum, const FieldSeries& ref) {
  if (momentum.times.size() != ref.times.size() || momentum.fields.size() != momentum.times.size() ||
      ref.fields.size() != ref.times.size()) {
    throw ContractViolation("convergence_metrics: trajectories have different lengths");
  }
  std::vector<double> err;
  for (std::size_t i = 0; i < momentum.times.size(); ++i) {
    if (std::abs(momentum.times[i] - ref.times[i]) > 1e-9 * std::max(1.0, std::abs(ref.times[i]))) {
      throw ContractViolation("convergence_metrics: sample times differ");
    }
    require_same_grid(momentum.fields[i], ref.fields[i], "convergence_metrics");
    err.push_back(l2_norm(helmholtz_project(momentum.fields[i], HelmholtzPart::solenoidal) - ref.fields[i]));
  }
  ConvergenceMetrics m;
  if (err.empty()) return m;
  m.solenoidal_l2_error = time_norm(momentum.times, err, 2.0);
  m.median_pointwise_error = median_abs_error(momentum.fields.back(), ref.fields.back());
  return m;
}

}  // namespace nskp
