#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "nskp/spectral.hpp"

namespace nskp {

/// Fields sampled on a uniform time grid.
struct FieldSeries {
  std::vector<double> times;
  std::vector<SpectralField> fields;
};

inline constexpr double kUniformSamplingTolerance = 1e-9;

/// Throws unless `times` is strictly increasing with constant spacing; returns the spacing.
inline double uniform_spacing(const std::vector<double>& times) {
  if (times.size() < 2) return 0.0;
  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(dt > 0.0)) throw ContractViolation("time samples must be strictly increasing");
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - times[i - 1] - dt) > kUniformSamplingTolerance * std::max(1.0, std::abs(times[i]))) {
      throw ContractViolation("time samples are not uniform");
    }
  }
  return dt;
}

/// Trapezoid rule for int v dt on uniform samples.
inline double trapezoid(const std::vector<double>& times, const std::vector<double>& values) {
  if (times.size() != values.size()) throw ContractViolation("trapezoid: size mismatch");
  if (values.size() < 2) return 0.0;
  const double dt = uniform_spacing(times);
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    sum += (i == 0 || i + 1 == values.size()) ? 0.5 * values[i] : values[i];
  }
  return sum * dt;
}

/// (int |v(t)|^q dt)^{1/q} by the trapezoid rule on uniform samples; q = inf
/// gives the maximum. A constant series c on [0, T] returns c T^{1/q}.
inline double time_norm(const std::vector<double>& times, const std::vector<double>& values, double q) {
  if (!(q >= 1.0)) throw ContractViolation("time exponent q must be >= 1");
  if (times.size() != values.size()) throw ContractViolation("time_norm: size mismatch");
  if (values.empty()) return 0.0;
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  const double dt = uniform_spacing(times);
  if (values.size() == 1) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double w = (i == 0 || i + 1 == values.size()) ? 0.5 : 1.0;
    sum += w * std::pow(std::abs(values[i]), q);
  }
  return std::pow(sum * dt, 1.0 / q);
}

/// || f ||_{L^q_t X} with X given by `spec`.
inline double strichartz_norm(const FieldSeries& series, double q, const NormSpec& spec) {
  if (!(q >= 1.0)) throw ContractViolation("time exponent q must be >= 1");
  if (series.times.size() != series.fields.size()) throw ContractViolation("series: size mismatch");
  std::vector<double> values;
  values.reserve(series.fields.size());
  for (const auto& f : series.fields) values.push_back(norm(f, spec));
  return time_norm(series.times, values, q);
}

}  // namespace nskp
