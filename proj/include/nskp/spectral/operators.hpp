#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nskp/errors.hpp"
#include "nskp/spectral/field.hpp"

namespace nskp {

enum class DerivativeOp { grad, div, laplacian, bilaplacian };
enum class HelmholtzPart { solenoidal, gradient };

inline constexpr Complex kI{0.0, 1.0};

// ---------------------------------------------------------------------------
// Linear algebra on fields (performed on coefficients).

inline SpectralField linear_combination(double a, const SpectralField& x, double b,
                                        const SpectralField& y) {
  require_same_grid(x, y, "linear_combination");
  if (x.components() != y.components()) throw ContractViolation("linear_combination: arity mismatch");
  SpectralField out(x.grid(), x.components());
  for (int c = 0; c < x.components(); ++c) {
    auto xs = x.coeffs(c);
    auto ys = y.coeffs(c);
    auto o = out.mutable_coeffs(c);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = a * xs[i] + b * ys[i];
  }
  return out;
}

inline SpectralField operator+(const SpectralField& x, const SpectralField& y) {
  return linear_combination(1.0, x, 1.0, y);
}
inline SpectralField operator-(const SpectralField& x, const SpectralField& y) {
  return linear_combination(1.0, x, -1.0, y);
}
inline SpectralField operator*(double a, const SpectralField& x) {
  SpectralField out(x.grid(), x.components());
  for (int c = 0; c < x.components(); ++c) {
    auto xs = x.coeffs(c);
    auto o = out.mutable_coeffs(c);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = a * xs[i];
  }
  return out;
}

/// Scalar field holding one component of `v`.
inline SpectralField component(const SpectralField& v, int c) {
  SpectralField out = SpectralField::scalar(v.grid());
  auto src = v.coeffs(c);
  std::copy(src.begin(), src.end(), out.mutable_coeffs(0).begin());
  return out;
}

/// Apply a real multiplier m(k) to every coefficient of every component.
template <class Multiplier>
SpectralField apply_multiplier(const SpectralField& f, Multiplier&& m) {
  SpectralField out(f.grid(), f.components());
  for (int c = 0; c < f.components(); ++c) {
    auto src = f.coeffs(c);
    auto dst = out.mutable_coeffs(c);
    f.grid().for_each_mode([&](const Mode& mode) { dst[mode.index] = m(mode) * src[mode.index]; });
  }
  return out;
}

/// Zero every mode removed by the 2/3 rule (this includes the Nyquist planes).
inline SpectralField dealias(const SpectralField& f) {
  return apply_multiplier(f, [](const Mode& m) { return m.retained ? 1.0 : 0.0; });
}

inline void dealias_in_place(SpectralField& f) {
  for (int c = 0; c < f.components(); ++c) {
    auto d = f.mutable_coeffs(c);
    f.grid().for_each_mode([&](const Mode& m) {
      if (!m.retained) d[m.index] = Complex{};
    });
  }
}

/// Pointwise product of a scalar with a scalar or vector field, dealiased.
inline SpectralField multiply(const SpectralField& s, const SpectralField& f) {
  require_same_grid(s, f, "multiply");
  if (!s.is_scalar()) throw ContractViolation("multiply: first factor must be scalar");
  SpectralField out(f.grid(), f.components());
  auto sv = s.values(0);
  for (int c = 0; c < f.components(); ++c) {
    auto fv = f.values(c);
    auto o = out.mutable_values(c);
    for (std::size_t i = 0; i < o.size(); ++i) o[i] = sv[i] * fv[i];
  }
  dealias_in_place(out);
  return out;
}

// ---------------------------------------------------------------------------
// Differential operators.

/// Partial derivative along `axis` of one component. Odd-order derivatives
/// zero the Nyquist modes, whose i*k multiplier has no real counterpart.
inline SpectralField partial(const SpectralField& f, int axis, int c = 0) {
  SpectralField out = SpectralField::scalar(f.grid());
  auto src = f.coeffs(c);
  auto dst = out.mutable_coeffs(0);
  f.grid().for_each_mode([&](const Mode& m) {
    dst[m.index] = m.nyquist ? Complex{} : kI * m.k[static_cast<std::size_t>(axis)] * src[m.index];
  });
  return out;
}

inline SpectralField gradient(const SpectralField& f) {
  if (!f.is_scalar()) throw ContractViolation("grad requires a scalar field");
  SpectralField out = SpectralField::vector(f.grid());
  auto src = f.coeffs(0);
  for (int a = 0; a < f.grid().dim(); ++a) {
    auto dst = out.mutable_coeffs(a);
    f.grid().for_each_mode([&](const Mode& m) {
      dst[m.index] = m.nyquist ? Complex{} : kI * m.k[static_cast<std::size_t>(a)] * src[m.index];
    });
  }
  return out;
}

inline SpectralField divergence(const SpectralField& v) {
  if (v.components() != v.grid().dim()) throw ContractViolation("div requires a vector field");
  SpectralField out = SpectralField::scalar(v.grid());
  auto dst = out.mutable_coeffs(0);
  for (int a = 0; a < v.grid().dim(); ++a) {
    auto src = v.coeffs(a);
    v.grid().for_each_mode([&](const Mode& m) {
      if (!m.nyquist) dst[m.index] += kI * m.k[static_cast<std::size_t>(a)] * src[m.index];
    });
  }
  return out;
}

inline SpectralField laplacian(const SpectralField& f) {
  return apply_multiplier(f, [](const Mode& m) { return -m.k2; });
}

inline SpectralField bilaplacian(const SpectralField& f) {
  return apply_multiplier(f, [](const Mode& m) { return m.k2 * m.k2; });
}

inline SpectralField derivative_ops(const SpectralField& f, DerivativeOp op) {
  switch (op) {
    case DerivativeOp::grad: return gradient(f);
    case DerivativeOp::div: return divergence(f);
    case DerivativeOp::laplacian: return laplacian(f);
    case DerivativeOp::bilaplacian: return bilaplacian(f);
  }
  throw ContractViolation("unknown derivative operator");
}

/// Scalar vorticity in 2D, vector curl in 3D.
inline SpectralField curl(const SpectralField& v) {
  const int d = v.grid().dim();
  if (v.components() != d) throw ContractViolation("curl requires a vector field");
  if (d == 2) return partial(v, 0, 1) - partial(v, 1, 0);
  SpectralField out = SpectralField::vector(v.grid());
  for (int a = 0; a < 3; ++a) {
    const int b = (a + 1) % 3;
    const int c = (a + 2) % 3;
    const SpectralField w = partial(v, b, c) - partial(v, c, b);
    auto src = w.coeffs(0);
    std::copy(src.begin(), src.end(), out.mutable_coeffs(a).begin());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Helmholtz-Leray projection: gradient part k (k . v) / |k|^2, solenoidal the rest.
// The zero mode belongs to the solenoidal part.

inline SpectralField helmholtz_project(const SpectralField& v, HelmholtzPart part) {
  const Grid& g = v.grid();
  const int d = g.dim();
  if (v.components() != d) throw ContractViolation("helmholtz_project requires a vector field");
  SpectralField grad_part = SpectralField::vector(g);
  std::vector<std::span<const Complex>> src;
  std::vector<std::span<Complex>> dst;
  for (int a = 0; a < d; ++a) src.push_back(v.coeffs(a));
  for (int a = 0; a < d; ++a) dst.push_back(grad_part.mutable_coeffs(a));
  g.for_each_mode([&](const Mode& m) {
    if (m.k2 == 0.0) return;
    Complex kv{};
    for (int a = 0; a < d; ++a) kv += m.k[static_cast<std::size_t>(a)] * src[static_cast<std::size_t>(a)][m.index];
    kv /= m.k2;
    for (int a = 0; a < d; ++a) dst[static_cast<std::size_t>(a)][m.index] = m.k[static_cast<std::size_t>(a)] * kv;
  });
  if (part == HelmholtzPart::gradient) return grad_part;
  return v - grad_part;
}

// ---------------------------------------------------------------------------
// Poisson: lambda^2 Laplace(phi) = rhs with zero-mean gauge.

inline constexpr double kPoissonMeanTolerance = 1e-10;

inline SpectralField solve_poisson(const SpectralField& rhs, double lambda) {
  if (!rhs.is_scalar()) throw ContractViolation("solve_poisson requires a scalar source");
  if (!(lambda > 0.0)) throw ContractViolation("solve_poisson: lambda must be positive");
  const double mean = rhs.mean(0);
  if (std::abs(mean) > kPoissonMeanTolerance) {
    throw CompatibilityError("Poisson source has mean " + std::to_string(mean) +
                             "; a periodic solution needs a zero-mean source");
  }
  const double l2 = lambda * lambda;
  return apply_multiplier(rhs, [l2](const Mode& m) { return m.k2 == 0.0 ? 0.0 : -1.0 / (l2 * m.k2); });
}

// ---------------------------------------------------------------------------
// Norms.

/// Sobolev/Lebesgue norm selector. W^{s,p} with s != 0 and p != 2 is taken as
/// the L^p norm of the Bessel-potential-smoothed field, which is an
/// approximation rather than an exact discrete W^{s,p} norm.
struct NormSpec {
  double sobolev_order = 0.0;
  double lebesgue_p = 2.0;
  bool homogeneous = false;

  static NormSpec l2() { return {}; }
  static NormSpec lp(double p) { return {0.0, p, false}; }
  static NormSpec h(double s) { return {s, 2.0, false}; }
  static NormSpec hdot(double s) { return {s, 2.0, true}; }
};

inline double sobolev_multiplier(const Mode& m, const NormSpec& spec) {
  if (spec.homogeneous) {
    if (m.k2 == 0.0) return 0.0;
    return spec.sobolev_order == 0.0 ? 1.0 : std::pow(m.k2, 0.5 * spec.sobolev_order);
  }
  return spec.sobolev_order == 0.0 ? 1.0 : std::pow(1.0 + m.k2, 0.5 * spec.sobolev_order);
}

/// L^2 inner product over the box, summed over components.
inline double inner_product(const SpectralField& a, const SpectralField& b) {
  require_same_grid(a, b, "inner_product");
  if (a.components() != b.components()) throw ContractViolation("inner_product: arity mismatch");
  double sum = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    auto x = a.coeffs(c);
    auto y = b.coeffs(c);
    a.grid().for_each_mode([&](const Mode& m) {
      sum += m.weight * (x[m.index].real() * y[m.index].real() + x[m.index].imag() * y[m.index].imag());
    });
  }
  return sum * a.grid().volume();
}

/// Pointwise Euclidean magnitude of the components, on the grid.
inline std::vector<double> magnitude(const SpectralField& f) {
  std::vector<double> out(f.grid().real_size(), 0.0);
  for (int c = 0; c < f.components(); ++c) {
    auto v = f.values(c);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += v[i] * v[i];
  }
  for (auto& x : out) x = std::sqrt(x);
  return out;
}

/// Grid-quadrature L^p norm of pointwise magnitudes; p = infinity gives the max.
inline double lebesgue_norm(std::span<const double> mag, double cell_volume, double p) {
  if (std::isinf(p)) {
    double mx = 0.0;
    for (double x : mag) mx = std::max(mx, std::abs(x));
    return mx;
  }
  double sum = 0.0;
  for (double x : mag) sum += std::pow(std::abs(x), p);
  return std::pow(sum * cell_volume, 1.0 / p);
}

inline double norm(const SpectralField& f, const NormSpec& spec) {
  if (!(spec.lebesgue_p >= 1.0)) throw ContractViolation("norm: Lebesgue exponent must be >= 1");
  if (spec.lebesgue_p == 2.0) {
    double sum = 0.0;
    for (int c = 0; c < f.components(); ++c) {
      auto x = f.coeffs(c);
      f.grid().for_each_mode([&](const Mode& m) {
        const double w = sobolev_multiplier(m, spec);
        sum += m.weight * w * w * std::norm(x[m.index]);
      });
    }
    return std::sqrt(sum * f.grid().volume());
  }
  const bool smooth = spec.sobolev_order != 0.0 || spec.homogeneous;
  const SpectralField g =
      smooth ? apply_multiplier(f, [&](const Mode& m) { return sobolev_multiplier(m, spec); }) : f;
  const auto mag = magnitude(g);
  return lebesgue_norm(mag, f.grid().cell_volume(), spec.lebesgue_p);
}

inline double l2_norm(const SpectralField& f) { return norm(f, NormSpec::l2()); }

inline double max_abs(const SpectralField& f) {
  const auto mag = magnitude(f);
  return lebesgue_norm(mag, 1.0, std::numeric_limits<double>::infinity());
}

/// Orlicz-type split of |f| at the level 1/2: the L^2 norm of the part with
/// |f| <= 1/2 and the L^p norm of the part above it. Reported as a
/// diagnostic pair; no equivalence with the continuous Orlicz norm is claimed.
struct OrliczParts {
  double small_l2 = 0.0;
  double large_lp = 0.0;
};

inline OrliczParts orlicz_parts(const SpectralField& f, double p) {
  if (!(p >= 1.0)) throw ContractViolation("orlicz_parts: exponent must be >= 1");
  const auto mag = magnitude(f);
  double small = 0.0;
  double large = 0.0;
  for (double x : mag) {
    if (x <= 0.5) small += x * x;
    else large += std::pow(x, p);
  }
  const double dv = f.grid().cell_volume();
  return {std::sqrt(small * dv), std::pow(large * dv, 1.0 / p)};
}

}  // namespace nskp
