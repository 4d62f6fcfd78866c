#pragma once

#include <cmath>
#include <limits>

namespace nskp {

/// Klein-Gordon Strichartz range: 4/3 <= p <= 10/7 and 10/3 <= q <= 4.
inline bool kg_admissible(double q, double p) {
  return p >= 4.0 / 3.0 && p <= 10.0 / 7.0 && q >= 10.0 / 3.0 && q <= 4.0;
}

/// Beam Strichartz range: q >= 2 + 8/3.
inline bool beam_admissible(double q) { return q >= 14.0 / 3.0; }

inline constexpr double kSharpTolerance = 1e-12;

/// delta-admissibility 1/q + delta/r <= delta/2 with q, r >= 2 (infinity
/// allowed) and the endpoint (2, inf, 1) excluded. With `sharp` the pair must
/// sit on the line 1/q + delta/r = delta/2.
inline bool keel_tao_admissible(double q, double r, double delta, bool sharp = false) {
  if (!(delta > 0.0) || std::isnan(q) || std::isnan(r)) return false;
  if (q < 2.0 || r < 2.0) return false;
  if (q == 2.0 && std::isinf(r) && delta == 1.0) return false;
  const double lhs = 1.0 / q + delta / r;  // 1/inf = 0
  const double rhs = delta / 2.0;
  if (sharp) return std::abs(lhs - rhs) <= kSharpTolerance;
  return lhs <= rhs + kSharpTolerance;
}

}  // namespace nskp
