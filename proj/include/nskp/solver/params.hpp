#pragma once

#include <cmath>
#include <string>

#include "nskp/errors.hpp"

namespace nskp {

struct PhysParams {
  double lambda = 0.1;
  double gamma = 2.0;
  double mu = 1.0;
  double kappa = 1.0;
  double rho_floor = 1e-3;

  /// Throws ContractViolation naming the offending field. mu and kappa may be
  /// zero (the linear acoustic tests switch them off); run configs demand > 0.
  void validate() const {
    auto bad = [](const std::string& what) { throw ContractViolation("PhysParams: " + what); };
    if (!(lambda > 0.0) || !std::isfinite(lambda)) bad("lambda must be > 0");
    if (!(gamma >= 1.5) || !std::isfinite(gamma)) bad("gamma must satisfy γ ≥ 3/2");
    if (!(mu >= 0.0) || !std::isfinite(mu)) bad("mu must be >= 0");
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) bad("kappa must be >= 0");
    if (!(rho_floor > 0.0) || !(rho_floor < 1.0)) bad("rho_floor must lie in (0, 1)");
  }

  friend bool operator==(const PhysParams&, const PhysParams&) = default;
};

}  // namespace nskp
