#pragma once

#include "wickbridge/error.hpp"

namespace wickbridge::ou {

// Parameter bundle of the single-variable fluctuation model R*dy/dtau + s*y = xi:
// resistance R, entropy curvature s, Boltzmann constant kB, relaxation rate
// gamma = s/R. The stationary variance is kB/s.
struct OUParams {
  double R = 1.0;
  double s = 1.0;
  double kB = 1.0;
  double gamma = 1.0;

  static OUParams make(double R, double s, double kB) {
    if (!(R > 0.0) || !(s > 0.0) || !(kB > 0.0))
      throw InvalidParameter("OUParams: R, s, kB must all be positive");
    return OUParams{R, s, kB, s / R};
  }

  // gamma fixed, resistance derived: R = s / gamma. Keeps the given rate
  // bit-exact instead of recomputing it from the derived resistance.
  static OUParams from_rate(double gamma, double s, double kB) {
    if (!(gamma > 0.0) || !(s > 0.0) || !(kB > 0.0))
      throw InvalidParameter("OUParams: gamma, s, kB must all be positive");
    return OUParams{s / gamma, s, kB, gamma};
  }
};

}  // namespace wickbridge::ou
