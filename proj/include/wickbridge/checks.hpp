#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace wickbridge::checks {

// Outcome of one verification scan. Serialized as the canonical key-sorted
// JSON object {"identity","max_residual","pass","points","tolerance"}.
struct CheckReport {
  std::string identity;
  std::size_t points = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;

  std::string to_json_text(int precision = 12) const;
};

struct CheckOptions {
  std::size_t points = 1000;      // scan size where applicable
  std::uint64_t seed = 20120601;  // counter-RNG master seed
  double tolerance = 0.0;         // 0 = the check's pinned default
  std::size_t n_slices = 0;       // slicing check: 0 = full sweep
};

// Dictionary identity for the free propagator: exact small-rate branch over a
// random scan; tolerance 1e-10.
CheckReport check_free(const CheckOptions& opts = {});

// Dictionary identity for the harmonic propagator over a random scan with
// omega*t kept 0.05 away from multiples of pi; tolerance 1e-10.
CheckReport check_harmonic(const CheckOptions& opts = {});

// Mapped one-gate density against the oscillator ground state; 1e-10.
CheckReport check_ground(const CheckOptions& opts = {});

// Chapman-Kolmogorov closure: exact kernel-composition residual (free, OU,
// harmonic within a caustic window) must stay below 1e-12 and the quadrature
// form below 1e-8; the looser gate is reported as the tolerance.
CheckReport check_chapman(const CheckOptions& opts = {});

// Variational equivalence: the minimized-cost density and the transition
// density differ by an endpoint-independent constant (1e-10), and midpoint
// quadrature of the cost along the numeric extremal reproduces the closed
// form (1e-6, reported tolerance).
CheckReport check_variational(const CheckOptions& opts = {});

// Time-sliced composition: left-point slicing converges at first order (the
// per-n error budget is 5*gamma*dtau/n), exact slices reproduce the closed
// form to 1e-12 at every n. With opts.n_slices != 0 only that single slice
// count is checked against its budget.
CheckReport check_slicing(const CheckOptions& opts = {});

// Continuity residual of the Madelung phase reconstruction for an exactly
// known spreading packet: second-order decay under grid refinement.
CheckReport check_continuity(const CheckOptions& opts = {});

// Dispatch by name {free, harmonic, ground, chapman, variational, slicing,
// continuity}; throws UnknownIdentity otherwise.
CheckReport run_check(std::string_view name, const CheckOptions& opts = {});

}  // namespace wickbridge::checks
