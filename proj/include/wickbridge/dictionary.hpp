#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "wickbridge/common.hpp"
#include "wickbridge/ou_params.hpp"
#include "wickbridge/quantum.hpp"

namespace wickbridge::dict {

// ---------------------------------------------------------------------------
// Wick rotation tau = i t between mechanical and thermodynamic time. Both
// directions are exact involutions (multiplication by i swaps components).

struct ThermoTime {
  Complex value{};
};

inline ThermoTime wick(Complex t) { return ThermoTime{Complex(0.0, 1.0) * t}; }
inline ThermoTime wick(double t) { return wick(Complex(t, 0.0)); }
inline Complex wick_inverse(ThermoTime tau) {
  return Complex(0.0, -1.0) * tau.value;
}

// ---------------------------------------------------------------------------
// Parameter replacement map: omega <-> gamma, m*omega/hbar <-> s/(2 kB), with
// an optional length conversion x = lambda * y folded into s.

struct DictionaryMap {
  double lambda = 1.0;
};

ou::OUParams to_thermo(const DictionaryMap& map, const quantum::PhysParams& q,
                       double kB);
quantum::PhysParams to_quantum(const DictionaryMap& map, const ou::OUParams& p,
                               double hbar);

// lambda = 1 shorthands.
ou::OUParams map_params(const quantum::PhysParams& q, double kB);
quantum::PhysParams map_params_inverse(const ou::OUParams& p, double hbar);

// ---------------------------------------------------------------------------
// Complexified action: pair (S / 2kB, I / hbar). exp of the pair has modulus
// exp(entropy_part) and phase phase_part.

struct ComplexAction {
  double entropy_part = 0.0;  // S / (2 kB), dimensionless
  double phase_part = 0.0;    // I / hbar, dimensionless

  Complex exponent() const { return Complex(entropy_part, phase_part); }
  // Euclidean action over hbar as fixed by the Wick rotation.
  double euclidean_over_hbar() const { return phase_part; }

  static ComplexAction from(double S, double I, double kB, double hbar,
                            double entropy_factor = 1.0) {
    return ComplexAction{entropy_factor * S / (2.0 * kB), I / hbar};
  }
};

// ---------------------------------------------------------------------------
// Densities and the Born/Madelung maps

struct DensityGrid {
  std::vector<double> x;
  std::vector<double> rho;
  double dx = 0.0;

  double integral() const;
};

DensityGrid make_density_grid(std::vector<double> x,
                              std::vector<double> values, bool renormalize);

// Born map rho = |psi|^2, renormalized to quadrature unity. Discards the
// phase, so it is not injective.
DensityGrid born(const quantum::WavefunctionGrid& psi);

// Time-indexed densities sharing one spatial grid, for reconstructing the
// density rate of change by finite differences.
struct DensitySeries {
  std::vector<double> times;
  std::vector<DensityGrid> grids;
};

// Madelung inverse of the Born map at the time sample `at_index` (default:
// middle). Returns sqrt(rho) * exp(i phi / hbar) where the phase solves the
// one-dimensional continuity equation
//   drho/dt + d/dx (rho * dphi/dx / m) = 0
// by exact quadrature: dphi/dx = -m * cumint(drho/dt) / rho, then phi by
// cumulative integration with phi = 0 at the left edge of the support.
// Points where rho < floor are treated as outside the support; a sub-floor
// point strictly inside the support (an interior node) throws DensityFloor.
quantum::WavefunctionGrid born_inverse(const DensitySeries& series, double mass,
                                       double hbar, double floor = 1e-12,
                                       std::size_t at_index = SIZE_MAX);

// Duality pairing integral(f * rho) for a bounded observable sampled on the
// density grid. Normalizes by the quadrature mass so constant observables are
// returned exactly. Throws UnnormalizedDensity when |integral(rho) - 1| >
// norm_tol.
double observable_average(std::span<const double> f, const DensityGrid& rho,
                          double norm_tol = 1e-8);

// psi = Z^{-1/2} exp(S/2kB) exp(i I/hbar) on the given grid, with
// Z = integral |exp|^2 computed in log space. The squared modulus of the
// result is the normalized Boltzmann weight exp(S/kB)/Z. `entropy_factor` is
// the free dimensionless constant in the entropy-action pairing (default 1).
quantum::WavefunctionGrid assemble_wavefunction(std::span<const double> S,
                                                std::span<const double> I,
                                                std::span<const double> x,
                                                double kB, double hbar,
                                                double entropy_factor = 1.0);

// ---------------------------------------------------------------------------
// Pointwise dictionary identity residuals (complex relative residuals)

// Free propagator against the small-rate transition density at imaginary lag,
// scaled by sqrt(kB/s). Exact in the limit form; the residual is rounding
// noise. omega in q is ignored (the limit form is rate-independent).
double check_free_identity(const quantum::PhysParams& q, double kB, double x1,
                           double x2, double t);

// Same comparison with the full finite-rate density; the residual is O(gamma).
double free_identity_residual_finite_gamma(const quantum::PhysParams& q,
                                           double kB, double x1, double x2,
                                           double t, double gamma);

// Harmonic propagator against the transition density at imaginary lag:
// f1(x2, it | x1, 0) = exp(i omega t / 2 - dV/(hbar omega)) sqrt(2 m omega /
// hbar) K(x2, t | x1, 0), dV the harmonic potential difference.
double check_harmonic_identity(const quantum::PhysParams& q, double kB,
                               double x1, double x2, double t);

// Sup-norm residual between the mapped one-gate density and the squared
// modulus of the oscillator ground state, both unit-normalized, on a grid of
// n points spanning [-half_width, half_width] * lambda.
double check_ground_state(const quantum::PhysParams& q, double kB,
                          double lambda = 1.0, std::size_t n = 2001,
                          double half_width = 8.0);

}  // namespace wickbridge::dict
