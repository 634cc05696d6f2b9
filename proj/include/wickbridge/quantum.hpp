#pragma once

#include <functional>
#include <iosfwd>
#include <vector>

#include "wickbridge/common.hpp"
#include "wickbridge/gaussian_kernel.hpp"

namespace wickbridge::quantum {

struct PhysParams {
  double m = 1.0;
  double hbar = 1.0;
  double omega = 0.0;  // 0 selects the free particle

  static PhysParams make(double m, double hbar, double omega = 0.0) {
    if (!(m > 0.0) || !(hbar > 0.0) || !(omega >= 0.0))
      throw InvalidParameter("PhysParams: need m > 0, hbar > 0, omega >= 0");
    return PhysParams{m, hbar, omega};
  }
};

enum class Potential { free_particle, harmonic };

// Action of the classical trajectory between (x1, t1) and (x2, t2).
double classical_action(Potential kind, const PhysParams& p, double x1,
                        double t1, double x2, double t2);

// exp((i/hbar) * classical action) with the van Vleck prefactor fixed by
// unit normalization (composition to the identity as dt -> 0). For quadratic
// Lagrangians this reproduces the exact propagator kernel.
kernels::ComplexGaussianKernel semiclassical_propagator(Potential kind,
                                                        const PhysParams& p,
                                                        double t1, double t2);

// Complex amplitude sampled on a uniform position grid.
struct WavefunctionGrid {
  std::vector<double> x;
  std::vector<Complex> psi;
  double dx = 0.0;
};

WavefunctionGrid make_wavefunction_grid(
    double xmin, double xmax, std::size_t n,
    const std::function<Complex(double)>& f = {});

// Enforces the grid contract: at least two points, strictly increasing,
// uniform spacing within 1e-12 relative.
void validate_grid(const std::vector<double>& x, double dx);

// Integral of |psi|^2 dx by trapezoid quadrature (pairwise-summed).
double norm_squared(const WavefunctionGrid& g);

WavefunctionGrid normalized(WavefunctionGrid g);

// psi(x2) = sum dx1 K(x2, x1) psi(x1) by deterministic trapezoid quadrature.
// Throws GridTooNarrow when the boundary amplitude exceeds truncation_tol
// relative to the peak, GridTooCoarse when the grid cannot resolve the
// kernel's fastest fringe (eight points per fringe required).
WavefunctionGrid evolve_wavefunction(const WavefunctionGrid& psi,
                                     const kernels::ComplexGaussianKernel& K,
                                     double truncation_tol = 1e-10);

// CSV serialization: header `x,re_psi,im_psi`, one row per grid point.
void write_csv(const WavefunctionGrid& g, std::ostream& os, int precision = 12);
WavefunctionGrid read_csv(std::istream& is);

// Exact freely spreading Gaussian packet. The initial state
// (2 pi sigma0^2)^{-1/4} exp(-x^2/(4 sigma0^2) + i k0 x) stays an exponential
// of a complex quadratic under free evolution; the coefficients are returned
// so callers can form the amplitude, density, and phase gradient in closed
// form.
struct PacketExponent {
  Complex quad, lin, c0;  // psi(x) = exp(quad x^2 + lin x + c0)
};
PacketExponent free_packet_exponent(const PhysParams& p, double sigma0,
                                    double k0, double t);
Complex free_packet_amplitude(const PacketExponent& e, double x);

}  // namespace wickbridge::quantum
