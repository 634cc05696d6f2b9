#pragma once

#include <complex>
#include <cstddef>
#include <optional>

#include "wickbridge/common.hpp"
#include "wickbridge/ou_params.hpp"

namespace wickbridge::kernels {

// Prefactor convention for transition-density kernels.
//   normalized : integrates to one over the later point, a true density.
//   paper      : carries the literal s/kB prefactor used verbatim by the
//                dictionary identities; differs from `normalized` by the
//                constant factor sqrt(s/kB).
enum class Convention { normalized, paper };

// Two-point kernel N * exp(a*x2^2 + b*x1^2 + c*x2*x1 + d*x2 + e*x1), with the
// prefactor stored as logN so long composition chains cannot overflow. The
// family is closed under the Chapman-Kolmogorov integral over the shared
// point, which is what makes it the common engine behind quantum propagators
// and Gaussian Markov transition densities.
struct ComplexGaussianKernel {
  Complex a{};
  Complex b{};
  Complex c{};
  Complex d{};
  Complex e{};
  Complex logN{};
  // Square-root sheet selector for the composition prefactor: +1 keeps the
  // principal branch, -1 continues onto the other sheet (adds i*pi to logN).
  // Constructors always emit +1; flip it to track branch continuity by hand
  // across a caustic.
  int branch_hint = +1;
  // Quarter-discriminant a*b - (c/2)^2 of the quadratic form, when known in
  // closed form. Transition kernels are exactly degenerate (disc = 0), but the
  // discriminant of their rounded coefficients is not, and that offset
  // survives long composition chains at full size. Composition prefers the
  // stored value and propagates it exactly; unset means "derive from the
  // coefficients with a compensated product sum".
  std::optional<Complex> disc;
};

// Free-particle propagator between times t1 and t2.
ComplexGaussianKernel kernel_free(double m, double hbar, double t1, double t2);

// Harmonic-oscillator propagator, principal branch of the square root.
// Throws Caustic when |sin(omega*(t2-t1))| < caustic_tol.
ComplexGaussianKernel kernel_harmonic(double m, double hbar, double omega,
                                      double t1, double t2,
                                      double caustic_tol = 1e-12);

// Stationary Gaussian Markov transition kernel over a lag dtau > 0.
// Conditional mean exp(-gamma*dtau)*y1, variance (kB/s)(1 - exp(-2*gamma*dtau)).
ComplexGaussianKernel kernel_ou(const ou::OUParams& p, double dtau,
                                Convention conv);

// Same kernel continued to complex lag (sinh form, principal branches); used
// by the dictionary identities at imaginary lag. Intended for moderate |lag|.
ComplexGaussianKernel kernel_ou_complex(const ou::OUParams& p, Complex dtau,
                                        Convention conv);

// Small-rate limit of the transition kernel: mean y1, variance 2*kB*dtau/R,
// with the limiting prefactor (s/2kB)/sqrt(pi*gamma*dtau). Complex lag allowed.
ComplexGaussianKernel kernel_ou_small_rate(const ou::OUParams& p, Complex dtau,
                                           Convention conv);

// Chapman-Kolmogorov composition: integrates later(x3, x) * earlier(x, x1)
// over the shared point x in closed form. Requires Re(later.b + earlier.a) <= 0
// (purely imaginary handled by the i*eps damping prescription, i.e. the
// principal square-root branch). Throws DivergentComposition when the shared
// quadratic grows, BranchAmbiguity when it cancels to zero (caustic).
ComplexGaussianKernel compose(const ComplexGaussianKernel& later,
                              const ComplexGaussianKernel& earlier);

// n-fold composition of a kernel with itself (binary combination to keep
// rounding growth logarithmic in n). n >= 1.
ComplexGaussianKernel compose_power(const ComplexGaussianKernel& k,
                                    std::size_t n);

// Exponent a*x2^2 + b*x1^2 + c*x2*x1 + d*x2 + e*x1 + logN.
Complex log_evaluate(const ComplexGaussianKernel& k, double x2, double x1);

// exp(log_evaluate). Finite whenever the total exponent stays below ~700.
Complex evaluate(const ComplexGaussianKernel& k, double x2, double x1);

// Largest relative coefficient difference between two kernels, used by the
// closure tests.
double coefficient_distance(const ComplexGaussianKernel& lhs,
                            const ComplexGaussianKernel& rhs);

}  // namespace wickbridge::kernels
