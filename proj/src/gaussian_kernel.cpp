#include "wickbridge/gaussian_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <utility>

#include "wickbridge/error.hpp"

namespace wickbridge::kernels {

namespace {

constexpr double kBranchTol = 1e-12;

// log(1 - exp(-2u)) evaluated without cancellation for small u.
double log_one_minus_exp2(double u) { return std::log(-std::expm1(-2.0 * u)); }

void two_sum(double a, double b, double& s, double& e) {
  s = a + b;
  const double z = s - a;
  e = (a - (s - z)) + (b - z);
}

// Compensated sum of products (fma error recovery + exact running sum). Used
// where the kernel discriminant cancels almost completely; a naive evaluation
// there loses absolute accuracy that long composition chains never recover.
double dot_products(std::initializer_list<std::pair<double, double>> terms) {
  double s = 0.0, comp = 0.0;
  for (const auto& [x, y] : terms) {
    const double p = x * y;
    const double ep = std::fma(x, y, -p);
    double t, e;
    two_sum(s, p, t, e);
    s = t;
    comp += e + ep;
  }
  return s + comp;
}

// a*b - (c/2)^2, the quarter-discriminant of a kernel's quadratic form. Zero
// for every delta-normalized transition kernel, which is exactly why it must
// be formed with compensation.
Complex quarter_discriminant(const ComplexGaussianKernel& k) {
  const double ur = 0.5 * k.c.real();
  const double ui = 0.5 * k.c.imag();
  const double re = dot_products({{k.a.real(), k.b.real()},
                                  {-k.a.imag(), k.b.imag()},
                                  {-ur, ur},
                                  {ui, ui}});
  const double im = dot_products({{k.a.real(), k.b.imag()},
                                  {k.a.imag(), k.b.real()},
                                  {-2.0 * ur, ui}});
  return Complex(re, im);
}

}  // namespace

ComplexGaussianKernel kernel_free(double m, double hbar, double t1, double t2) {
  if (!(m > 0.0) || !(hbar > 0.0))
    throw InvalidParameter("kernel_free: m and hbar must be positive");
  if (t2 == t1)
    throw ZeroInterval("kernel_free: t2 == t1, delta-function limit not representable");
  const double dt = t2 - t1;
  ComplexGaussianKernel k;
  k.a = Complex(0.0, m / (2.0 * hbar * dt));
  k.b = k.a;
  k.c = -2.0 * k.a;
  // sqrt(m / (2*pi*i*hbar*dt)), principal branch
  k.logN = 0.5 * std::log(Complex(0.0, -m / (kTwoPi * hbar * dt)));
  k.disc = Complex(0.0, 0.0);
  return k;
}

ComplexGaussianKernel kernel_harmonic(double m, double hbar, double omega,
                                      double t1, double t2,
                                      double caustic_tol) {
  if (!(m > 0.0) || !(hbar > 0.0) || !(omega > 0.0))
    throw InvalidParameter("kernel_harmonic: m, hbar, omega must be positive");
  const double dt = t2 - t1;
  if (dt == 0.0) throw ZeroInterval("kernel_harmonic: t2 == t1");
  const double theta = omega * dt;
  const double sn = std::sin(theta);
  if (std::abs(sn) < caustic_tol)
    throw Caustic("kernel_harmonic: sin(omega*dt) vanishes");
  ComplexGaussianKernel k;
  k.a = Complex(0.0, m * omega * std::cos(theta) / (2.0 * hbar * sn));
  k.b = k.a;
  k.c = Complex(0.0, -m * omega / (hbar * sn));
  k.logN = 0.5 * std::log(Complex(0.0, -m * omega / (kTwoPi * hbar * sn)));
  const double half = m * omega / (2.0 * hbar);
  k.disc = Complex(half * half, 0.0);
  return k;
}

ComplexGaussianKernel kernel_ou(const ou::OUParams& p, double dtau,
                                Convention conv) {
  if (!(dtau > 0.0))
    throw NonpositiveInterval("kernel_ou: dtau must be positive");
  const double u = p.gamma * dtau;
  const double one_minus = -std::expm1(-2.0 * u);  // 1 - exp(-2u), stable
  const double decay = std::exp(-u);
  const double half_ratio = 0.5 * p.s / p.kB;      // s / (2 kB)
  ComplexGaussianKernel k;
  k.a = Complex(-half_ratio / one_minus, 0.0);
  k.b = Complex(-half_ratio * decay * decay / one_minus, 0.0);
  k.c = Complex(2.0 * half_ratio * decay / one_minus, 0.0);
  // normalized: 1/sqrt(2*pi*var), var = (kB/s)(1 - exp(-2u))
  double logN = -0.5 * (std::log(kTwoPi * p.kB / p.s) + log_one_minus_exp2(u));
  if (conv == Convention::paper) logN += 0.5 * std::log(p.s / p.kB);
  k.logN = Complex(logN, 0.0);
  k.disc = Complex(0.0, 0.0);
  return k;
}

ComplexGaussianKernel kernel_ou_complex(const ou::OUParams& p, Complex dtau,
                                        Convention conv) {
  const Complex z = p.gamma * dtau;
  const Complex sh = std::sinh(z);
  if (std::abs(sh) < kBranchTol * std::max(1.0, std::abs(z)))
    throw Caustic("kernel_ou_complex: sinh(gamma*dtau) vanishes");
  const double half_ratio = 0.5 * p.s / p.kB;
  const Complex ep = std::exp(z);
  const Complex em = std::exp(-z);
  ComplexGaussianKernel k;
  k.a = -half_ratio * ep / (2.0 * sh);
  k.b = -half_ratio * em / (2.0 * sh);
  k.c = half_ratio / sh;
  k.logN = std::log(Complex(half_ratio, 0.0)) + 0.5 * z -
           0.5 * std::log(kPi * sh);
  if (conv == Convention::normalized) k.logN -= 0.5 * std::log(p.s / p.kB);
  k.disc = Complex(0.0, 0.0);
  return k;
}

ComplexGaussianKernel kernel_ou_small_rate(const ou::OUParams& p, Complex dtau,
                                           Convention conv) {
  const Complex z = p.gamma * dtau;
  if (std::abs(z) == 0.0)
    throw NonpositiveInterval("kernel_ou_small_rate: dtau must be nonzero");
  const double half_ratio = 0.5 * p.s / p.kB;
  ComplexGaussianKernel k;
  k.a = -half_ratio / (2.0 * z);
  k.b = k.a;
  k.c = half_ratio / z;
  k.logN = std::log(Complex(half_ratio, 0.0)) - 0.5 * std::log(kPi * z);
  if (conv == Convention::normalized) k.logN -= 0.5 * std::log(p.s / p.kB);
  k.disc = Complex(0.0, 0.0);
  return k;
}

ComplexGaussianKernel compose(const ComplexGaussianKernel& later,
                              const ComplexGaussianKernel& earlier) {
  const Complex alpha = later.b + earlier.a;
  const double scale = std::abs(later.b) + std::abs(earlier.a) +
                       std::abs(later.c) + std::abs(earlier.c);
  if (std::abs(alpha) <= kBranchTol * std::max(scale, 1e-300))
    throw BranchAmbiguity(
        "compose: shared quadratic coefficient cancels (caustic crossing)");
  if (alpha.real() > kBranchTol * std::abs(alpha))
    throw DivergentComposition(
        "compose: Re(b_later + a_earlier) > 0, shared-point integral diverges");

  const Complex inv4 = 1.0 / (4.0 * alpha);
  const Complex w = later.e + earlier.d;
  const Complex DL =
      later.disc ? *later.disc : quarter_discriminant(later);
  const Complex DE =
      earlier.disc ? *earlier.disc : quarter_discriminant(earlier);
  ComplexGaussianKernel k;
  // Discriminant form of the completed square: a12 = a_L - c_L^2/(4 alpha)
  // rewritten as (D_L + a_L a_E)/alpha with D = a b - c^2/4, so the near-zero
  // discriminant carries the cancellation instead of the large coefficients.
  k.a = (DL + later.a * earlier.a) / alpha;
  k.b = (DE + later.b * earlier.b) / alpha;
  k.c = -2.0 * later.c * earlier.c * inv4;
  k.d = later.d - 2.0 * later.c * w * inv4;
  k.e = earlier.e - 2.0 * earlier.c * w * inv4;
  k.logN = later.logN + earlier.logN + 0.5 * std::log(kPi / (-alpha)) -
           w * w * inv4;
  k.disc = (2.0 * DL * DE + DL * (later.b * earlier.b +
                                  0.25 * earlier.c * earlier.c) +
            DE * (later.a * earlier.a + 0.25 * later.c * later.c)) /
           (alpha * alpha);
  if (later.branch_hint * earlier.branch_hint < 0)
    k.logN += Complex(0.0, kPi);  // other square-root sheet
  k.branch_hint = +1;
  return k;
}

ComplexGaussianKernel compose_power(const ComplexGaussianKernel& k,
                                    std::size_t n) {
  if (n == 0) throw InvalidParameter("compose_power: n must be >= 1");
  ComplexGaussianKernel base = k;
  ComplexGaussianKernel acc;
  bool have = false;
  while (n) {
    if (n & 1) {
      acc = have ? compose(base, acc) : base;
      have = true;
    }
    n >>= 1;
    if (n) base = compose(base, base);
  }
  return acc;
}

Complex log_evaluate(const ComplexGaussianKernel& k, double x2, double x1) {
  return k.a * (x2 * x2) + k.b * (x1 * x1) + k.c * (x2 * x1) + k.d * x2 +
         k.e * x1 + k.logN;
}

Complex evaluate(const ComplexGaussianKernel& k, double x2, double x1) {
  return std::exp(log_evaluate(k, x2, x1));
}

double coefficient_distance(const ComplexGaussianKernel& lhs,
                            const ComplexGaussianKernel& rhs) {
  const double scale =
      std::max({1.0, std::abs(lhs.a), std::abs(lhs.b), std::abs(lhs.c),
                std::abs(lhs.d), std::abs(lhs.e), std::abs(lhs.logN)});
  const double diff =
      std::max({std::abs(lhs.a - rhs.a), std::abs(lhs.b - rhs.b),
                std::abs(lhs.c - rhs.c), std::abs(lhs.d - rhs.d),
                std::abs(lhs.e - rhs.e), std::abs(lhs.logN - rhs.logN)});
  return diff / scale;
}

}  // namespace wickbridge::kernels
