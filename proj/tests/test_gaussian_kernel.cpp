#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "support/oracles.hpp"
#include "wickbridge/error.hpp"
#include "wickbridge/gaussian_kernel.hpp"

using namespace wickbridge;
using namespace wickbridge::kernels;
using ou::OUParams;

namespace {

ComplexGaussianKernel random_decaying_kernel(std::uint64_t seed,
                                             std::uint64_t i,
                                             std::uint64_t tag) {
  ComplexGaussianKernel k;
  k.a = Complex(-uniform_in(seed, i, tag + 0, 0.3, 2.0),
                uniform_in(seed, i, tag + 1, -0.5, 0.5));
  k.b = Complex(-uniform_in(seed, i, tag + 2, 0.3, 2.0),
                uniform_in(seed, i, tag + 3, -0.5, 0.5));
  k.c = Complex(uniform_in(seed, i, tag + 4, -0.7, 0.7),
                uniform_in(seed, i, tag + 5, -0.5, 0.5));
  k.d = Complex(uniform_in(seed, i, tag + 6, -0.5, 0.5), 0.0);
  k.e = Complex(uniform_in(seed, i, tag + 7, -0.5, 0.5), 0.0);
  k.logN = Complex(uniform_in(seed, i, tag + 8, -0.3, 0.3), 0.0);
  return k;
}

}  // namespace

TEST_CASE("free kernel closed form") {
  const auto K = kernel_free(1.0, 1.0, 0.0, 1.0);
  const auto at00 = evaluate(K, 0.0, 0.0);
  CHECK(std::abs(at00) == doctest::Approx(std::sqrt(1.0 / kTwoPi)).epsilon(1e-12));
  CHECK(std::arg(at00) == doctest::Approx(-kPi / 4).epsilon(1e-12));

  // phase at (x2, x1) = (1, 0): quadratic piece 1/2 on top of the prefactor
  const auto at10 = evaluate(K, 1.0, 0.0);
  CHECK(std::abs(at10) == doctest::Approx(std::abs(at00)).epsilon(1e-12));
  CHECK(std::arg(at10) == doctest::Approx(0.5 - kPi / 4).epsilon(1e-12));

  CHECK(K.a == K.b);
  CHECK(K.c == -2.0 * K.a);
  CHECK_THROWS_AS(kernel_free(1.0, 1.0, 2.0, 2.0), ZeroInterval);
  CHECK_THROWS_AS(kernel_free(-1.0, 1.0, 0.0, 1.0), InvalidParameter);
}

TEST_CASE("harmonic kernel closed form and limits") {
  CHECK_THROWS_AS(kernel_harmonic(1, 1, 1, 0.0, kPi), Caustic);
  CHECK_THROWS_AS(kernel_harmonic(1, 1, 1, 1.0, 1.0), ZeroInterval);

  // cross coefficient is -i m omega / (hbar sin(omega dt))
  const double omega = 1.3, m = 0.7, hbar = 1.1, dt = 0.9;
  const auto K = kernel_harmonic(m, hbar, omega, 0.0, dt);
  CHECK(K.c.real() == 0.0);
  CHECK(K.c.imag() ==
        doctest::Approx(-m * omega / (hbar * std::sin(omega * dt)))
            .epsilon(1e-14));

  // omega -> 0 reduces to the free kernel
  const auto Kh = kernel_harmonic(1.0, 1.0, 1e-8, 0.0, 1.0);
  const auto Kf = kernel_free(1.0, 1.0, 0.0, 1.0);
  CHECK(std::abs(Kh.a - Kf.a) / std::abs(Kf.a) < 1e-8);
  CHECK(std::abs(Kh.c - Kf.c) / std::abs(Kf.c) < 1e-8);
  CHECK(std::abs(Kh.logN - Kf.logN) < 1e-8);

  // quarter period kills the diagonal terms
  const auto Kq = kernel_harmonic(1.0, 1.0, 1.0, 0.0, kPi / 2);
  CHECK(std::abs(Kq.a) < 1e-12);
  CHECK(std::abs(evaluate(Kq, 0.0, 0.0)) ==
        doctest::Approx(std::sqrt(1.0 / kTwoPi)).epsilon(1e-12));
}

TEST_CASE("transition kernel moments and conventions") {
  const auto p = OUParams::make(1.0, 1.0, 1.0);

  SUBCASE("aged limit forgets the conditioning point") {
    const auto K = kernel_ou(p, 1e9, Convention::normalized);
    CHECK(std::abs(K.b) < 1e-300);
    CHECK(std::abs(K.c) < 1e-300);
    CHECK(-1.0 / (2.0 * K.a.real()) == doctest::Approx(1.0).epsilon(1e-14));
  }

  SUBCASE("conditional mean and variance at lag ln 2") {
    const auto K = kernel_ou(p, std::log(2.0), Convention::normalized);
    const double var = -1.0 / (2.0 * K.a.real());
    const double mean_coeff = K.c.real() * var;  // coefficient of y1
    CHECK(var == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(mean_coeff == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("paper and normalized conventions differ by sqrt(s/kB)") {
    const auto q = OUParams::make(1.0, 2.0, 0.5);
    const auto Kp = kernel_ou(q, 0.7, Convention::paper);
    const auto Kn = kernel_ou(q, 0.7, Convention::normalized);
    const auto ratio = evaluate(Kp, 0.4, -0.3) / evaluate(Kn, 0.4, -0.3);
    CHECK(ratio.real() == doctest::Approx(std::sqrt(q.s / q.kB)).epsilon(1e-13));
    CHECK(ratio.imag() == doctest::Approx(0.0));
  }

  CHECK_THROWS_AS(kernel_ou(p, 0.0, Convention::normalized),
                  NonpositiveInterval);
  CHECK_THROWS_AS(kernel_ou(p, -1.0, Convention::normalized),
                  NonpositiveInterval);
}

TEST_CASE("semigroup composition") {
  SUBCASE("free kernels over a random lag grid") {
    for (std::uint64_t i = 0; i < 50; ++i) {
      const double m = uniform_in(7, i, 0, 0.5, 2.0);
      const double hbar = uniform_in(7, i, 1, 0.5, 2.0);
      const double t1 = uniform_in(7, i, 2, 0.01, 5.0);
      const double t2 = uniform_in(7, i, 3, 0.01, 5.0);
      const auto lhs = compose(kernel_free(m, hbar, t1, t1 + t2),
                               kernel_free(m, hbar, 0.0, t1));
      const auto rhs = kernel_free(m, hbar, 0.0, t1 + t2);
      CHECK(coefficient_distance(lhs, rhs) < 1e-12);
    }
  }

  SUBCASE("transition kernels over a random lag grid") {
    for (std::uint64_t i = 0; i < 50; ++i) {
      const auto p = OUParams::make(uniform_in(8, i, 0, 0.5, 2.0),
                                    uniform_in(8, i, 1, 0.5, 2.0),
                                    uniform_in(8, i, 2, 0.5, 2.0));
      const double u1 = uniform_in(8, i, 3, 0.01, 5.0);
      const double u2 = uniform_in(8, i, 4, 0.01, 5.0);
      const auto lhs = compose(kernel_ou(p, u2, Convention::normalized),
                               kernel_ou(p, u1, Convention::normalized));
      const auto rhs = kernel_ou(p, u1 + u2, Convention::normalized);
      CHECK(coefficient_distance(lhs, rhs) < 1e-12);
    }
  }

  SUBCASE("harmonic kernels inside one caustic window") {
    for (std::uint64_t i = 0; i < 50; ++i) {
      const double omega = uniform_in(9, i, 0, 0.5, 2.0);
      const double th1 = uniform_in(9, i, 1, 0.05, kPi - 0.15);
      const double th2 = uniform_in(9, i, 2, 0.05, kPi - 0.1 - th1);
      const auto lhs = compose(
          kernel_harmonic(1.0, 1.0, omega, th1 / omega, (th1 + th2) / omega),
          kernel_harmonic(1.0, 1.0, omega, 0.0, th1 / omega));
      const auto rhs =
          kernel_harmonic(1.0, 1.0, omega, 0.0, (th1 + th2) / omega);
      CHECK(coefficient_distance(lhs, rhs) < 1e-12);
    }
  }

  SUBCASE("paper-convention kernels compose up to the constant offset") {
    // each paper-convention factor carries sqrt(s/kB), so a two-fold
    // composition overshoots the single kernel by exactly that constant
    const auto p = OUParams::make(1.0, 3.0, 0.75);
    const auto lhs = compose(kernel_ou(p, 0.8, Convention::paper),
                             kernel_ou(p, 0.5, Convention::paper));
    const auto rhs = kernel_ou(p, 1.3, Convention::paper);
    const auto ratio = evaluate(lhs, 0.4, -0.2) / evaluate(rhs, 0.4, -0.2);
    CHECK(ratio.real() ==
          doctest::Approx(std::sqrt(p.s / p.kB)).epsilon(1e-12));
  }

  SUBCASE("hitting the caustic raises BranchAmbiguity") {
    const auto k1 = kernel_harmonic(1.0, 1.0, 1.0, 0.0, kPi / 2);
    CHECK_THROWS_AS(compose(k1, k1), BranchAmbiguity);
  }

  SUBCASE("growing shared quadratic raises DivergentComposition") {
    ComplexGaussianKernel g;
    g.a = Complex(0.5, 0.0);
    g.b = Complex(-1.0, 0.0);
    g.c = Complex(0.1, 0.0);
    ComplexGaussianKernel h = g;
    h.a = Complex(-1.0, 0.0);
    h.b = Complex(0.7, 0.0);
    CHECK_THROWS_AS(compose(h, g), DivergentComposition);
  }
}

TEST_CASE("composition against brute-force quadrature") {
  for (std::uint64_t i = 0; i < 12; ++i) {
    const auto later = random_decaying_kernel(11, i, 0);
    const auto earlier = random_decaying_kernel(11, i, 16);
    const auto composed = compose(later, earlier);
    const double x3 = uniform_in(11, i, 40, -1.0, 1.0);
    const double x1 = uniform_in(11, i, 41, -1.0, 1.0);

    const auto re = [&](double u) {
      return (evaluate(later, x3, u) * evaluate(earlier, u, x1)).real();
    };
    const auto im = [&](double u) {
      return (evaluate(later, x3, u) * evaluate(earlier, u, x1)).imag();
    };
    const Complex brute(oracles::integrate(re, -30.0, 30.0, 1e-13),
                        oracles::integrate(im, -30.0, 30.0, 1e-13));
    const Complex closed = evaluate(composed, x3, x1);
    CHECK(std::abs(brute - closed) / std::abs(closed) < 1e-8);
  }
}

TEST_CASE("composition is associative") {
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto k3 = random_decaying_kernel(13, i, 0);
    const auto k2 = random_decaying_kernel(13, i, 16);
    const auto k1 = random_decaying_kernel(13, i, 32);
    const auto left = compose(compose(k3, k2), k1);
    const auto right = compose(k3, compose(k2, k1));
    CHECK(coefficient_distance(left, right) < 1e-10);
  }
}

TEST_CASE("normalized transition kernel integrates to one") {
  const auto p = OUParams::make(1.3, 0.8, 1.1);
  const double sigma = std::sqrt(p.kB / p.s);
  for (const double lag : {0.05, 0.8, 4.0}) {
    const auto K = kernel_ou(p, lag, Convention::normalized);
    const double sigma_lag = std::sqrt(-1.0 / (2.0 * K.a.real()));
    for (const double y1 : {-5.0 * sigma, -sigma, 0.0, 2.5 * sigma,
                            5.0 * sigma}) {
      const double mean = std::exp(-p.gamma * lag) * y1;
      const auto f = [&](double y2) { return evaluate(K, y2, y1).real(); };
      const double mass = oracles::integrate(f, mean - 15.0 * sigma_lag,
                                             mean + 15.0 * sigma_lag, 1e-13);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("evaluate basics and log-space headroom") {
  ComplexGaussianKernel unit;  // all coefficients zero
  CHECK(evaluate(unit, 3.0, -2.0) == Complex(1.0, 0.0));

  const auto Kf = kernel_free(1.0, 1.0, 0.0, 1.0);
  CHECK(evaluate(Kf, 0.0, 0.0) == std::exp(Kf.logN));

  ComplexGaussianKernel big;
  big.a = Complex(-1.0, 0.0);
  big.logN = Complex(650.0, 0.0);
  CHECK(std::isfinite(std::abs(evaluate(big, 1.0, 0.0))));
  CHECK(std::abs(log_evaluate(big, 1.0, 0.0) - Complex(649.0, 0.0)) < 1e-12);
}

TEST_CASE("compose_power matches sequential composition") {
  const auto p = OUParams::make(1.0, 1.0, 1.0);
  const auto slice = kernel_ou(p, 0.01, Convention::normalized);
  auto seq = slice;
  for (int i = 1; i < 11; ++i) seq = compose(slice, seq);
  const auto pow = compose_power(slice, 11);
  CHECK(coefficient_distance(seq, pow) < 1e-13);
  CHECK_THROWS_AS(compose_power(slice, 0), InvalidParameter);
}

TEST_CASE("branch hint selects the other square-root sheet") {
  const auto p = OUParams::make(1.0, 1.0, 1.0);
  auto a = kernel_ou(p, 0.5, Convention::normalized);
  const auto b = kernel_ou(p, 0.5, Convention::normalized);
  const auto principal = compose(b, a);
  a.branch_hint = -1;
  const auto other = compose(b, a);
  const auto ratio = evaluate(other, 0.3, 0.1) / evaluate(principal, 0.3, 0.1);
  CHECK(ratio.real() == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(std::abs(ratio.imag()) < 1e-13);
}
