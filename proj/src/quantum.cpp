#include "wickbridge/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "wickbridge/error.hpp"

namespace wickbridge::quantum {

double classical_action(Potential kind, const PhysParams& p, double x1,
                        double t1, double x2, double t2) {
  if (!(t2 > t1)) throw ZeroInterval("classical_action: requires t2 > t1");
  const double dt = t2 - t1;
  switch (kind) {
    case Potential::free_particle:
      return p.m * (x2 - x1) * (x2 - x1) / (2.0 * dt);
    case Potential::harmonic: {
      if (!(p.omega > 0.0))
        throw InvalidParameter("classical_action: harmonic needs omega > 0");
      const double theta = p.omega * dt;
      const double sn = std::sin(theta);
      if (std::abs(sn) < 1e-12)
        throw Caustic("classical_action: sin(omega*dt) vanishes");
      return p.m * p.omega / (2.0 * sn) *
             ((x1 * x1 + x2 * x2) * std::cos(theta) - 2.0 * x1 * x2);
    }
  }
  throw InvalidParameter("classical_action: unknown potential");
}

kernels::ComplexGaussianKernel semiclassical_propagator(Potential kind,
                                                        const PhysParams& p,
                                                        double t1, double t2) {
  // The action is an exact quadratic form in (x1, x2) with no linear part, so
  // three evaluations recover its coefficients exactly.
  const auto S = [&](double x1, double x2) {
    return classical_action(kind, p, x1, t1, x2, t2);
  };
  const double A = S(0.0, 1.0);          // x2^2 coefficient
  const double B = S(1.0, 0.0);          // x1^2 coefficient
  const double C = S(1.0, 1.0) - A - B;  // cross coefficient = d2S/dx2 dx1

  kernels::ComplexGaussianKernel k;
  const double inv_hbar = 1.0 / p.hbar;
  k.a = Complex(0.0, A * inv_hbar);
  k.b = Complex(0.0, B * inv_hbar);
  k.c = Complex(0.0, C * inv_hbar);
  // van Vleck prefactor sqrt(-d2S/dx2dx1 / (2*pi*i*hbar)), principal branch
  k.logN = 0.5 * std::log(Complex(0.0, C / (kTwoPi * p.hbar)));
  // quarter-discriminant (C^2/4 - AB)/hbar^2, fused difference of products
  const double half_c = 0.5 * C;
  const double w = A * B;
  const double f = std::fma(half_c, half_c, -w);
  const double e = std::fma(A, B, -w);
  k.disc = Complex((f - e) * inv_hbar * inv_hbar, 0.0);
  return k;
}

WavefunctionGrid make_wavefunction_grid(
    double xmin, double xmax, std::size_t n,
    const std::function<Complex(double)>& f) {
  if (!(xmax > xmin)) throw InvalidParameter("wavefunction grid: xmax <= xmin");
  WavefunctionGrid g;
  g.x = linspace(xmin, xmax, n);
  g.dx = (xmax - xmin) / static_cast<double>(n - 1);
  g.psi.resize(n, Complex{});
  if (f)
    for (std::size_t i = 0; i < n; ++i) g.psi[i] = f(g.x[i]);
  validate_grid(g.x, g.dx);
  return g;
}

void validate_grid(const std::vector<double>& x, double dx) {
  if (x.size() < 2 || !(dx > 0.0))
    throw InvalidParameter("grid: need at least two increasing points");
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double step = x[i] - x[i - 1];
    if (!(step > 0.0) || std::abs(step - dx) > 1e-12 * std::max(1.0, dx))
      throw InvalidParameter("grid: spacing not uniform within 1e-12");
  }
}

double norm_squared(const WavefunctionGrid& g) {
  std::vector<double> density(g.psi.size());
  for (std::size_t i = 0; i < g.psi.size(); ++i)
    density[i] = std::norm(g.psi[i]);
  return trapezoid<double>(density, g.dx);
}

WavefunctionGrid normalized(WavefunctionGrid g) {
  const double n2 = norm_squared(g);
  if (!(n2 > 0.0)) throw ZeroNorm("normalized: wavefunction has zero norm");
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& v : g.psi) v *= inv;
  return g;
}

WavefunctionGrid evolve_wavefunction(const WavefunctionGrid& psi,
                                     const kernels::ComplexGaussianKernel& K,
                                     double truncation_tol) {
  validate_grid(psi.x, psi.dx);
  double peak = 0.0;
  for (const auto& v : psi.psi) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) throw ZeroNorm("evolve_wavefunction: zero input state");
  if (std::abs(psi.psi.front()) > truncation_tol * peak ||
      std::abs(psi.psi.back()) > truncation_tol * peak)
    throw GridTooNarrow(
        "evolve_wavefunction: boundary amplitude above truncation tolerance");

  // Fastest fringe of the integrand comes from the cross term: local wave
  // number |Im(c)| * max|x|. Require eight grid points per fringe.
  const double xmax =
      std::max(std::abs(psi.x.front()), std::abs(psi.x.back()));
  const double k_max = std::abs(K.c.imag()) * xmax;
  if (k_max > 0.0 && psi.dx > kPi / (8.0 * k_max))
    throw GridTooCoarse(
        "evolve_wavefunction: grid spacing cannot resolve kernel fringes");

  const std::size_t n = psi.x.size();
  WavefunctionGrid out;
  out.x = psi.x;
  out.dx = psi.dx;
  out.psi.resize(n);
  std::vector<Complex> integrand(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x2 = psi.x[j];
    for (std::size_t i = 0; i < n; ++i)
      integrand[i] = kernels::evaluate(K, x2, psi.x[i]) * psi.psi[i];
    out.psi[j] = trapezoid<Complex>(integrand, psi.dx);
  }
  return out;
}

void write_csv(const WavefunctionGrid& g, std::ostream& os, int precision) {
  os << "x,re_psi,im_psi\n";
  for (std::size_t i = 0; i < g.x.size(); ++i)
    os << format_double(g.x[i], precision) << ','
       << format_double(g.psi[i].real(), precision) << ','
       << format_double(g.psi[i].imag(), precision) << '\n';
}

PacketExponent free_packet_exponent(const PhysParams& p, double sigma0,
                                    double k0, double t) {
  if (!(sigma0 > 0.0))
    throw InvalidParameter("free_packet_exponent: sigma0 must be positive");
  const double logA = -0.25 * std::log(kTwoPi * sigma0 * sigma0);
  if (t == 0.0)
    return PacketExponent{Complex(-1.0 / (4.0 * sigma0 * sigma0), 0.0),
                          Complex(0.0, k0), Complex(logA, 0.0)};
  // propagate the initial Gaussian through the free kernel analytically
  const Complex alpha =
      Complex(-1.0 / (4.0 * sigma0 * sigma0), p.m / (2.0 * p.hbar * t));
  const Complex beta0(0.0, k0);
  const Complex beta1(0.0, -p.m / (p.hbar * t));
  const Complex inv4a = 1.0 / (4.0 * alpha);
  PacketExponent e;
  e.quad = Complex(0.0, p.m / (2.0 * p.hbar * t)) - beta1 * beta1 * inv4a;
  e.lin = -2.0 * beta0 * beta1 * inv4a;
  e.c0 = Complex(logA, 0.0) +
         0.5 * std::log(Complex(0.0, -p.m / (kTwoPi * p.hbar * t))) +
         0.5 * std::log(kPi / (-alpha)) - beta0 * beta0 * inv4a;
  return e;
}

Complex free_packet_amplitude(const PacketExponent& e, double x) {
  return std::exp(e.quad * (x * x) + e.lin * x + e.c0);
}

WavefunctionGrid read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "x,re_psi,im_psi")
    throw InvalidParameter("wavefunction csv: bad header");
  WavefunctionGrid g;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    double vals[3];
    for (int k = 0; k < 3; ++k) {
      if (!std::getline(row, field, k < 2 ? ',' : '\n'))
        throw InvalidParameter("wavefunction csv: short row");
      vals[k] = std::stod(field);
    }
    g.x.push_back(vals[0]);
    g.psi.emplace_back(vals[1], vals[2]);
  }
  if (g.x.size() < 2)
    throw InvalidParameter("wavefunction csv: need at least two rows");
  g.dx = g.x[1] - g.x[0];
  validate_grid(g.x, g.dx);
  return g;
}

}  // namespace wickbridge::quantum
