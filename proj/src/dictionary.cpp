#include "wickbridge/dictionary.hpp"

#include <algorithm>
#include <cmath>

#include "wickbridge/error.hpp"
#include "wickbridge/gaussian_kernel.hpp"
#include "wickbridge/ou_process.hpp"

namespace wickbridge::dict {

ou::OUParams to_thermo(const DictionaryMap& map, const quantum::PhysParams& q,
                       double kB) {
  if (!(q.omega > 0.0))
    throw ZeroFrequency("to_thermo: omega must be positive; the free case is "
                        "handled by the small-rate limit");
  if (!(kB > 0.0)) throw InvalidParameter("to_thermo: kB must be positive");
  if (!(map.lambda > 0.0))
    throw InvalidParameter("to_thermo: lambda must be positive");
  const double s =
      2.0 * kB * q.m * q.omega * map.lambda * map.lambda / q.hbar;
  return ou::OUParams::from_rate(q.omega, s, kB);
}

quantum::PhysParams to_quantum(const DictionaryMap& map, const ou::OUParams& p,
                               double hbar) {
  if (!(p.gamma > 0.0))
    throw ZeroFrequency("to_quantum: cannot invert the map at gamma = 0");
  if (!(hbar > 0.0)) throw InvalidParameter("to_quantum: hbar must be positive");
  const double m =
      hbar * p.s / (2.0 * p.kB * p.gamma * map.lambda * map.lambda);
  return quantum::PhysParams::make(m, hbar, p.gamma);
}

ou::OUParams map_params(const quantum::PhysParams& q, double kB) {
  return to_thermo(DictionaryMap{}, q, kB);
}

quantum::PhysParams map_params_inverse(const ou::OUParams& p, double hbar) {
  return to_quantum(DictionaryMap{}, p, hbar);
}

double DensityGrid::integral() const {
  return trapezoid<double>(rho, dx);
}

DensityGrid make_density_grid(std::vector<double> x, std::vector<double> values,
                              bool renormalize) {
  if (x.size() != values.size() || x.size() < 2)
    throw InvalidParameter("density grid: mismatched or short arrays");
  for (const double v : values)
    if (!(v >= 0.0))
      throw InvalidParameter("density grid: values must be nonnegative");
  DensityGrid g;
  g.dx = x[1] - x[0];
  quantum::validate_grid(x, g.dx);
  g.x = std::move(x);
  g.rho = std::move(values);
  if (renormalize) {
    const double mass = g.integral();
    if (!(mass > 0.0)) throw ZeroNorm("density grid: zero mass");
    for (auto& v : g.rho) v /= mass;
  }
  return g;
}

DensityGrid born(const quantum::WavefunctionGrid& psi) {
  std::vector<double> rho(psi.psi.size());
  for (std::size_t i = 0; i < psi.psi.size(); ++i)
    rho[i] = std::norm(psi.psi[i]);
  DensityGrid g;
  g.x = psi.x;
  g.dx = psi.dx;
  g.rho = std::move(rho);
  const double mass = g.integral();
  if (!(mass > 1e-280)) throw ZeroNorm("born: wavefunction has zero norm");
  for (auto& v : g.rho) v /= mass;
  return g;
}

quantum::WavefunctionGrid born_inverse(const DensitySeries& series, double mass,
                                       double hbar, double floor,
                                       std::size_t at_index) {
  if (series.grids.size() < 2 || series.times.size() != series.grids.size())
    throw InsufficientTimeSamples(
        "born_inverse: need at least two consistent time samples");
  if (!(mass > 0.0) || !(hbar > 0.0))
    throw InvalidParameter("born_inverse: mass and hbar must be positive");
  if (at_index == SIZE_MAX) at_index = series.grids.size() / 2;
  if (at_index >= series.grids.size())
    throw InvalidParameter("born_inverse: time index out of range");

  const DensityGrid& rho = series.grids[at_index];
  const std::size_t n = rho.x.size();
  for (const auto& g : series.grids)
    if (g.x.size() != n || g.x != rho.x)
      throw InvalidParameter("born_inverse: grids must share the x axis");

  // drho/dt: central difference where possible, one-sided at the ends of the
  // series.
  std::vector<double> rho_dot(n);
  const auto& t = series.times;
  std::size_t lo = at_index, hi = at_index;
  if (at_index > 0) --lo;
  if (at_index + 1 < series.grids.size()) ++hi;
  const double dt = t[hi] - t[lo];
  if (!(dt > 0.0))
    throw InvalidParameter("born_inverse: time samples must increase");
  const auto& r_lo = series.grids[lo].rho;
  const auto& r_hi = series.grids[hi].rho;
  for (std::size_t i = 0; i < n; ++i) rho_dot[i] = (r_hi[i] - r_lo[i]) / dt;

  // Support = contiguous block with rho >= floor; sub-floor interior points
  // make the phase reconstruction ill-posed.
  double peak = 0.0;
  for (const double v : rho.rho) peak = std::max(peak, v);
  if (!(peak > 0.0)) throw ZeroNorm("born_inverse: zero density");
  std::size_t first = n, last = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (rho.rho[i] >= floor) {
      first = std::min(first, i);
      last = i;
    }
  if (first >= last)
    throw DensityFloor("born_inverse: no support above the density floor");
  for (std::size_t i = first; i <= last; ++i)
    if (rho.rho[i] < floor)
      throw DensityFloor(
          "born_inverse: density falls below the floor inside the support");

  // Cumulative trapezoid with the Euler-Maclaurin endpoint correction
  // -dx^2/12 (f'(x) - f'(x0)); fourth-order accuracy keeps the velocity field
  // usable even where the density is orders of magnitude below its peak.
  const auto cum_int = [&](const std::vector<double>& f) {
    auto out = cum_trapezoid(f, rho.dx);
    std::vector<double> fp(n);
    fp.front() = (f[1] - f[0]) / rho.dx;
    fp.back() = (f[n - 1] - f[n - 2]) / rho.dx;
    for (std::size_t i = 1; i + 1 < n; ++i)
      fp[i] = (f[i + 1] - f[i - 1]) / (2.0 * rho.dx);
    const double c = rho.dx * rho.dx / 12.0;
    for (std::size_t i = 0; i < n; ++i) out[i] -= c * (fp[i] - fp.front());
    return out;
  };

  const auto flux = cum_int(rho_dot);  // integral of drho/dt
  std::vector<double> phi_x(n, 0.0);
  for (std::size_t i = first; i <= last; ++i)
    phi_x[i] = -mass * flux[i] / rho.rho[i];
  // gauge: phi = 0 at the left grid edge
  const auto phi = cum_int(phi_x);

  quantum::WavefunctionGrid out;
  out.x = rho.x;
  out.dx = rho.dx;
  out.psi.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.psi[i] = std::sqrt(rho.rho[i]) *
                 std::exp(Complex(0.0, phi[i] / hbar));
  return out;
}

double observable_average(std::span<const double> f, const DensityGrid& rho,
                          double norm_tol) {
  if (f.size() != rho.rho.size())
    throw InvalidParameter("observable_average: size mismatch");
  const double mass = rho.integral();
  if (std::abs(mass - 1.0) > norm_tol)
    throw UnnormalizedDensity(
        "observable_average: density does not integrate to one");
  std::vector<double> weighted(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) weighted[i] = f[i] * rho.rho[i];
  return trapezoid<double>(weighted, rho.dx) / mass;
}

quantum::WavefunctionGrid assemble_wavefunction(std::span<const double> S,
                                                std::span<const double> I,
                                                std::span<const double> x,
                                                double kB, double hbar,
                                                double entropy_factor) {
  if (S.size() != I.size() || S.size() != x.size() || x.size() < 2)
    throw InvalidParameter("assemble_wavefunction: mismatched arrays");
  if (!(kB > 0.0) || !(hbar > 0.0))
    throw InvalidParameter("assemble_wavefunction: kB, hbar must be positive");
  const double dx = x[1] - x[0];
  std::vector<double> xs(x.begin(), x.end());
  quantum::validate_grid(xs, dx);

  std::vector<ComplexAction> act(S.size());
  double max2re = -1e300;
  for (std::size_t i = 0; i < S.size(); ++i) {
    act[i] = ComplexAction::from(S[i], I[i], kB, hbar, entropy_factor);
    if (!std::isfinite(act[i].entropy_part) ||
        !std::isfinite(act[i].phase_part))
      throw InvalidParameter("assemble_wavefunction: non-finite action entry");
    max2re = std::max(max2re, 2.0 * act[i].entropy_part);
  }
  // Z = integral |exp|^2 dx, evaluated in log space against overflow
  std::vector<double> shifted(S.size());
  for (std::size_t i = 0; i < S.size(); ++i)
    shifted[i] = std::exp(2.0 * act[i].entropy_part - max2re);
  const double logZ = max2re + std::log(trapezoid<double>(shifted, dx));

  quantum::WavefunctionGrid out;
  out.x = std::move(xs);
  out.dx = dx;
  out.psi.resize(S.size());
  for (std::size_t i = 0; i < S.size(); ++i)
    out.psi[i] = std::exp(act[i].exponent() - 0.5 * logZ);
  return out;
}

namespace {

double relative_residual(Complex lhs, Complex rhs) {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  if (scale == 0.0) return 0.0;
  return std::abs(lhs - rhs) / scale;
}

}  // namespace

double check_free_identity(const quantum::PhysParams& q, double kB, double x1,
                           double x2, double t) {
  if (t == 0.0) throw ZeroInterval("check_free_identity: t must be nonzero");
  const auto K = kernels::kernel_free(q.m, q.hbar, 0.0, t);
  // The small-rate form depends on the parameters only through R = s/gamma,
  // so any positive reference rate represents the limit exactly.
  const double omega_ref = q.omega > 0.0 ? q.omega : 1.0;
  const auto p =
      map_params(quantum::PhysParams::make(q.m, q.hbar, omega_ref), kB);
  const auto f1 = kernels::kernel_ou_small_rate(p, wick(t).value,
                                                kernels::Convention::paper);
  const Complex lhs = kernels::evaluate(K, x2, x1);
  const Complex rhs =
      std::sqrt(kB / p.s) * kernels::evaluate(f1, x2, x1);
  return relative_residual(lhs, rhs);
}

double free_identity_residual_finite_gamma(const quantum::PhysParams& q,
                                           double kB, double x1, double x2,
                                           double t, double gamma) {
  if (t == 0.0)
    throw ZeroInterval("free_identity_residual_finite_gamma: t != 0 required");
  if (!(gamma > 0.0))
    throw InvalidParameter("free_identity_residual_finite_gamma: gamma > 0");
  const auto K = kernels::kernel_free(q.m, q.hbar, 0.0, t);
  // keep R = 2 kB m / hbar fixed while gamma varies, as the map prescribes
  const double R = 2.0 * kB * q.m / q.hbar;
  const auto p = ou::OUParams::make(R, R * gamma, kB);
  const auto f1 = kernels::kernel_ou_complex(p, wick(t).value,
                                             kernels::Convention::paper);
  const Complex lhs = kernels::evaluate(K, x2, x1);
  const Complex rhs = std::sqrt(kB / p.s) * kernels::evaluate(f1, x2, x1);
  return relative_residual(lhs, rhs);
}

double check_harmonic_identity(const quantum::PhysParams& q, double kB,
                               double x1, double x2, double t) {
  const auto K = kernels::kernel_harmonic(q.m, q.hbar, q.omega, 0.0, t);
  const auto p = map_params(q, kB);
  const auto f1 = kernels::kernel_ou_complex(p, wick(t).value,
                                             kernels::Convention::paper);
  const double dV = 0.5 * q.m * q.omega * q.omega * (x2 * x2 - x1 * x1);
  const Complex factor =
      std::exp(Complex(-dV / (q.hbar * q.omega), 0.5 * q.omega * t)) *
      std::sqrt(2.0 * q.m * q.omega / q.hbar);
  const Complex lhs = kernels::evaluate(f1, x2, x1);
  const Complex rhs = factor * kernels::evaluate(K, x2, x1);
  return relative_residual(lhs, rhs);
}

double check_ground_state(const quantum::PhysParams& q, double kB,
                          double lambda, std::size_t n, double half_width) {
  if (!(q.omega > 0.0))
    throw ZeroFrequency("check_ground_state: omega must be positive");
  const DictionaryMap map{lambda};
  const auto p = to_thermo(map, q, kB);
  // ground state |psi0|^2, unit-normalized: Gaussian with variance
  // hbar/(2 m omega) in x
  const double sigma2 = q.hbar / (2.0 * q.m * q.omega);
  const double span = half_width * std::sqrt(sigma2);
  const double peak = 1.0 / std::sqrt(kTwoPi * sigma2);
  const auto x = linspace(-span, span, n);
  double worst = 0.0;
  for (const double xi : x) {
    const double psi2 = std::exp(-xi * xi / (2.0 * sigma2)) * peak;
    // mapped one-gate density transported to x = lambda * y
    const double f = ou::one_gate_density(p, xi / lambda) / lambda;
    worst = std::max(worst, std::abs(psi2 - f));
  }
  return worst / peak;
}

}  // namespace wickbridge::dict
