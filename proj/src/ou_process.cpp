#include "wickbridge/ou_process.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "wickbridge/error.hpp"

namespace wickbridge::ou {

namespace detail {

double transition_variance_direct(const OUParams& p, double dtau) {
  return (p.kB / p.s) * (-std::expm1(-2.0 * p.gamma * dtau));
}

double transition_variance_series(const OUParams& p, double dtau) {
  const double u = p.gamma * dtau;
  // (kB/s)(1 - e^{-2u}) = (2 kB dtau / R) (1 - u + 2u^2/3 - ...)
  return (2.0 * p.kB * dtau / p.R) * (1.0 - u + (2.0 / 3.0) * u * u);
}

}  // namespace detail

double transition_mean(const OUParams& p, double dtau, double y1) {
  if (!(dtau > 0.0))
    throw NonpositiveInterval("transition_mean: dtau must be positive");
  return std::exp(-p.gamma * dtau) * y1;
}

double transition_variance(const OUParams& p, double dtau,
                           double series_threshold) {
  if (!(dtau > 0.0))
    throw NonpositiveInterval("transition_variance: dtau must be positive");
  if (p.gamma * dtau < series_threshold)
    return detail::transition_variance_series(p, dtau);
  return detail::transition_variance_direct(p, dtau);
}

double conditional_density(const OUParams& p, double y2, double dtau, double y1,
                           Convention conv) {
  const double mean = transition_mean(p, dtau, y1);
  const double var = transition_variance(p, dtau);
  const double z = y2 - mean;
  double f = std::exp(-0.5 * z * z / var) / std::sqrt(kTwoPi * var);
  if (conv == Convention::paper) f *= std::sqrt(p.s / p.kB);
  return f;
}

double one_gate_density(const OUParams& p, double y) {
  return std::sqrt(p.s / (kTwoPi * p.kB)) *
         std::exp(-0.5 * p.s * y * y / p.kB);
}

double om_lagrangian(const OUParams& p, double y, double ydot,
                     LagrangianForm form) {
  switch (form) {
    case LagrangianForm::full: {
      const double v = ydot + p.gamma * y;
      return 0.5 * p.R * v * v;
    }
    case LagrangianForm::reduced:
      return 0.5 * p.R * (ydot * ydot + p.gamma * p.gamma * y * y);
  }
  throw InvalidParameter("om_lagrangian: unknown form");
}

namespace {

// Pinned-endpoint solution of d2y/dtau2 = gamma^2 y in the sinh interpolation
// form; degenerates smoothly to the straight line as gamma*T -> 0.
double extremal_value(double gamma, double T, double y1, double y2, double t) {
  const double u = gamma * T;
  if (u < 1e-8) return y1 + (y2 - y1) * (t / T);
  // scale both sinh terms by e^{-u} so large u cannot overflow
  const double lhs = std::exp(gamma * (T - t) - u) - std::exp(-gamma * (T - t) - u);
  const double rhs = std::exp(gamma * t - u) - std::exp(-gamma * t - u);
  const double den = 1.0 - std::exp(-2.0 * u);
  return (y1 * lhs + y2 * rhs) / den;
}

std::vector<double> solve_extremal_tridiagonal(double gamma, double T,
                                               double y1, double y2,
                                               std::size_t n) {
  // Central differences: y_{i-1} - (2 + (gamma dtau)^2) y_i + y_{i+1} = 0
  const double dtau = T / static_cast<double>(n - 1);
  const double diag = -(2.0 + gamma * gamma * dtau * dtau);
  std::vector<double> y(n);
  y.front() = y1;
  y.back() = y2;
  if (n == 2) return y;

  const std::size_t m = n - 2;  // interior unknowns
  std::vector<double> c_prime(m), d_prime(m);
  // boundary values move to the right-hand side; the first and last interior
  // rows coincide when m == 1
  const auto rhs_at = [&](std::size_t i) {
    double r = 0.0;
    if (i == 0) r -= y1;
    if (i == m - 1) r -= y2;
    return r;
  };
  // Thomas algorithm with unit off-diagonals
  c_prime[0] = 1.0 / diag;
  d_prime[0] = rhs_at(0) / diag;
  for (std::size_t i = 1; i < m; ++i) {
    const double denom = diag - c_prime[i - 1];
    c_prime[i] = 1.0 / denom;
    d_prime[i] = (rhs_at(i) - d_prime[i - 1]) / denom;
  }
  y[m] = d_prime[m - 1];
  for (std::size_t i = m - 1; i-- > 0;)
    y[i + 1] = d_prime[i] - c_prime[i] * y[i + 2];
  return y;
}

}  // namespace

PathGrid extremal_path(const OUParams& p, double tau1, double y1, double tau2,
                       double y2, std::size_t n, ExtremalMethod method) {
  if (!(tau2 > tau1))
    throw DegenerateInterval("extremal_path: requires tau2 > tau1");
  if (n < 2) throw InvalidParameter("extremal_path: need n >= 2 grid points");
  const double T = tau2 - tau1;
  PathGrid g;
  g.tau = linspace(tau1, tau2, n);
  g.dtau = T / static_cast<double>(n - 1);
  if (method == ExtremalMethod::analytic) {
    g.y.resize(n);
    for (std::size_t i = 0; i < n; ++i)
      g.y[i] = extremal_value(p.gamma, T, y1, y2, g.tau[i] - tau1);
  } else {
    g.y = solve_extremal_tridiagonal(p.gamma, T, y1, y2, n);
  }
  return g;
}

PathGrid extremal_from_equilibrium(const OUParams& p, double tau_start,
                                   double tau2, double y2, std::size_t n) {
  if (!(tau2 > tau_start))
    throw DegenerateInterval("extremal_from_equilibrium: tau2 <= tau_start");
  if (n < 2) throw InvalidParameter("extremal_from_equilibrium: need n >= 2");
  PathGrid g;
  g.tau = linspace(tau_start, tau2, n);
  g.dtau = (tau2 - tau_start) / static_cast<double>(n - 1);
  g.y.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    g.y[i] = y2 * std::exp(p.gamma * (g.tau[i] - tau2));
  return g;
}

double min_om_action(const OUParams& p, double y1, double tau1, double y2,
                     double tau2) {
  if (!(tau2 > tau1))
    throw DegenerateInterval("min_om_action: requires tau2 > tau1");
  const double u = p.gamma * (tau2 - tau1);
  // integral((dy/dtau)^2 + gamma^2 y^2) along the extremal reduces to the
  // boundary term [y dy/dtau]; the cross term integrates exactly. The
  // half-angle split keeps both contributions nonnegative, so short lags do
  // not cancel:
  //   (y1^2+y2^2) coth u - 2 y1 y2 csch u
  //     = [(y1-y2)^2 coth(u/2) + (y1+y2)^2 tanh(u/2)] / 2
  const double coth_half = 1.0 + 2.0 / std::expm1(u);
  const double tanh_half = std::tanh(0.5 * u);
  const double dm = y1 - y2, dp = y1 + y2;
  const double boundary =
      0.5 * p.gamma * (dm * dm * coth_half + dp * dp * tanh_half);
  return p.R * (boundary + p.gamma * (y2 * y2 - y1 * y1));
}

double minimized_action_density(const OUParams& p, double y1, double tau1,
                                double y2, double tau2) {
  const double q0 = min_om_action(p, y1, tau1, 0.0, tau2);
  const double qp = min_om_action(p, y1, tau1, 1.0, tau2);
  const double qm = min_om_action(p, y1, tau1, -1.0, tau2);
  // quadratic coefficient of the cost in y2; fixes the Gaussian normalizer
  const double q2 = 0.5 * (qp + qm - 2.0 * q0);
  const double logZ = 0.5 * std::log(4.0 * kPi * p.kB / q2);
  const double q = min_om_action(p, y1, tau1, y2, tau2);
  return std::exp(-q / (4.0 * p.kB) - logZ);
}

double sliced_path_density(const OUParams& p, double y1, double tau1, double y2,
                           double tau2, std::size_t n_slices,
                           SliceKernel kind) {
  if (!(tau2 > tau1))
    throw DegenerateInterval("sliced_path_density: requires tau2 > tau1");
  if (n_slices < 1)
    throw InvalidParameter("sliced_path_density: need n_slices >= 1");
  const double dtau = (tau2 - tau1) / static_cast<double>(n_slices);

  kernels::ComplexGaussianKernel slice;
  if (kind == SliceKernel::exact) {
    slice = kernels::kernel_ou(p, dtau, Convention::normalized);
  } else {
    const double mu = 1.0 - p.gamma * dtau;  // left-point drift factor
    const double var = 2.0 * p.kB * dtau / p.R;
    slice.a = Complex(-0.5 / var, 0.0);
    slice.b = Complex(-0.5 * mu * mu / var, 0.0);
    slice.c = Complex(mu / var, 0.0);
    slice.logN = Complex(-0.5 * std::log(kTwoPi * var), 0.0);
    slice.disc = Complex(0.0, 0.0);  // degenerate transition kernel
  }
  const auto composed = kernels::compose_power(slice, n_slices);
  return kernels::evaluate(composed, y2, y1).real();
}

double multi_gate_density(const OUParams& p, std::span<const Gate> gates) {
  if (gates.empty())
    throw InvalidParameter("multi_gate_density: need at least one gate");
  for (std::size_t i = 1; i < gates.size(); ++i)
    if (!(gates[i].tau > gates[i - 1].tau))
      throw UnorderedGates("multi_gate_density: gate times must increase");
  double f = one_gate_density(p, gates[0].y);
  for (std::size_t i = 1; i < gates.size(); ++i)
    f *= conditional_density(p, gates[i].y, gates[i].tau - gates[i - 1].tau,
                             gates[i - 1].y);
  return f;
}

std::vector<TrajectoryEnsemble::Row> TrajectoryEnsemble::statistics() const {
  std::vector<Row> rows;
  rows.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto& col = values[k];
    const std::size_t n = col.size();
    Row r{};
    r.tau = times[k];
    r.mean = pairwise_sum<double>(col) / static_cast<double>(n);
    std::vector<double> dev2(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double d = col[i] - r.mean;
      dev2[i] = d * d;
    }
    r.var = n > 1 ? pairwise_sum<double>(dev2) / static_cast<double>(n - 1)
                  : 0.0;
    std::vector<double> sorted(col);
    std::sort(sorted.begin(), sorted.end());
    const auto quantile = [&](double q) {
      const double pos = q * static_cast<double>(n - 1);
      const std::size_t lo = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(lo);
      if (lo + 1 >= n) return sorted[n - 1];
      return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
    };
    r.p05 = quantile(0.05);
    r.p50 = quantile(0.50);
    r.p95 = quantile(0.95);
    rows.push_back(r);
  }
  return rows;
}

TrajectoryEnsemble sample_paths(const OUParams& p, double y0, double tau_max,
                                double dt, std::size_t n_paths,
                                std::uint64_t seed, const SampleOptions& opts) {
  if (!(dt > 0.0)) throw InvalidParameter("sample_paths: dt must be positive");
  if (!(tau_max > 0.0))
    throw InvalidParameter("sample_paths: tau_max must be positive");
  if (n_paths == 0) throw InvalidParameter("sample_paths: need n_paths >= 1");
  if (dt * p.gamma >= 0.1)
    throw UnstableStep("sample_paths: dt * gamma must stay below 0.1");

  const std::size_t n_steps =
      std::max<std::size_t>(1, static_cast<std::size_t>(
                                   std::llround(tau_max / dt)));
  const std::size_t stride = std::max<std::size_t>(1, opts.record_stride);

  std::vector<std::size_t> recorded;
  for (std::size_t k = 0; k <= n_steps; k += stride) recorded.push_back(k);
  if (recorded.back() != n_steps) recorded.push_back(n_steps);

  TrajectoryEnsemble ens;
  ens.seed = seed;
  ens.n_paths = n_paths;
  ens.dt = dt;
  ens.times.reserve(recorded.size());
  for (const auto k : recorded)
    ens.times.push_back(static_cast<double>(k) * dt);
  ens.values.assign(recorded.size(), std::vector<double>(n_paths, 0.0));

  const double drift = opts.scheme == Scheme::euler
                           ? 1.0 - p.gamma * dt
                           : std::exp(-p.gamma * dt);
  const double amp =
      !opts.with_noise ? 0.0
      : opts.scheme == Scheme::euler
          ? std::sqrt(2.0 * p.kB * dt / p.R)
          : std::sqrt((p.kB / p.s) * (-std::expm1(-2.0 * p.gamma * dt)));

  const auto run_range = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t path = lo; path < hi; ++path) {
      double y = y0;
      std::size_t rec = 0;
      if (recorded[rec] == 0) ens.values[rec++][path] = y;
      for (std::size_t step = 1; step <= n_steps; ++step) {
        const double z = amp != 0.0 ? counter_normal(seed, path, step) : 0.0;
        y = y * drift + amp * z;
        if (rec < recorded.size() && recorded[rec] == step)
          ens.values[rec++][path] = y;
      }
    }
  };

  const unsigned want = opts.threads ? opts.threads : max_threads();
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(want, std::max<std::size_t>(1, n_paths)));
  if (workers <= 1) {
    run_range(0, n_paths);
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (n_paths + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n_paths, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  return ens;
}

std::vector<HistogramBin> histogram(std::span<const double> samples,
                                    std::size_t nbins, double lo, double hi) {
  if (nbins == 0 || !(hi > lo))
    throw InvalidParameter("histogram: need nbins >= 1 and hi > lo");
  std::vector<HistogramBin> bins(nbins);
  const double width = (hi - lo) / static_cast<double>(nbins);
  for (std::size_t i = 0; i < nbins; ++i) {
    bins[i].lo = lo + width * static_cast<double>(i);
    bins[i].hi = bins[i].lo + width;
    bins[i].count = 0;
  }
  std::size_t inside = 0;
  for (const double v : samples) {
    if (v < lo || v >= hi) continue;
    auto idx = static_cast<std::size_t>((v - lo) / width);
    if (idx >= nbins) idx = nbins - 1;
    ++bins[idx].count;
    ++inside;
  }
  const double norm =
      inside ? 1.0 / (static_cast<double>(samples.size()) * width) : 0.0;
  for (auto& b : bins)
    b.density = static_cast<double>(b.count) * norm;
  return bins;
}

void write_statistics_csv(const TrajectoryEnsemble& ens, std::ostream& os,
                          int precision) {
  os << "tau,mean,var,p05,p50,p95\n";
  for (const auto& row : ens.statistics())
    os << format_double(row.tau, precision) << ','
       << format_double(row.mean, precision) << ','
       << format_double(row.var, precision) << ','
       << format_double(row.p05, precision) << ','
       << format_double(row.p50, precision) << ','
       << format_double(row.p95, precision) << '\n';
}

void write_histogram_csv(std::span<const HistogramBin> bins, std::ostream& os,
                         int precision) {
  os << "bin_lo,bin_hi,count,density\n";
  for (const auto& b : bins)
    os << format_double(b.lo, precision) << ','
       << format_double(b.hi, precision) << ',' << b.count << ','
       << format_double(b.density, precision) << '\n';
}

}  // namespace wickbridge::ou
