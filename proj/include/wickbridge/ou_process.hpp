#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "wickbridge/gaussian_kernel.hpp"
#include "wickbridge/ou_params.hpp"

namespace wickbridge::ou {

using kernels::Convention;

// ---------------------------------------------------------------------------
// Transition moments and densities

// Conditional mean exp(-gamma*dtau) * y1.
double transition_mean(const OUParams& p, double dtau, double y1);

// Conditional variance (kB/s)(1 - exp(-2*gamma*dtau)). Below
// `series_threshold` on gamma*dtau the truncated small-rate series
// 2*kB*dtau/R * (1 - u + 2u^2/3) is used instead of the direct expression;
// the two agree to better than 1e-9 relative at the crossover.
double transition_variance(const OUParams& p, double dtau,
                           double series_threshold = 1e-6);

namespace detail {
double transition_variance_direct(const OUParams& p, double dtau);
double transition_variance_series(const OUParams& p, double dtau);
}  // namespace detail

// Two-gate conditional density f1(y2, tau+dtau | y1, tau); stationary, so only
// the lag enters. `paper` convention multiplies by sqrt(s/kB).
double conditional_density(const OUParams& p, double y2, double dtau, double y1,
                           Convention conv = Convention::normalized);

// Stationary one-gate density sqrt(s/(2*pi*kB)) * exp(-s y^2 / (2 kB)).
double one_gate_density(const OUParams& p, double y);

// ---------------------------------------------------------------------------
// Path cost and extremals

// `full` is the path-cost density (R/2)(dy/dtau + gamma*y)^2; `reduced` drops
// the total-derivative cross term, giving (R/2)((dy/dtau)^2 + gamma^2 y^2).
// Their integrals over a fixed path differ by R*gamma*(y2^2 - y1^2)/2.
enum class LagrangianForm { full, reduced };
double om_lagrangian(const OUParams& p, double y, double ydot,
                     LagrangianForm form);

struct PathGrid {
  std::vector<double> tau;
  std::vector<double> y;
  double dtau = 0.0;
};

enum class ExtremalMethod { analytic, numeric };

// Solves d2y/dtau2 = gamma^2 y with both endpoints pinned. `analytic` uses the
// sinh interpolation form; `numeric` a second-order central-difference
// tridiagonal solve (Thomas algorithm). n >= 2 grid points.
PathGrid extremal_path(const OUParams& p, double tau1, double y1, double tau2,
                       double y2, std::size_t n,
                       ExtremalMethod method = ExtremalMethod::analytic);

// Extremal pinned at equilibrium in the infinite past: y(tau) =
// y2 * exp(gamma*(tau - tau2)), sampled on [tau_start, tau2].
PathGrid extremal_from_equilibrium(const OUParams& p, double tau_start,
                                   double tau2, double y2, std::size_t n);

// Minimum of the path cost integral(R (dy/dtau + gamma y)^2 dtau) over paths
// pinned at (tau1, y1) and (tau2, y2); evaluated from the boundary terms of
// the extremal, numerically stable for any gamma*(tau2-tau1) > 0.
double min_om_action(const OUParams& p, double y1, double tau1, double y2,
                     double tau2);

// Z^{-1} exp(-min_om_action / (4 kB)), normalized over y2. The exponent equals
// the conditional-density exponent exactly.
double minimized_action_density(const OUParams& p, double y1, double tau1,
                                double y2, double tau2);

// ---------------------------------------------------------------------------
// Time-sliced path integral

// Per-slice short-time kernel: `euler` uses mean y*(1 - gamma*dtau) and
// variance 2*kB*dtau/R (left-point discretization, O(1/n) convergence);
// `exact` uses the exact transition kernel (any n reproduces the exact
// density to rounding).
enum class SliceKernel { euler, exact };

double sliced_path_density(const OUParams& p, double y1, double tau1, double y2,
                           double tau2, std::size_t n_slices,
                           SliceKernel kind = SliceKernel::euler);

// ---------------------------------------------------------------------------
// Multi-gate densities

struct Gate {
  double tau;
  double y;
};

// Joint density of an ordered gate sequence: f1(y_1) * prod f1(y_{k+1} | y_k),
// normalized convention. Gates must be strictly increasing in time.
double multi_gate_density(const OUParams& p, std::span<const Gate> gates);

// ---------------------------------------------------------------------------
// Langevin sampling

enum class Scheme {
  euler,  // y <- y (1 - gamma dt) + sqrt(2 kB dt / R) N(0,1)
  exact,  // y <- y exp(-gamma dt) + sqrt((kB/s)(1 - exp(-2 gamma dt))) N(0,1)
};

struct SampleOptions {
  Scheme scheme = Scheme::euler;
  bool with_noise = true;    // false integrates the noiseless flow
  std::size_t record_stride = 1;
  unsigned threads = 0;      // 0 = WICKBRIDGE_THREADS / hardware default
};

// Recorded ensemble values: values[k][path] is the state at times[k]. With a
// fixed (seed, n_paths, grid) the contents are bit-identical regardless of
// worker count, since every increment is a counter-derived variate.
struct TrajectoryEnsemble {
  std::uint64_t seed = 0;
  std::size_t n_paths = 0;
  double dt = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> values;

  struct Row {
    double tau, mean, var, p05, p50, p95;
  };
  // Per-time mean, unbiased variance, and interpolated percentiles.
  std::vector<Row> statistics() const;
};

// Stochastic relaxation R dy/dtau + s y = xi with white noise of intensity
// 2 kB R (the unique choice whose stationary variance is kB/s). Throws
// UnstableStep when dt * gamma >= 0.1.
TrajectoryEnsemble sample_paths(const OUParams& p, double y0, double tau_max,
                                double dt, std::size_t n_paths,
                                std::uint64_t seed,
                                const SampleOptions& opts = {});

struct HistogramBin {
  double lo, hi;
  std::uint64_t count;
  double density;
};

// Fixed-width histogram over [lo, hi); samples outside the range are dropped.
std::vector<HistogramBin> histogram(std::span<const double> samples,
                                    std::size_t nbins, double lo, double hi);

// CSV emitters for the ensemble interfaces: header `tau,mean,var,p05,p50,p95`
// for statistics rows and `bin_lo,bin_hi,count,density` for histograms.
void write_statistics_csv(const TrajectoryEnsemble& ens, std::ostream& os,
                          int precision = 12);
void write_histogram_csv(std::span<const HistogramBin> bins, std::ostream& os,
                         int precision = 12);

}  // namespace wickbridge::ou
