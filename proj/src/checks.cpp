#include "wickbridge/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include <json.hpp>

#include "wickbridge/common.hpp"
#include "wickbridge/dictionary.hpp"
#include "wickbridge/error.hpp"
#include "wickbridge/gaussian_kernel.hpp"
#include "wickbridge/ou_process.hpp"
#include "wickbridge/quantum.hpp"

namespace wickbridge::checks {

namespace {

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol,
                              depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol,
                              depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-12, int depth = 40) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, simpson(a, b, fa, fm, fb),
                              tol, depth);
}

double fit_slope(std::span<const double> logx, std::span<const double> logy) {
  const std::size_t n = logx.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += logx[i];
    sy += logy[i];
    sxx += logx[i] * logx[i];
    sxy += logx[i] * logy[i];
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

CheckReport finish(std::string name, std::size_t points, double residual,
                   double tol, bool pass) {
  CheckReport r;
  r.identity = std::move(name);
  r.points = points;
  r.max_residual = residual;
  r.tolerance = tol;
  r.pass = pass;
  return r;
}

}  // namespace

std::string CheckReport::to_json_text(int precision) const {
  nlohmann::json j;
  const auto num = [&](double v) {
    return nlohmann::json::parse(format_double(v, precision));
  };
  j["identity"] = identity;
  j["points"] = points;
  j["max_residual"] = num(max_residual);
  j["tolerance"] = num(tolerance);
  j["pass"] = pass;
  return j.dump();
}

CheckReport check_free(const CheckOptions& opts) {
  const double tol = opts.tolerance > 0 ? opts.tolerance : 1e-10;
  double worst = 0.0;
  for (std::size_t i = 0; i < opts.points; ++i) {
    const double m = uniform_in(opts.seed, i, 0, 0.5, 2.0);
    const double hbar = uniform_in(opts.seed, i, 1, 0.5, 2.0);
    const double kB = uniform_in(opts.seed, i, 2, 0.5, 2.0);
    const double t = uniform_in(opts.seed, i, 3, 0.2, 3.0);
    const double x1 = uniform_in(opts.seed, i, 4, -2.0, 2.0);
    const double x2 = uniform_in(opts.seed, i, 5, -2.0, 2.0);
    const auto q = quantum::PhysParams::make(m, hbar);
    worst = std::max(worst, dict::check_free_identity(q, kB, x1, x2, t));
  }
  return finish("free", opts.points, worst, tol, worst < tol);
}

CheckReport check_harmonic(const CheckOptions& opts) {
  const double tol = opts.tolerance > 0 ? opts.tolerance : 1e-10;
  double worst = 0.0;
  std::size_t accepted = 0;
  for (std::uint64_t i = 0; accepted < opts.points; ++i) {
    const double m = uniform_in(opts.seed, i, 10, 0.5, 2.0);
    const double hbar = uniform_in(opts.seed, i, 11, 0.5, 2.0);
    const double omega = uniform_in(opts.seed, i, 12, 0.5, 2.0);
    const double kB = uniform_in(opts.seed, i, 13, 0.5, 2.0);
    const double t = uniform_in(opts.seed, i, 14, 0.1, 4.0);
    const double x1 = uniform_in(opts.seed, i, 15, -2.0, 2.0);
    const double x2 = uniform_in(opts.seed, i, 16, -2.0, 2.0);
    // keep omega*t at least 0.05 away from every multiple of pi
    const double frac = std::abs(std::remainder(omega * t, kPi));
    if (frac < 0.05) continue;
    ++accepted;
    const auto q = quantum::PhysParams::make(m, hbar, omega);
    worst = std::max(worst, dict::check_harmonic_identity(q, kB, x1, x2, t));
  }
  return finish("harmonic", opts.points, worst, tol, worst < tol);
}

CheckReport check_ground(const CheckOptions& opts) {
  const double tol = opts.tolerance > 0 ? opts.tolerance : 1e-10;
  const std::size_t sets = std::max<std::size_t>(3, opts.points / 100);
  double worst = 0.0;
  for (std::size_t i = 0; i < sets; ++i) {
    const double m = uniform_in(opts.seed, i, 20, 0.5, 2.0);
    const double hbar = uniform_in(opts.seed, i, 21, 0.5, 2.0);
    const double omega = uniform_in(opts.seed, i, 22, 0.5, 2.0);
    const double kB = uniform_in(opts.seed, i, 23, 0.5, 2.0);
    const double lambda = uniform_in(opts.seed, i, 24, 0.5, 2.0);
    const auto q = quantum::PhysParams::make(m, hbar, omega);
    worst = std::max(worst, dict::check_ground_state(q, kB, lambda, 801));
  }
  return finish("ground", sets, worst, tol, worst < tol);
}

CheckReport check_chapman(const CheckOptions& opts) {
  const double tol_coeff = 1e-12;
  const double tol_quad = opts.tolerance > 0 ? opts.tolerance : 1e-8;
  const std::size_t pairs = std::max<std::size_t>(8, opts.points / 10);

  double worst_coeff = 0.0;
  for (std::size_t i = 0; i < pairs; ++i) {
    const double m = uniform_in(opts.seed, i, 30, 0.5, 2.0);
    const double hbar = uniform_in(opts.seed, i, 31, 0.5, 2.0);
    const double dt1 = uniform_in(opts.seed, i, 32, 0.05, 5.0);
    const double dt2 = uniform_in(opts.seed, i, 33, 0.05, 5.0);

    const auto f1 = kernels::kernel_free(m, hbar, 0.0, dt1);
    const auto f2 = kernels::kernel_free(m, hbar, dt1, dt1 + dt2);
    worst_coeff = std::max(
        worst_coeff,
        kernels::coefficient_distance(
            kernels::compose(f2, f1),
            kernels::kernel_free(m, hbar, 0.0, dt1 + dt2)));

    const auto p = ou::OUParams::make(uniform_in(opts.seed, i, 34, 0.5, 2.0),
                                      uniform_in(opts.seed, i, 35, 0.5, 2.0),
                                      uniform_in(opts.seed, i, 36, 0.5, 2.0));
    const auto o1 = kernels::kernel_ou(p, dt1, kernels::Convention::normalized);
    const auto o2 = kernels::kernel_ou(p, dt2, kernels::Convention::normalized);
    worst_coeff = std::max(
        worst_coeff,
        kernels::coefficient_distance(
            kernels::compose(o2, o1),
            kernels::kernel_ou(p, dt1 + dt2, kernels::Convention::normalized)));

    // harmonic: keep the composite interval inside one caustic window
    const double omega = uniform_in(opts.seed, i, 37, 0.5, 2.0);
    const double th1 = uniform_in(opts.seed, i, 38, 0.05, kPi - 0.15);
    const double hi = kPi - 0.1 - th1;
    const double th2 = 0.05 + (hi > 0.05 ? (hi - 0.05) : 0.0) *
                                  counter_uniform(opts.seed, i, 39, 2);
    const double ta = th1 / omega, tb = th2 / omega;
    const auto h1 = kernels::kernel_harmonic(m, hbar, omega, 0.0, ta);
    const auto h2 = kernels::kernel_harmonic(m, hbar, omega, ta, ta + tb);
    worst_coeff = std::max(
        worst_coeff,
        kernels::coefficient_distance(
            kernels::compose(h2, h1),
            kernels::kernel_harmonic(m, hbar, omega, 0.0, ta + tb)));
  }

  // quadrature form of the composition law for the transition density
  double worst_quad = 0.0;
  const auto p = ou::OUParams::make(1.4, 0.9, 1.1);
  const double sigma = std::sqrt(p.kB / p.s);
  for (const double y1 : {-1.2, 0.4}) {
    for (const double y3 : {-0.3, 1.0}) {
      for (const double lag1 : {0.3, 1.1}) {
        const double lag2 = 0.7;
        const auto f = [&](double y2) {
          return ou::conditional_density(p, y3, lag2, y2) *
                 ou::conditional_density(p, y2, lag1, y1);
        };
        const double direct = ou::conditional_density(p, y3, lag1 + lag2, y1);
        const double integrated =
            adaptive_simpson(f, -12.0 * sigma, 12.0 * sigma);
        worst_quad =
            std::max(worst_quad, std::abs(integrated - direct) / direct);
      }
    }
  }

  const bool pass = worst_coeff < tol_coeff && worst_quad < tol_quad;
  return finish("chapman", pairs, std::max(worst_coeff, worst_quad), tol_quad,
                pass);
}

CheckReport check_variational(const CheckOptions& opts) {
  const double tol_const = 1e-10;
  const double tol_quad = opts.tolerance > 0 ? opts.tolerance : 1e-6;
  const auto p = ou::OUParams::make(2.0, 3.0, 1.0);  // gamma = 1.5

  double worst_const = 0.0;
  for (const double target : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double dtau = target / p.gamma;
    double lo = 1e300, hi = -1e300;
    const auto ys = linspace(-2.0, 2.0, 20);
    for (const double y1 : ys) {
      for (const double y2 : ys) {
        const double diff =
            std::log(ou::minimized_action_density(p, y1, 0.0, y2, dtau)) -
            std::log(ou::conditional_density(p, y2, dtau, y1));
        lo = std::min(lo, diff);
        hi = std::max(hi, diff);
      }
    }
    worst_const = std::max(worst_const, hi - lo);
  }

  // midpoint quadrature of the path cost along the numeric extremal
  double worst_quad = 0.0;
  const std::size_t n = 2000;
  for (const double target : {0.1, 1.0, 5.0}) {
    const double dtau = target / p.gamma;
    for (const auto& [y1, y2] :
         {std::pair{1.0, 0.5}, std::pair{-0.8, 1.3}, std::pair{0.2, -1.6}}) {
      const auto path = ou::extremal_path(p, 0.0, y1, dtau, y2, n,
                                          ou::ExtremalMethod::numeric);
      double q = 0.0;
      for (std::size_t i = 0; i + 1 < path.y.size(); ++i) {
        const double ydot = (path.y[i + 1] - path.y[i]) / path.dtau;
        const double ymid = 0.5 * (path.y[i + 1] + path.y[i]);
        const double v = ydot + p.gamma * ymid;
        q += p.R * v * v * path.dtau;
      }
      const double closed = ou::min_om_action(p, y1, 0.0, y2, dtau);
      worst_quad =
          std::max(worst_quad, std::abs(q - closed) / (4.0 * p.kB));
    }
  }

  const bool pass = worst_const < tol_const && worst_quad < tol_quad;
  return finish("variational", 5 * 20 * 20, std::max(worst_const, worst_quad),
                tol_quad, pass);
}

CheckReport check_slicing(const CheckOptions& opts) {
  const auto p = ou::OUParams::make(1.0, 1.0, 1.0);
  const double tau2 = 1.0, y1 = 0.8, y2 = -0.3;
  const double exact = ou::conditional_density(p, y2, tau2, y1);
  const auto budget = [&](std::size_t n) {
    return 5.0 * p.gamma * tau2 / static_cast<double>(n) + 1e-10;
  };

  if (opts.n_slices != 0) {
    const double approx = ou::sliced_path_density(p, y1, 0.0, y2, tau2,
                                                  opts.n_slices);
    const double err = std::abs(approx - exact) / exact;
    return finish("slicing", 1, err, budget(opts.n_slices),
                  err < budget(opts.n_slices));
  }

  std::vector<double> log_n, log_err;
  double worst_exact = 0.0;
  bool budgets_ok = true;
  for (std::size_t n = 1; n <= 4096; n *= 2) {
    const double euler = ou::sliced_path_density(p, y1, 0.0, y2, tau2, n,
                                                 ou::SliceKernel::euler);
    const double err = std::abs(euler - exact) / exact;
    if (err >= budget(n)) budgets_ok = false;
    if (n >= 64) {
      log_n.push_back(std::log(static_cast<double>(n)));
      log_err.push_back(std::log(err));
    }
    const double via_exact = ou::sliced_path_density(p, y1, 0.0, y2, tau2, n,
                                                     ou::SliceKernel::exact);
    worst_exact =
        std::max(worst_exact, std::abs(via_exact - exact) / exact);
  }
  const double order = -fit_slope(log_n, log_err);
  const bool pass =
      budgets_ok && worst_exact < 1e-12 && order > 0.8 && order < 1.2;
  return finish("slicing", 13, worst_exact, 1e-12, pass);
}

CheckReport check_continuity(const CheckOptions& opts) {
  const auto q = quantum::PhysParams::make(1.0, 1.0);
  const double sigma0 = 1.0, k0 = 0.5, t = 0.5, th = 1e-6;
  const auto e0 = quantum::free_packet_exponent(q, sigma0, k0, t);
  const auto em = quantum::free_packet_exponent(q, sigma0, k0, t - th);
  const auto ep = quantum::free_packet_exponent(q, sigma0, k0, t + th);

  std::vector<double> log_dx, log_res;
  double finest = 0.0;
  for (const std::size_t n : {512u, 1024u, 2048u}) {
    const auto x = linspace(-16.0, 16.0, n);
    const double dx = x[1] - x[0];
    std::vector<double> rho(n), rho_dot(n), current(n);
    for (std::size_t i = 0; i < n; ++i) {
      rho[i] = std::norm(quantum::free_packet_amplitude(e0, x[i]));
      const double rp = std::norm(quantum::free_packet_amplitude(ep, x[i]));
      const double rm = std::norm(quantum::free_packet_amplitude(em, x[i]));
      rho_dot[i] = (rp - rm) / (2.0 * th);
      const double phase_grad =
          q.hbar * std::imag(2.0 * e0.quad * x[i] + e0.lin);
      current[i] = rho[i] * phase_grad / q.m;
    }
    double rd_scale = 0.0, worst = 0.0;
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double div = (current[i + 1] - current[i - 1]) / (2.0 * dx);
      worst = std::max(worst, std::abs(rho_dot[i] + div));
      rd_scale = std::max(rd_scale, std::abs(rho_dot[i]));
    }
    const double res = worst / rd_scale;
    log_dx.push_back(std::log(dx));
    log_res.push_back(std::log(res));
    finest = res;
  }
  const double order = fit_slope(log_dx, log_res);
  const double tol = opts.tolerance > 0 ? opts.tolerance : 1e-3;
  const bool pass = order > 1.6 && order < 2.6 && finest < tol;
  return finish("continuity", 3, finest, tol, pass);
}

CheckReport run_check(std::string_view name, const CheckOptions& opts) {
  if (name == "free") return check_free(opts);
  if (name == "harmonic") return check_harmonic(opts);
  if (name == "ground") return check_ground(opts);
  if (name == "chapman") return check_chapman(opts);
  if (name == "variational") return check_variational(opts);
  if (name == "slicing") return check_slicing(opts);
  if (name == "continuity") return check_continuity(opts);
  throw UnknownIdentity("unknown identity: " + std::string(name));
}

}  // namespace wickbridge::checks
