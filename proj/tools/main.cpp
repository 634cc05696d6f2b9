// Command-line front end: propagator tables, transition densities, extremal
// paths, Langevin ensembles, time-sliced composition sweeps, identity checks,
// and the parameter-map round trip. All tables are byte-stable for a fixed
// flag set and seed.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wickbridge/checks.hpp"
#include "wickbridge/common.hpp"
#include "wickbridge/dictionary.hpp"
#include "wickbridge/error.hpp"
#include "wickbridge/gaussian_kernel.hpp"
#include "wickbridge/ou_process.hpp"
#include "wickbridge/quantum.hpp"

namespace wb = wickbridge;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitCheckFailed = 3;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_table(const Table& t, std::ostream& os, const std::string& format,
                 int precision) {
  if (format == "csv") {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << wb::format_double(row[i], precision);
      os << '\n';
    }
    return;
  }
  nlohmann::json j;
  j["columns"] = t.columns;
  auto rows = nlohmann::json::array();
  for (const auto& row : t.rows) {
    auto r = nlohmann::json::array();
    for (const double v : row)
      r.push_back(nlohmann::json::parse(wb::format_double(v, precision)));
    rows.push_back(std::move(r));
  }
  j["rows"] = std::move(rows);
  os << j.dump() << '\n';
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw wb::InvalidParameter("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

struct CommonOpts {
  std::string out;
  std::string format = "csv";
  int precision = 12;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--out", c.out, "output file (default: stdout)");
  cmd->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--precision", c.precision, "significant digits")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();
}

struct OUFlagSet {
  double R = 1.0;
  double s = 1.0;
  double kB = 1.0;
  std::optional<double> gamma;

  wb::ou::OUParams params() const {
    if (gamma) return wb::ou::OUParams::from_rate(*gamma, s, kB);
    return wb::ou::OUParams::make(R, s, kB);
  }
};

void add_ou_flags(CLI::App* cmd, OUFlagSet& f) {
  auto* r = cmd->add_option("--R", f.R, "resistance")->capture_default_str();
  cmd->add_option("--s", f.s, "entropy curvature")->capture_default_str();
  cmd->add_option("--kB", f.kB, "Boltzmann constant")->capture_default_str();
  cmd->add_option("--gamma", f.gamma,
                  "relaxation rate (overrides --R via R = s/gamma)")
      ->excludes(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "wickbridge: Gaussian propagators, fluctuation densities, and the "
      "dictionary between them"};
  app.require_subcommand(1);

  // ---- propagator ----------------------------------------------------------
  auto* prop = app.add_subcommand(
      "propagator", "evaluate a propagator kernel on a symmetric x2 grid");
  CommonOpts prop_common;
  std::string prop_kind = "free";
  double prop_m = 1.0, prop_hbar = 1.0, prop_omega = 1.0, prop_x1 = 0.0,
         prop_x2 = 3.0, prop_t = 1.0;
  std::size_t prop_n = 101;
  prop->add_option("--kind", prop_kind, "free or harmonic")
      ->check(CLI::IsMember({"free", "harmonic"}))
      ->capture_default_str();
  prop->add_option("--m", prop_m, "mass")->capture_default_str();
  prop->add_option("--hbar", prop_hbar, "action quantum")->capture_default_str();
  prop->add_option("--omega", prop_omega, "frequency (harmonic)")
      ->capture_default_str();
  prop->add_option("--x1", prop_x1, "initial position")->capture_default_str();
  prop->add_option("--x2", prop_x2, "half-range of the x2 grid")
      ->capture_default_str();
  prop->add_option("--t", prop_t, "elapsed time")->capture_default_str();
  prop->add_option("--n", prop_n, "grid points")->capture_default_str();
  add_common(prop, prop_common);

  // ---- ou -------------------------------------------------------------------
  auto* oucmd = app.add_subcommand(
      "ou", "transition density f1(y2, dtau | y1) on a symmetric y2 grid");
  CommonOpts ou_common;
  OUFlagSet ou_flags;
  double ou_y1 = 1.0, ou_y2 = 3.0, ou_tau1 = 0.0, ou_tau2 = 1.0;
  std::size_t ou_n = 101;
  std::string ou_conv = "normalized";
  add_ou_flags(oucmd, ou_flags);
  oucmd->add_option("--y1", ou_y1, "conditioning value")->capture_default_str();
  oucmd->add_option("--y2", ou_y2, "half-range of the y2 grid")
      ->capture_default_str();
  oucmd->add_option("--tau1", ou_tau1, "earlier time")->capture_default_str();
  oucmd->add_option("--tau2", ou_tau2, "later time")->capture_default_str();
  oucmd->add_option("--n", ou_n, "grid points")->capture_default_str();
  oucmd->add_option("--convention", ou_conv, "prefactor convention")
      ->check(CLI::IsMember({"normalized", "paper"}))
      ->capture_default_str();
  add_common(oucmd, ou_common);

  // ---- extremal --------------------------------------------------------------
  auto* ext = app.add_subcommand(
      "extremal",
      "minimum-cost path between pinned endpoints (omit --y1 to pin at "
      "equilibrium in the infinite past)");
  CommonOpts ext_common;
  OUFlagSet ext_flags;
  std::optional<double> ext_y1;
  double ext_y2 = 1.0, ext_tau1 = 0.0, ext_tau2 = 1.0;
  std::size_t ext_n = 1001;
  add_ou_flags(ext, ext_flags);
  ext->add_option("--y1", ext_y1, "initial value (omit for equilibrium)");
  ext->add_option("--y2", ext_y2, "final value")->capture_default_str();
  ext->add_option("--tau1", ext_tau1, "initial time")->capture_default_str();
  ext->add_option("--tau2", ext_tau2, "final time")->capture_default_str();
  ext->add_option("--n", ext_n, "grid points")->capture_default_str();
  add_common(ext, ext_common);

  // ---- langevin --------------------------------------------------------------
  auto* lang = app.add_subcommand(
      "langevin", "sample the stochastic relaxation and emit statistics");
  CommonOpts lang_common;
  OUFlagSet lang_flags;
  double lang_y0 = 1.0, lang_tau2 = 5.0, lang_dt = 0.01;
  std::size_t lang_paths = 1000, lang_rows = 33, lang_hist = 0;
  std::uint64_t lang_seed = 42;
  add_ou_flags(lang, lang_flags);
  lang->add_option("--y1", lang_y0, "initial value")->capture_default_str();
  lang->add_option("--tau2", lang_tau2, "horizon")->capture_default_str();
  lang->add_option("--dt", lang_dt, "time step")->capture_default_str();
  lang->add_option("--paths", lang_paths, "ensemble size")
      ->capture_default_str();
  lang->add_option("--n", lang_rows, "recorded rows")->capture_default_str();
  lang->add_option("--seed", lang_seed, "master seed")->capture_default_str();
  lang->add_option("--histogram", lang_hist,
                   "emit a terminal-time histogram with this many bins "
                   "instead of the statistics table");
  add_common(lang, lang_common);

  // ---- slice ----------------------------------------------------------------
  auto* slice = app.add_subcommand(
      "slice", "time-sliced composition sweep against the closed form");
  CommonOpts slice_common;
  OUFlagSet slice_flags;
  double slice_y1 = 1.0, slice_y2 = 0.5, slice_tau1 = 0.0, slice_tau2 = 1.0;
  std::size_t slice_nmax = 1024;
  add_ou_flags(slice, slice_flags);
  slice->add_option("--y1", slice_y1, "initial value")->capture_default_str();
  slice->add_option("--y2", slice_y2, "final value")->capture_default_str();
  slice->add_option("--tau1", slice_tau1, "initial time")->capture_default_str();
  slice->add_option("--tau2", slice_tau2, "final time")->capture_default_str();
  slice->add_option("--n", slice_nmax, "largest slice count (powers of two)")
      ->capture_default_str();
  add_common(slice, slice_common);

  // ---- check ----------------------------------------------------------------
  auto* check = app.add_subcommand("check", "run a named identity check");
  CommonOpts check_common;
  std::string check_name;
  std::size_t check_points = 1000, check_n = 0;
  std::uint64_t check_seed = 20120601;
  double check_tol = 0.0;
  check->add_option("identity", check_name,
                    "free | harmonic | ground | chapman | variational | "
                    "slicing | continuity")
      ->required();
  check->add_option("--points", check_points, "scan size")
      ->capture_default_str();
  check->add_option("--n", check_n, "slicing: single slice count");
  check->add_option("--seed", check_seed, "scan seed")->capture_default_str();
  check->add_option("--tol", check_tol, "tolerance override");
  add_common(check, check_common);

  // ---- dictionary -------------------------------------------------------------
  auto* dic = app.add_subcommand(
      "dictionary", "parameter-map round trip and Wick rotation demo");
  CommonOpts dic_common;
  double dic_m = 1.0, dic_hbar = 1.0, dic_omega = 1.0, dic_kB = 1.0,
         dic_t = 1.0;
  dic->add_option("--m", dic_m, "mass")->capture_default_str();
  dic->add_option("--hbar", dic_hbar, "action quantum")->capture_default_str();
  dic->add_option("--omega", dic_omega, "frequency")->capture_default_str();
  dic->add_option("--kB", dic_kB, "Boltzmann constant")->capture_default_str();
  dic->add_option("--t", dic_t, "time to rotate")->capture_default_str();
  add_common(dic, dic_common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (prop->parsed()) {
      Output out(prop_common.out);
      const auto x2s = wb::linspace(-prop_x2, prop_x2, prop_n);
      wb::kernels::ComplexGaussianKernel K;
      if (prop_kind == "free")
        K = wb::kernels::kernel_free(prop_m, prop_hbar, 0.0, prop_t);
      else
        K = wb::kernels::kernel_harmonic(prop_m, prop_hbar, prop_omega, 0.0,
                                         prop_t);
      Table t;
      t.columns = {"x2", "t", "re_K", "im_K", "abs_K"};
      for (const double x2 : x2s) {
        const auto v = wb::kernels::evaluate(K, x2, prop_x1);
        t.rows.push_back({x2, prop_t, v.real(), v.imag(), std::abs(v)});
      }
      write_table(t, out.stream(), prop_common.format, prop_common.precision);
      return 0;
    }

    if (oucmd->parsed()) {
      Output out(ou_common.out);
      const auto p = ou_flags.params();
      const double dtau = ou_tau2 - ou_tau1;
      const auto conv = ou_conv == "paper" ? wb::kernels::Convention::paper
                                           : wb::kernels::Convention::normalized;
      Table t;
      t.columns = {"y2", "delta_tau", "f1"};
      for (const double y2 : wb::linspace(-ou_y2, ou_y2, ou_n))
        t.rows.push_back(
            {y2, dtau, wb::ou::conditional_density(p, y2, dtau, ou_y1, conv)});
      write_table(t, out.stream(), ou_common.format, ou_common.precision);
      return 0;
    }

    if (ext->parsed()) {
      Output out(ext_common.out);
      const auto p = ext_flags.params();
      wb::ou::PathGrid analytic, numeric;
      if (ext_y1) {
        analytic = wb::ou::extremal_path(p, ext_tau1, *ext_y1, ext_tau2,
                                         ext_y2, ext_n,
                                         wb::ou::ExtremalMethod::analytic);
        numeric = wb::ou::extremal_path(p, ext_tau1, *ext_y1, ext_tau2, ext_y2,
                                        ext_n, wb::ou::ExtremalMethod::numeric);
      } else {
        // equilibrium in the infinite past; the numeric column re-solves the
        // boundary-value problem pinned at the analytic left edge
        analytic = wb::ou::extremal_from_equilibrium(p, ext_tau1, ext_tau2,
                                                     ext_y2, ext_n);
        numeric = wb::ou::extremal_path(p, ext_tau1, analytic.y.front(),
                                        ext_tau2, ext_y2, ext_n,
                                        wb::ou::ExtremalMethod::numeric);
      }
      Table t;
      t.columns = {"tau", "y_analytic", "y_numeric", "abs_err"};
      for (std::size_t i = 0; i < analytic.tau.size(); ++i)
        t.rows.push_back({analytic.tau[i], analytic.y[i], numeric.y[i],
                          std::abs(analytic.y[i] - numeric.y[i])});
      write_table(t, out.stream(), ext_common.format, ext_common.precision);
      return 0;
    }

    if (lang->parsed()) {
      Output out(lang_common.out);
      const auto p = lang_flags.params();
      const std::size_t n_steps = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::llround(lang_tau2 / lang_dt)));
      wb::ou::SampleOptions opts;
      opts.record_stride =
          lang_hist ? n_steps
                    : std::max<std::size_t>(
                          1, n_steps / std::max<std::size_t>(1, lang_rows - 1));
      const auto ens = wb::ou::sample_paths(p, lang_y0, lang_tau2, lang_dt,
                                            lang_paths, lang_seed, opts);
      if (lang_hist) {
        // terminal-time histogram over +/- 4 stationary deviations
        const double sigma = std::sqrt(p.kB / p.s);
        const auto bins = wb::ou::histogram(ens.values.back(), lang_hist,
                                            -4.0 * sigma, 4.0 * sigma);
        if (lang_common.format == "csv") {
          wb::ou::write_histogram_csv(bins, out.stream(),
                                      lang_common.precision);
        } else {
          Table t;
          t.columns = {"bin_lo", "bin_hi", "count", "density"};
          for (const auto& b : bins)
            t.rows.push_back({b.lo, b.hi, static_cast<double>(b.count),
                              b.density});
          write_table(t, out.stream(), lang_common.format,
                      lang_common.precision);
        }
        return 0;
      }
      if (lang_common.format == "csv") {
        wb::ou::write_statistics_csv(ens, out.stream(), lang_common.precision);
      } else {
        Table t;
        t.columns = {"tau", "mean", "var", "p05", "p50", "p95"};
        for (const auto& row : ens.statistics())
          t.rows.push_back(
              {row.tau, row.mean, row.var, row.p05, row.p50, row.p95});
        write_table(t, out.stream(), lang_common.format,
                    lang_common.precision);
      }
      return 0;
    }

    if (slice->parsed()) {
      Output out(slice_common.out);
      const auto p = slice_flags.params();
      const double exact = wb::ou::conditional_density(
          p, slice_y2, slice_tau2 - slice_tau1, slice_y1);
      Table t;
      t.columns = {"n_slices", "f1_euler", "f1_exact_kernel", "f1_closed_form",
                   "rel_err_euler", "rel_err_exact"};
      for (std::size_t n = 1; n <= slice_nmax; n *= 2) {
        const double euler = wb::ou::sliced_path_density(
            p, slice_y1, slice_tau1, slice_y2, slice_tau2, n,
            wb::ou::SliceKernel::euler);
        const double via_exact = wb::ou::sliced_path_density(
            p, slice_y1, slice_tau1, slice_y2, slice_tau2, n,
            wb::ou::SliceKernel::exact);
        t.rows.push_back({static_cast<double>(n), euler, via_exact, exact,
                          std::abs(euler - exact) / exact,
                          std::abs(via_exact - exact) / exact});
      }
      write_table(t, out.stream(), slice_common.format,
                  slice_common.precision);
      return 0;
    }

    if (check->parsed()) {
      Output out(check_common.out);
      wb::checks::CheckOptions opts;
      opts.points = check_points;
      opts.seed = check_seed;
      opts.tolerance = check_tol;
      opts.n_slices = check_n;
      wb::checks::CheckReport report;
      try {
        report = wb::checks::run_check(check_name, opts);
      } catch (const wb::UnknownIdentity& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
      }
      out.stream() << report.to_json_text(check_common.precision) << '\n';
      return report.pass ? 0 : kExitCheckFailed;
    }

    if (dic->parsed()) {
      Output out(dic_common.out);
      const auto q = wb::quantum::PhysParams::make(dic_m, dic_hbar, dic_omega);
      const auto p = wb::dict::map_params(q, dic_kB);
      const auto back = wb::dict::map_params_inverse(p, dic_hbar);
      const double rt_err =
          std::max(std::abs(back.m - q.m) / q.m,
                   std::abs(back.omega - q.omega) / q.omega);
      const auto tau = wb::dict::wick(dic_t);
      const auto t_back = wb::dict::wick_inverse(tau);
      nlohmann::json j;
      const auto num = [&](double v) {
        return nlohmann::json::parse(
            wb::format_double(v, dic_common.precision));
      };
      j["input"] = {{"m", num(q.m)},
                    {"hbar", num(q.hbar)},
                    {"omega", num(q.omega)},
                    {"kB", num(dic_kB)}};
      j["mapped"] = {{"gamma", num(p.gamma)}, {"s", num(p.s)}, {"R", num(p.R)}};
      j["roundtrip"] = {{"m", num(back.m)},
                        {"omega", num(back.omega)},
                        {"max_rel_err", num(rt_err)}};
      j["wick"] = {{"t", num(dic_t)},
                   {"tau_re", num(tau.value.real())},
                   {"tau_im", num(tau.value.imag())},
                   {"t_back", num(t_back.real())}};
      out.stream() << j.dump() << '\n';
      return 0;
    }
  } catch (const wb::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
