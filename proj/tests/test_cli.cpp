#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef WICKBRIDGE_CLI_PATH
#error "WICKBRIDGE_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream buf;
  buf << is.rdbuf();
  return buf.str();
}

RunResult run_cli(const std::string& args) {
  const std::string out_path =
      std::string("/tmp/wickbridge_cli_test_") + std::to_string(getpid()) +
      ".out";
  const std::string cmd = std::string(WICKBRIDGE_CLI_PATH) + " " + args +
                          " > " + out_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  std::remove(out_path.c_str());
  return r;
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

double field(const std::string& line, std::size_t index) {
  std::istringstream is(line);
  std::string tok;
  for (std::size_t i = 0; i <= index; ++i) std::getline(is, tok, ',');
  return std::stod(tok);
}

}  // namespace

TEST_CASE("propagator table") {
  const auto r = run_cli("propagator --kind free --x2 2 --n 5 --t 1");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == "x2,t,re_K,im_K,abs_K");
  // middle row is x2 = 0: |K| = 1/sqrt(2 pi)
  std::istringstream is(r.out);
  std::string line;
  for (int i = 0; i < 4; ++i) std::getline(is, line);
  CHECK(field(line, 0) == 0.0);
  CHECK(field(line, 4) == doctest::Approx(0.398942).epsilon(1e-6));
}

TEST_CASE("caustic exits with the validation code") {
  const auto r =
      run_cli("propagator --kind harmonic --omega 1 --t 3.141592653589793");
  CHECK(r.exit_code == 2);
}

TEST_CASE("usage errors") {
  CHECK(run_cli("").exit_code == 1);
  CHECK(run_cli("propagator --kind nonsense").exit_code == 1);
  CHECK(run_cli("check nonsense").exit_code == 1);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("ou table and conventions") {
  const auto r = run_cli(
      "ou --y1 1 --tau2 0.6931471805599453 --y2 0.5 --n 3 --gamma 1 --s 1");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == "y2,delta_tau,f1");
  // last row: y2 = 0.5 = conditional mean, density 1/sqrt(2 pi 0.75)
  const auto last = r.out.substr(r.out.rfind("\n0.5,"));
  CHECK(field(last.substr(1), 2) == doctest::Approx(0.460658).epsilon(1e-6));

  const auto normalized = run_cli("ou --n 3 --s 4 --R 4 --kB 1");
  const auto paper =
      run_cli("ou --n 3 --s 4 --R 4 --kB 1 --convention paper");
  std::istringstream a(normalized.out), b(paper.out);
  std::string la, lb;
  std::getline(a, la);
  std::getline(b, lb);
  while (std::getline(a, la) && std::getline(b, lb))
    CHECK(field(lb, 2) == doctest::Approx(2.0 * field(la, 2)).epsilon(1e-12));
}

TEST_CASE("extremal table pins both endpoints") {
  const auto r = run_cli("extremal --y1 0.5 --y2 1 --n 1001 --gamma 1 --s 1");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) == "tau,y_analytic,y_numeric,abs_err");
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  double worst = 0.0;
  while (std::getline(is, line)) worst = std::max(worst, field(line, 3));
  CHECK(worst < 1e-5);

  // omitting --y1 selects the equilibrium pin: pure exponential decay
  const auto eq = run_cli("extremal --tau1 -1 --tau2 0 --y2 2 --n 2");
  std::istringstream eis(eq.out);
  std::getline(eis, line);
  std::getline(eis, line);
  CHECK(field(line, 1) == doctest::Approx(0.735759).epsilon(1e-6));
}

TEST_CASE("langevin statistics are byte-stable under a fixed seed") {
  const std::string args =
      "langevin --paths 400 --tau2 1 --dt 0.01 --seed 7 --n 9";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(first_line(a.out) == "tau,mean,var,p05,p50,p95");
  CHECK(a.out == b.out);

  const auto c = run_cli(
      "langevin --paths 400 --tau2 1 --dt 0.01 --seed 8 --n 9");
  CHECK(c.out != a.out);

  const auto unstable = run_cli("langevin --dt 0.2 --gamma 1");
  CHECK(unstable.exit_code == 2);

  const auto hist = run_cli(
      "langevin --paths 500 --tau2 4 --dt 0.01 --seed 7 --histogram 16");
  CHECK(hist.exit_code == 0);
  CHECK(first_line(hist.out) == "bin_lo,bin_hi,count,density");
}

TEST_CASE("slice sweep converges toward the closed form") {
  const auto r = run_cli("slice --n 64 --y1 1 --y2 0.5");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out) ==
        "n_slices,f1_euler,f1_exact_kernel,f1_closed_form,rel_err_euler,"
        "rel_err_exact");
  std::istringstream is(r.out);
  std::string line, last;
  std::getline(is, line);
  double first_err = -1.0;
  while (std::getline(is, line)) {
    if (first_err < 0) first_err = field(line, 4);
    last = line;
  }
  CHECK(field(last, 0) == 64.0);
  CHECK(field(last, 4) < first_err);
  CHECK(field(last, 5) < 1e-12);
}

TEST_CASE("check reports and exit codes") {
  const auto pass = run_cli("check harmonic --points 150");
  CHECK(pass.exit_code == 0);
  CHECK(first_line(pass.out).find("\"identity\":\"harmonic\"") !=
        std::string::npos);

  // an impossible tolerance forces the failure exit code
  const auto fail = run_cli("check harmonic --points 50 --tol 1e-300");
  CHECK(fail.exit_code == 3);
  CHECK(first_line(fail.out).find("\"pass\":false") != std::string::npos);
}

TEST_CASE("json format and precision flag") {
  const auto r = run_cli("propagator --n 3 --format json --precision 6");
  CHECK(r.exit_code == 0);
  CHECK(first_line(r.out).find("\"columns\":[\"x2\",\"t\",\"re_K\"") !=
        std::string::npos);
  CHECK(r.out.find("0.398942") != std::string::npos);

  const auto d = run_cli("dictionary --m 1 --omega 1 --kB 1");
  CHECK(d.exit_code == 0);
  CHECK(first_line(d.out).find("\"mapped\":{\"R\":2,\"gamma\":1,\"s\":2}") !=
        std::string::npos);
}

TEST_CASE("output file writing") {
  const std::string path = "/tmp/wickbridge_out_test.csv";
  const auto r = run_cli("ou --n 3 --out " + path);
  CHECK(r.exit_code == 0);
  CHECK(r.out.empty());
  const auto text = slurp(path);
  CHECK(first_line(text) == "y2,delta_tau,f1");
  std::remove(path.c_str());
}
