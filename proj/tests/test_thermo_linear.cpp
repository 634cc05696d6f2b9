#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support/oracles.hpp"
#include "wickbridge/common.hpp"
#include "wickbridge/error.hpp"
#include "wickbridge/thermo_linear.hpp"

using namespace wickbridge;
using namespace wickbridge::thermo;

namespace {

Matrix random_spd(std::uint64_t seed, std::uint64_t i, std::uint64_t tag,
                  int n) {
  // random directions, eigenvalues kept in [0.5, 2] for good conditioning
  Matrix A(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      A(r, c) = uniform_in(seed, i, tag + 16 * r + c, -1.0, 1.0);
  Eigen::HouseholderQR<Matrix> qr(A);
  Matrix Q = qr.householderQ();
  Vector eig(n);
  for (int r = 0; r < n; ++r)
    eig(r) = uniform_in(seed, i, tag + 200 + r, 0.5, 2.0);
  return Q * eig.asDiagonal() * Q.transpose();
}

Vector random_state(std::uint64_t seed, std::uint64_t i, std::uint64_t tag,
                    int n) {
  Vector y(n);
  for (int r = 0; r < n; ++r)
    y(r) = uniform_in(seed, i, tag + r, -1.0, 1.0);
  return y;
}

OnsagerSystem diag_system() {
  Matrix L = Matrix::Zero(2, 2);
  L(0, 0) = 1.0;
  L(1, 1) = 2.0;
  return OnsagerSystem::make(L, Matrix::Identity(2, 2), 1.0);
}

}  // namespace

TEST_CASE("entropy expansion") {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 2.0;
  s(1, 1) = 3.0;
  const auto sys = OnsagerSystem::make(Matrix::Identity(2, 2), s, 1.0, 0.0);

  CHECK(entropy(sys, {Vector::Zero(2)}) == 0.0);
  Vector y(2);
  y << 1.0, 1.0;
  CHECK(entropy(sys, {y}) == doctest::Approx(-2.5).epsilon(1e-14));

  for (std::uint64_t i = 0; i < 20; ++i) {
    const Vector yr = random_state(3, i, 0, 2);
    if (yr.norm() > 0) CHECK(entropy(sys, {yr}) < sys.equilibrium_entropy());
  }
}

TEST_CASE("forces are the entropy gradient") {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 2.0;
  s(1, 1) = 3.0;
  const auto sys = OnsagerSystem::make(Matrix::Identity(2, 2), s, 1.0);

  CHECK(forces(sys, {Vector::Zero(2)}).norm() == 0.0);
  Vector y(2);
  y << 1.0, 1.0;
  const Vector Y = forces(sys, {y});
  CHECK(Y(0) == doctest::Approx(-2.0));
  CHECK(Y(1) == doctest::Approx(-3.0));

  // central finite differences of the entropy
  const double h = 1e-5;
  for (int k = 0; k < 2; ++k) {
    Vector yp = y, ym = y;
    yp(k) += h;
    ym(k) -= h;
    const double fd = (entropy(sys, {yp}) - entropy(sys, {ym})) / (2.0 * h);
    CHECK(std::abs(fd - Y(k)) < 1e-8);
  }
}

TEST_CASE("fluxes and the inverse relation") {
  const auto sys = diag_system();
  CHECK(fluxes(sys, Vector::Zero(2)).norm() == 0.0);
  Vector Y(2);
  Y << 1.0, 1.0;
  const Vector ydot = fluxes(sys, Y);
  CHECK(ydot(0) == doctest::Approx(1.0));
  CHECK(ydot(1) == doctest::Approx(2.0));

  for (std::uint64_t i = 0; i < 20; ++i) {
    const int n = 1 + static_cast<int>(i % 4);
    const auto L = random_spd(5, i, 0, n);
    const auto s = random_spd(5, i, 300, n);
    const auto rsys = OnsagerSystem::make(L, s, 1.0);
    const Vector Yr = random_state(5, i, 600, n);
    const Vector round = rsys.resistance() * fluxes(rsys, Yr);
    CHECK((round - Yr).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("reciprocity is enforced, not repaired") {
  Matrix L(2, 2);
  L << 1.0, 0.2, 0.3, 1.0;  // asymmetric
  CHECK_THROWS_AS(OnsagerSystem::make(L, Matrix::Identity(2, 2), 1.0),
                  ReciprocityViolation);

  Matrix Lneg(2, 2);
  Lneg << 1.0, 2.0, 2.0, 1.0;  // symmetric but indefinite
  CHECK_THROWS_AS(OnsagerSystem::make(Lneg, Matrix::Identity(2, 2), 1.0),
                  NotPositiveDefinite);
}

TEST_CASE("entropy production and the two dissipation functions") {
  const auto sys = diag_system();
  Vector y(2);
  y << 1.0, 1.0;
  const auto rep = production_report(sys, {y});
  CHECK(rep.entropy_rate == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(rep.dissipation_flux == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(rep.dissipation_force == doctest::Approx(1.5).epsilon(1e-14));

  const auto zero = production_report(sys, {Vector::Zero(2)});
  CHECK(zero.entropy_rate == 0.0);
  CHECK(zero.dissipation_flux == 0.0);
  CHECK(zero.dissipation_force == 0.0);

  for (std::uint64_t i = 0; i < 40; ++i) {
    const int n = 1 + static_cast<int>(i % 5);
    const auto rsys = OnsagerSystem::make(random_spd(6, i, 0, n),
                                          random_spd(6, i, 300, n), 1.0);
    const Vector yr = random_state(6, i, 600, n);
    const auto r = production_report(rsys, {yr});
    const double scale = std::max(1.0, r.entropy_rate);
    CHECK(std::abs(r.dissipation_flux - r.dissipation_force) < 1e-12 * scale);
    CHECK(std::abs(r.entropy_rate - 2.0 * r.dissipation_flux) <
          1e-12 * scale);
    CHECK(r.entropy_rate >= 0.0);
    if (yr.norm() > 1e-12) CHECK(r.entropy_rate > 0.0);
  }
}

TEST_CASE("relaxation") {
  SUBCASE("scalar decay") {
    Matrix one = Matrix::Identity(1, 1);
    const auto sys = OnsagerSystem::make(one, one, 1.0);
    Vector y0(1);
    y0 << 1.0;
    CHECK(relax(sys, {y0}, 0.0).y(0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(relax(sys, {y0}, 1.0).y(0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(std::abs(relax(sys, {y0}, 60.0).y(0)) < 1e-20);
  }

  SUBCASE("time derivative matches the phenomenological flow") {
    const auto sys = OnsagerSystem::make(random_spd(9, 0, 0, 3),
                                         random_spd(9, 0, 300, 3), 1.0);
    const Vector y0 = random_state(9, 0, 600, 3);
    const double tau = 0.4, h = 1e-5;
    const Vector yp = relax(sys, {y0}, tau + h).y;
    const Vector ym = relax(sys, {y0}, tau - h).y;
    const Vector fd = (yp - ym) / (2.0 * h);
    const Vector yt = relax(sys, {y0}, tau).y;
    const Vector flow = -sys.conductance() * (sys.entropy_hessian() * yt);
    CHECK((fd - flow).cwiseAbs().maxCoeff() < 1e-6);
  }

  SUBCASE("finite-difference error of the flow shrinks at second order") {
    const auto sys = OnsagerSystem::make(random_spd(9, 1, 0, 2),
                                         random_spd(9, 1, 300, 2), 1.0);
    const Vector y0 = random_state(9, 1, 600, 2);
    std::vector<double> hs = {1e-2, 5e-3, 2.5e-3, 1.25e-3};
    std::vector<double> errs;
    for (const double h : hs) {
      const Vector fd =
          (relax(sys, {y0}, 0.3 + h).y - relax(sys, {y0}, 0.3 - h).y) /
          (2.0 * h);
      const Vector yt = relax(sys, {y0}, 0.3).y;
      const Vector flow = -sys.conductance() * (sys.entropy_hessian() * yt);
      errs.push_back((fd - flow).cwiseAbs().maxCoeff());
    }
    CHECK(oracles::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.1));
  }

  SUBCASE("entropy never decreases along the flow") {
    for (std::uint64_t i = 0; i < 10; ++i) {
      const int n = 1 + static_cast<int>(i % 4);
      const auto sys = OnsagerSystem::make(random_spd(10, i, 0, n),
                                           random_spd(10, i, 300, n), 1.0);
      const Vector y0 = random_state(10, i, 600, n);
      double prev = entropy(sys, {y0});
      for (int k = 1; k <= 20; ++k) {
        const double S = entropy(sys, {relax(sys, {y0}, 0.25 * k).y});
        CHECK(S >= prev - 1e-12 * std::abs(prev));
        prev = S;
      }
    }
  }
}

TEST_CASE("stationary Gaussian density") {
  Matrix one = Matrix::Identity(1, 1);
  const auto sys = OnsagerSystem::make(one, one, 1.0);
  Vector zero = Vector::Zero(1);
  CHECK(stationary_density(sys, {zero}) ==
        doctest::Approx(1.0 / std::sqrt(kTwoPi)).epsilon(1e-13));

  // mode at the origin
  Vector y(1);
  y << 0.3;
  CHECK(stationary_density(sys, {y}) < stationary_density(sys, {zero}));

  // normalization and second moment by quadrature
  const auto dens = [&](double v) {
    Vector yv(1);
    yv << v;
    return stationary_density(sys, {yv});
  };
  CHECK(oracles::integrate(dens, -12.0, 12.0, 1e-13) ==
        doctest::Approx(1.0).epsilon(1e-10));
  const auto second = [&](double v) { return v * v * dens(v); };
  CHECK(oracles::integrate(second, -12.0, 12.0, 1e-13) ==
        doctest::Approx(sys.boltzmann()).epsilon(1e-8));

  // nonzero kB scales the covariance: var = kB / s
  const auto sys2 = OnsagerSystem::make(one, 2.0 * one, 0.5);
  const auto dens2 = [&](double v) {
    Vector yv(1);
    yv << v;
    return v * v * stationary_density(sys2, {yv});
  };
  CHECK(oracles::integrate(dens2, -8.0, 8.0, 1e-13) ==
        doctest::Approx(0.25).epsilon(1e-8));

  // two dimensions: covariance = kB s^{-1} by nested quadrature
  Matrix s2 = Matrix::Zero(2, 2);
  s2(0, 0) = 2.0;
  s2(1, 1) = 0.5;
  const auto sys3 = OnsagerSystem::make(Matrix::Identity(2, 2), s2, 1.3);
  const auto moment = [&](int axis) {
    const auto outer = [&](double u) {
      const auto inner = [&](double v) {
        Vector yv(2);
        yv << (axis == 0 ? u : v), (axis == 0 ? v : u);
        return stationary_density(sys3, {yv});
      };
      return u * u * oracles::integrate(inner, -14.0, 14.0, 1e-11);
    };
    // panel split keeps the mass visible to the adaptive rule
    return oracles::integrate(outer, -14.0, -3.0, 1e-10) +
           oracles::integrate(outer, -3.0, 3.0, 1e-10) +
           oracles::integrate(outer, 3.0, 14.0, 1e-10);
  };
  CHECK(moment(0) == doctest::Approx(1.3 / 2.0).epsilon(1e-7));
  CHECK(moment(1) == doctest::Approx(1.3 / 0.5).epsilon(1e-7));
}

TEST_CASE("json load and validation") {
  const std::string good = R"({"N":2,"L":[[1.0,0.1],[0.1,1.0]],)"
                           R"("s":[[2.0,0.0],[0.0,3.0]],"kB":1.5,"S0":0.25})";
  const auto sys = OnsagerSystem::from_json_text(good);
  CHECK(sys.dim() == 2);
  CHECK(sys.boltzmann() == 1.5);
  CHECK(sys.equilibrium_entropy() == 0.25);
  CHECK(sys.conductance()(0, 1) == 0.1);

  // round trip through the serializer
  const auto again = OnsagerSystem::from_json_text(sys.to_json_text(17));
  CHECK((again.conductance() - sys.conductance()).cwiseAbs().maxCoeff() == 0.0);

  const std::string asym = R"({"N":2,"L":[[1.0,0.4],[0.1,1.0]],)"
                           R"("s":[[1.0,0.0],[0.0,1.0]],"kB":1.0})";
  CHECK_THROWS_AS(OnsagerSystem::from_json_text(asym), ReciprocityViolation);

  CHECK_THROWS_AS(OnsagerSystem::from_json_text("{not json"),
                  InvalidParameter);
  const std::string short_row = R"({"N":2,"L":[[1.0,0.0]],)"
                                R"("s":[[1.0,0.0],[0.0,1.0]],"kB":1.0})";
  CHECK_THROWS_AS(OnsagerSystem::from_json_text(short_row), InvalidParameter);
}
