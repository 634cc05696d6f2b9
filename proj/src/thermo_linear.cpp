#include "wickbridge/thermo_linear.hpp"

#include <cmath>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "wickbridge/common.hpp"
#include "wickbridge/error.hpp"

namespace wickbridge::thermo {

namespace {

void require_symmetric(const Matrix& M, const char* name, bool reciprocity) {
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  const double asym = (M - M.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * scale) {
    const std::string msg =
        std::string(name) + ": matrix is not symmetric within 1e-12";
    if (reciprocity) throw ReciprocityViolation(msg);
    throw InvalidParameter(msg);
  }
}

Eigen::SelfAdjointEigenSolver<Matrix> spd_eigen(const Matrix& M,
                                                const char* name) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(M);
  if (es.info() != Eigen::Success)
    throw InvalidParameter(std::string(name) + ": eigendecomposition failed");
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw NotPositiveDefinite(std::string(name) +
                              ": matrix is not positive definite");
  return es;
}

}  // namespace

OnsagerSystem OnsagerSystem::make(Matrix L, Matrix s, double kB, double S0) {
  if (L.rows() == 0 || L.rows() != L.cols())
    throw InvalidParameter("OnsagerSystem: L must be square and nonempty");
  if (s.rows() != L.rows() || s.cols() != L.cols())
    throw InvalidParameter("OnsagerSystem: s must match the dimension of L");
  if (!(kB > 0.0)) throw InvalidParameter("OnsagerSystem: kB must be positive");
  require_symmetric(L, "OnsagerSystem L", /*reciprocity=*/true);
  require_symmetric(s, "OnsagerSystem s", /*reciprocity=*/false);

  auto es_L = spd_eigen(L, "OnsagerSystem L");
  auto es_s = spd_eigen(s, "OnsagerSystem s");

  OnsagerSystem sys;
  sys.L_ = std::move(L);
  sys.s_ = std::move(s);
  sys.kB_ = kB;
  sys.S0_ = S0;
  sys.R_ = es_L.eigenvectors() *
           es_L.eigenvalues().cwiseInverse().asDiagonal() *
           es_L.eigenvectors().transpose();

  const int n = sys.dim();
  const double inverse_residual =
      (sys.R_ * sys.L_ - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  if (inverse_residual > 1e-10)
    throw InvalidParameter("OnsagerSystem: R*L deviates from identity; "
                           "conductance too ill-conditioned");

  sys.s_sqrt_ = es_s.eigenvectors() *
                es_s.eigenvalues().cwiseSqrt().asDiagonal() *
                es_s.eigenvectors().transpose();
  sys.s_sqrt_inv_ = es_s.eigenvectors() *
                    es_s.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                    es_s.eigenvectors().transpose();
  auto es_b = spd_eigen(Matrix(sys.s_sqrt_ * sys.L_ * sys.s_sqrt_),
                        "OnsagerSystem s^1/2 L s^1/2");
  sys.modes_ = es_b.eigenvectors();
  sys.rates_ = es_b.eigenvalues();
  return sys;
}

OnsagerSystem OnsagerSystem::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("OnsagerSystem json: ") + e.what());
  }
  try {
    const int n = j.at("N").get<int>();
    const auto read_matrix = [&](const char* key) {
      const auto& rows = j.at(key);
      if (static_cast<int>(rows.size()) != n)
        throw InvalidParameter(std::string("OnsagerSystem json: ") + key +
                               " has wrong row count");
      Matrix M(n, n);
      for (int i = 0; i < n; ++i) {
        const auto& row = rows.at(i);
        if (static_cast<int>(row.size()) != n)
          throw InvalidParameter(std::string("OnsagerSystem json: ") + key +
                                 " has wrong column count");
        for (int k = 0; k < n; ++k) M(i, k) = row.at(k).get<double>();
      }
      return M;
    };
    Matrix L = read_matrix("L");
    Matrix s = read_matrix("s");
    const double kB = j.at("kB").get<double>();
    const double S0 = j.value("S0", 0.0);
    return make(std::move(L), std::move(s), kB, S0);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("OnsagerSystem json: ") + e.what());
  }
}

OnsagerSystem OnsagerSystem::load(std::istream& is) {
  std::ostringstream buf;
  buf << is.rdbuf();
  return from_json_text(buf.str());
}

std::string OnsagerSystem::to_json_text(int precision) const {
  nlohmann::json j;
  const auto num = [&](double v) {
    return nlohmann::json::parse(format_double(v, precision));
  };
  const int n = dim();
  j["N"] = n;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      j["L"][i][k] = num(L_(i, k));
      j["s"][i][k] = num(s_(i, k));
    }
  j["kB"] = num(kB_);
  j["S0"] = num(S0_);
  return j.dump();
}

double entropy(const OnsagerSystem& sys, const ThermoState& state) {
  return sys.equilibrium_entropy() -
         0.5 * state.y.dot(sys.entropy_hessian() * state.y);
}

Vector forces(const OnsagerSystem& sys, const ThermoState& state) {
  return -(sys.entropy_hessian() * state.y);
}

Vector fluxes(const OnsagerSystem& sys, const Vector& Y) {
  return sys.conductance() * Y;
}

ProductionReport production_report(const OnsagerSystem& sys,
                                   const ThermoState& state) {
  const Vector Y = forces(sys, state);
  const Vector ydot = fluxes(sys, Y);
  ProductionReport r;
  r.entropy_rate = Y.dot(ydot);
  r.dissipation_flux = 0.5 * ydot.dot(sys.resistance() * ydot);
  r.dissipation_force = 0.5 * Y.dot(sys.conductance() * Y);
  return r;
}

ThermoState relax(const OnsagerSystem& sys, const ThermoState& state,
                  double tau) {
  if (!(tau >= 0.0)) throw InvalidParameter("relax: tau must be >= 0");
  // exp(-L s tau) = s^{-1/2} W exp(-mu tau) W' s^{1/2}
  Vector z = sys.decay_modes().transpose() * (sys.sqrt_hessian() * state.y);
  for (int i = 0; i < z.size(); ++i)
    z(i) *= std::exp(-sys.decay_rates()(i) * tau);
  return ThermoState{sys.inv_sqrt_hessian() * (sys.decay_modes() * z)};
}

double stationary_log_density(const OnsagerSystem& sys,
                              const ThermoState& state) {
  const int n = sys.dim();
  Eigen::SelfAdjointEigenSolver<Matrix> es(sys.entropy_hessian());
  const double log_det_s = es.eigenvalues().array().log().sum();
  const double logZ =
      0.5 * n * std::log(kTwoPi * sys.boltzmann()) - 0.5 * log_det_s;
  const double S = entropy(sys, state);
  return (S - sys.equilibrium_entropy()) / sys.boltzmann() - logZ;
}

double stationary_density(const OnsagerSystem& sys, const ThermoState& state) {
  return std::exp(stationary_log_density(sys, state));
}

}  // namespace wickbridge::thermo
