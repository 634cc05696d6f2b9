#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>

namespace wickbridge::thermo {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// N-dimensional linear-response data: symmetric positive-definite conductance
// L (reciprocity is enforced, not repaired), its inverse R, the entropy
// Hessian s, Boltzmann constant kB, and the equilibrium entropy S0. The
// entropy near equilibrium is S(y) = S0 - y' s y / 2 and fluxes follow
// dy/dtau = L * Y with forces Y = -s y.
class OnsagerSystem {
 public:
  static OnsagerSystem make(Matrix L, Matrix s, double kB, double S0 = 0.0);

  // {"N": int, "L": [[..]], "s": [[..]], "kB": float, "S0": float}
  static OnsagerSystem from_json_text(const std::string& text);
  static OnsagerSystem load(std::istream& is);
  std::string to_json_text(int precision = 12) const;

  int dim() const { return static_cast<int>(L_.rows()); }
  const Matrix& conductance() const { return L_; }
  const Matrix& resistance() const { return R_; }
  const Matrix& entropy_hessian() const { return s_; }
  double boltzmann() const { return kB_; }
  double equilibrium_entropy() const { return S0_; }

  // Pieces of the symmetrized relaxation operator exp(-L s tau); decay rates
  // are the eigenvalues of s^{1/2} L s^{1/2}, guaranteed real positive.
  const Matrix& sqrt_hessian() const { return s_sqrt_; }
  const Matrix& inv_sqrt_hessian() const { return s_sqrt_inv_; }
  const Matrix& decay_modes() const { return modes_; }
  const Vector& decay_rates() const { return rates_; }

 private:
  OnsagerSystem() = default;
  Matrix L_, R_, s_;
  Matrix s_sqrt_, s_sqrt_inv_, modes_;
  Vector rates_;
  double kB_ = 1.0;
  double S0_ = 0.0;
};

struct ThermoState {
  Vector y;
};

// S = S0 - y' s y / 2
double entropy(const OnsagerSystem& sys, const ThermoState& state);

// Restoring forces Y = -s y; vanish at equilibrium.
Vector forces(const OnsagerSystem& sys, const ThermoState& state);

// Linear phenomenological law dy/dtau = L Y.
Vector fluxes(const OnsagerSystem& sys, const Vector& Y);

// Entropy production along the phenomenological flow and the two dissipation
// functions. Along the flow Phi = Psi = Sdot/2 exactly.
struct ProductionReport {
  double entropy_rate;       // Sdot = Y' dy/dtau
  double dissipation_flux;   // Phi = (dy/dtau)' R (dy/dtau) / 2
  double dissipation_force;  // Psi = Y' L Y / 2
};
ProductionReport production_report(const OnsagerSystem& sys,
                                   const ThermoState& state);

// y(tau) = exp(-L s tau) y(0), solving R dy/dtau + s y = 0.
ThermoState relax(const OnsagerSystem& sys, const ThermoState& state,
                  double tau);

// Normalized Gaussian stationary density exp((S - S0)/kB) / Z.
double stationary_density(const OnsagerSystem& sys, const ThermoState& state);
double stationary_log_density(const OnsagerSystem& sys,
                              const ThermoState& state);

}  // namespace wickbridge::thermo
