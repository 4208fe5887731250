#include "hgks/gas.hpp"

#include <cmath>

namespace hgks {

double internal_dof(double gamma) { return (5.0 - 3.0 * gamma) / (gamma - 1.0); }

GasModel GasModel::from_gamma(double gamma, double Pr, ViscosityLaw law, double mu_ref, double T_ref,
                              double exponent) {
  GasModel gm;
  gm.gamma = gamma;
  gm.K = internal_dof(gamma);
  gm.Pr = Pr;
  gm.law = law;
  gm.mu_ref = mu_ref;
  gm.T_ref = T_ref;
  gm.exponent = exponent;
  gm.validate();
  return gm;
}

void GasModel::validate() const {
  if (!(gamma > 1.0 && gamma <= 2.0)) throw ConfigError("gamma must lie in (1, 2]");
  if (!(K >= 0.0) || std::abs(K - internal_dof(gamma)) > 1e-12) {
    throw ConfigError("internal degrees of freedom inconsistent with gamma");
  }
  if (!(Pr > 0.0)) throw ConfigError("Prandtl number must be positive");
  if (!(mu_ref >= 0.0)) throw ConfigError("viscosity must be non-negative");
  if (law == ViscosityLaw::power && !(T_ref > 0.0)) throw ConfigError("reference temperature must be positive");
}

template <class T>
PrimState<T> cons_to_prim(const ConsState<T>& q, const GasModel& gm, CellIndex where) {
  if (!(q.rho > T(0))) throw InvalidStateError("non-positive density", where);
  const T U = q.rhoU / q.rho;
  const T V = q.rhoV / q.rho;
  const T W = q.rhoW / q.rho;
  const T eint = q.rhoE - T(0.5) * (q.rhoU * U + q.rhoV * V + q.rhoW * W);
  if (!(eint > T(0))) throw InvalidStateError("non-positive internal energy", where);
  return {q.rho, U, V, W, static_cast<T>(gm.gamma - 1.0) * eint};
}

template <class T>
ConsState<T> prim_to_cons(const PrimState<T>& w, const GasModel& gm) {
  const T ke = T(0.5) * w.rho * (w.U * w.U + w.V * w.V + w.W * w.W);
  return {w.rho, w.rho * w.U, w.rho * w.V, w.rho * w.W, w.p / static_cast<T>(gm.gamma - 1.0) + ke};
}

template PrimState<float> cons_to_prim(const ConsState<float>&, const GasModel&, CellIndex);
template PrimState<double> cons_to_prim(const ConsState<double>&, const GasModel&, CellIndex);
template ConsState<float> prim_to_cons(const PrimState<float>&, const GasModel&);
template ConsState<double> prim_to_cons(const PrimState<double>&, const GasModel&);

double viscosity(double T, const GasModel& gm) {
  if (gm.law == ViscosityLaw::power) return gm.mu_ref * std::exp(gm.exponent * std::log(T / gm.T_ref));
  return gm.mu_ref;
}

}  // namespace hgks
