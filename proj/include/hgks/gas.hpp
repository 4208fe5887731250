#pragma once

#include <cmath>

#include "hgks/common.hpp"

namespace hgks {

enum class ViscosityLaw { constant, power };

/// Ideal gas with K internal degrees of freedom and a viscosity law.
///
/// Temperature is measured as T = p / rho (gas constant absorbed into the
/// units), so the Maxwellian parameter is lambda = 1 / (2T).
struct GasModel {
  double gamma = 1.4;
  double K = 2.0;
  double Pr = 1.0;
  ViscosityLaw law = ViscosityLaw::constant;
  double mu_ref = 0.0;    // mu for the constant law, mu_w for the power law
  double T_ref = 1.0;     // T_w for the power law
  double exponent = 0.7;  // power-law exponent

  /// Builds a model whose K is derived from gamma. Throws ConfigError when
  /// the invariants (1 < gamma <= 2, Pr > 0, mu >= 0) do not hold.
  static GasModel from_gamma(double gamma, double Pr, ViscosityLaw law, double mu_ref,
                             double T_ref = 1.0, double exponent = 0.7);

  void validate() const;
};

/// K = (5 - 3 gamma) / (gamma - 1).
double internal_dof(double gamma);

template <class T>
struct PrimState {
  T rho{}, U{}, V{}, W{}, p{};
};

template <class T>
struct ConsState {
  T rho{}, rhoU{}, rhoV{}, rhoW{}, rhoE{};

  Vec5<T> vec() const { return {rho, rhoU, rhoV, rhoW, rhoE}; }
  static ConsState from(const Vec5<T>& q) { return {q[0], q[1], q[2], q[3], q[4]}; }
};

/// Throws InvalidStateError (tagged with `where`) on non-positive density or
/// internal energy.
template <class T>
PrimState<T> cons_to_prim(const ConsState<T>& q, const GasModel& gm, CellIndex where = {});

template <class T>
ConsState<T> prim_to_cons(const PrimState<T>& w, const GasModel& gm);

double viscosity(double T, const GasModel& gm);

inline double temperature(double rho, double p) { return p / rho; }
inline double sound_speed(double rho, double p, double gamma) { return std::sqrt(gamma * p / rho); }

}  // namespace hgks
