#pragma once

#include <array>

#include "hgks/common.hpp"
#include "hgks/gas.hpp"

namespace hgks {

/// Equilibrium distribution parameters. lambda = 1 / (2T).
struct Maxwellian {
  double rho = 1;
  double U = 0;
  double V = 0;
  double W = 0;
  double lambda = 1;
  double K = 2;
};

/// Velocity moments of a Maxwellian, normalised by density.
struct MomentTable {
  static constexpr int kOrder = 6;
  std::array<double, kOrder + 1> full{};  // <u^n>
  std::array<double, kOrder + 1> pos{};   // <u^n> over u > 0
  std::array<double, kOrder + 1> neg{};   // <u^n> over u < 0
  std::array<double, kOrder + 1> v{};     // <v^m>
  std::array<double, kOrder + 1> w{};     // <w^l>
  double xi2 = 0;                         // <xi^2>
  double xi4 = 0;                         // <xi^4>
};

enum class SlopeSide { left, right, equilibrium };

/// Expansion coefficients of the distribution: a[d] multiplies psi for the
/// spatial direction d (normal, t1, t2), A for time.
struct MicroSlopes {
  std::array<Vec5<double>, 3> a{};
  Vec5<double> A{};
  SlopeSide side = SlopeSide::equilibrium;
};

Maxwellian maxwellian_of(const ConsState<double>& q, const GasModel& gm, CellIndex where = {});

/// rho <psi> of the Maxwellian, i.e. the conservative state it represents.
ConsState<double> take_moments(const Maxwellian& mx);

/// Throws InvalidStateError for lambda <= 0 and std::invalid_argument for
/// max_order outside [0, 6]. Entries above max_order are left zero.
MomentTable moments(const Maxwellian& mx, int max_order = MomentTable::kOrder);

/// Solves <(a . psi) psi g> = dQ for a. dQ is the gradient of the
/// conservative variables along one direction.
Vec5<double> slopes_from_gradient(const Maxwellian& mx, const Vec5<double>& dQ);

/// rho <(a . psi) psi>: the gradient that the slope a represents.
Vec5<double> project_slope(const Maxwellian& mx, const Vec5<double>& a);

/// A such that <(a_n u + a_t1 v + a_t2 w + A) psi g> = 0.
Vec5<double> temporal_slope(const Maxwellian& mx, const Vec5<double>& an, const Vec5<double>& at1,
                            const Vec5<double>& at2);

/// <(a_n u + a_t1 v + a_t2 w + A) psi>, normalised by density.
Vec5<double> compatibility_residual(const Maxwellian& mx, const MicroSlopes& s);

MicroSlopes micro_slopes(const Maxwellian& mx, const std::array<Vec5<double>, 3>& gradients,
                         SlopeSide side);

}  // namespace hgks
