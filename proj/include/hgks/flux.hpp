#pragma once

#include <array>

#include "hgks/common.hpp"
#include "hgks/gas.hpp"
#include "hgks/kernels.hpp"
#include "hgks/kinetic.hpp"

namespace hgks {

/// tau = mu / p. Throws InvalidStateError for p <= 0.
double collision_time(double p, double mu);

struct InterfaceState {
  ConsState<double> Q0;
  Maxwellian g0;
};

/// Q0 = integral over u > 0 of psi g_left plus integral over u < 0 of psi g_right,
/// in the face frame (first momentum component normal to the face).
InterfaceState equilibrium_interface_state(const ConsState<double>& left, const ConsState<double>& right,
                                           const GasModel& gm);

/// Reconstructed data at one Gauss point, in the face frame. Derivative
/// arrays are ordered (normal, t1, t2).
struct InterfaceInput {
  ConsState<double> left;
  ConsState<double> right;
  std::array<Vec5<double>, 3> dleft{};
  std::array<Vec5<double>, 3> dright{};
  Vec5<double> dequilibrium{};  // normal derivative of the equilibrium state
  EquilibriumSlope eq_slope = EquilibriumSlope::central;
};

/// Integrals over [0, delta] of the six time kernels of the interface
/// distribution: 1 - e, (t + tau) e - tau, t - tau + tau e, e, -(t + tau) e,
/// -tau e, with e = exp(-t / tau).
std::array<double, 6> time_kernel_integrals(double tau, double delta);

/// Integral over [0, delta] of the face flux with collision time tau.
Vec5<double> time_integrated_flux(const InterfaceInput& in, const GasModel& gm, double tau, double delta);

struct TimeFlux {
  Vec5<double> F{};
  Vec5<double> dF{};
};

/// Linear-in-time flux matching the integrals over [0, dt/2] and [0, dt].
TimeFlux linearize_flux(const Vec5<double>& i_half, const Vec5<double>& i_full, double dt);

/// Full pipeline for one Gauss point: tau from the interface state and the
/// gas viscosity law, both windows, linearisation.
TimeFlux interface_flux(const InterfaceInput& in, const GasModel& gm, double dt);

/// Collision time used by interface_flux for the given input.
double interface_collision_time(const InterfaceInput& in, const GasModel& gm);

FluxParams<double> flux_params(const GasModel& gm, double dt, EquilibriumSlope eq);

}  // namespace hgks
