#pragma once

#include <cstdint>
#include <vector>

#include "hgks/boundary.hpp"
#include "hgks/field.hpp"
#include "hgks/gas.hpp"
#include "hgks/mesh.hpp"

namespace hgks {

/// Taylor-Green vortex in the periodic box [-pi L, pi L]^3. Temperature is
/// measured as p / rho, so the uniform initial temperature is T0 = p0 / rho0
/// and c0 = sqrt(gamma T0) = V0 / Ma.
struct TgvSpec {
  double L = 1, V0 = 1, rho0 = 1;
  double Ma = 0.1;
  double Re = 1600;
  double gamma = 1.4;
  double Pr = 1.0;
  int n = 64;

  double c0() const { return V0 / Ma; }
  double p0() const { return rho0 * c0() * c0() / gamma; }
  double mu() const { return rho0 * V0 * L / Re; }
  /// Convective time L / V0.
  double t_c() const { return L / V0; }

  Mesh mesh() const;
  GasModel gas() const;
  void validate() const;
};

/// Primitive state of the initial vortex at a point.
PrimState<double> tgv_point(const TgvSpec& spec, double x, double y, double z);

/// Cell-centre values of the initial vortex on the slab starting at global
/// x-index i0. Evaluated in double and rounded once to T.
template <class T>
void init_tgv(const TgvSpec& spec, const Mesh& mesh, int i0, Field<T>& q);

enum class ChannelTarget { friction, bulk };

/// Plane channel [0, 2 pi H] x [-H, H] x [0, pi H] with isothermal walls.
/// Units: H = 1, bulk density 1, bulk velocity U_b = 1, T = p / rho.
/// Ma is the bulk Mach number U_b / c_w.
struct ChannelSpec {
  int nx = 128, ny = 128, nz = 128;
  double H = 1;
  double bg = 2;
  ChannelTarget target = ChannelTarget::friction;
  double re_tau = 395;  // friction target; also the wall-unit scale of the mesh
  double re_bulk = 3000;  // bulk target, rho_b U_b H / mu_w
  double Ma = 0.1;
  double gamma = 1.4;
  double Pr = 0.7;
  ViscosityLaw law = ViscosityLaw::constant;
  double exponent = 0.7;
  double amplitude = 0.1;
  std::uint64_t seed = 1;

  double U_bulk() const { return 1.0; }
  double rho_bulk() const { return 1.0; }
  double T_wall() const { return U_bulk() * U_bulk() / (gamma * Ma * Ma); }
  /// rho_b U_b H / mu_w. The friction target maps Re_tau through Dean's
  /// skin-friction correlation.
  double bulk_reynolds() const;
  double mu_wall() const { return rho_bulk() * U_bulk() * H / bulk_reynolds(); }
  /// Target streamwise mass flux through a cross-section, rho_b U_b 2H Lz.
  double target_mass_flux() const;

  Mesh mesh() const;
  GasModel gas() const;
  BoundarySpec boundary() const { return {YBoundary::wall, T_wall()}; }
  void validate() const;
};

/// Re_b = rho U_b H / mu giving Re_tau under Dean's correlation
/// C_f = 0.073 (2 Re_b)^(-1/4).
double dean_bulk_reynolds(double re_tau);

/// Poiseuille profile with bulk velocity U_b on [-H, H].
inline double poiseuille(double y, double H, double U_b) { return 1.5 * U_b * (1 - (y / H) * (y / H)); }

/// Perturbed Poiseuille flow at uniform density and wall temperature. Each
/// global x-plane draws its noise from its own stream seeded by (seed, i), so
/// the field does not depend on how the planes are split between workers.
/// U gets amplitude |U_local| r, V and W get amplitude U_b r, r uniform in [-1, 1].
template <class T>
void init_channel(const ChannelSpec& spec, const Mesh& mesh, int i0, Field<T>& q);

/// Per owned x-plane: {sum rho U vol, sum rho vol}. Summed over the planes of
/// the domain and divided by Lx these give the mass flux and mass per length.
template <class T>
std::vector<double> mass_flux_rows(const Field<T>& q, const Mesh& mesh);

/// Uniform streamwise acceleration f over dt added to the owned cells:
/// rho U += dt rho f, rho E += dt rho f (U + dt f / 2). Temperature is unchanged.
template <class T>
void apply_body_force(Field<T>& q, double f, double dt);

/// Keeps the streamwise mass flux at its target. After the solver step
/// (without force) the flux is m_solver; the force of the previous step would
/// have raised it to m_pre = m_solver + c f_n, c = dt M / Lx. The new force
///   f_{n+1} = f_n + [(m_t - m_pre) + memory (m_t - m_n)] / c
/// is then applied, so m_{n+1} = m_t + memory (m_t - m_n) and the error decays
/// as (-memory)^n. At steady state f settles at the wall shear balance.
class ForcingController {
 public:
  explicit ForcingController(double target, double memory = 0.5);

  /// Sets the flux at the start of the run (or restart).
  void prime(double mdot, double force = 0.0);
  /// Returns the force to apply over this step.
  double update(double mdot_solver, double mass_per_length, double dt);

  double force() const { return f_; }
  double target() const { return target_; }
  /// Flux expected after the force is applied.
  double mass_flux() const { return mdot_; }

 private:
  double target_, memory_;
  double f_ = 0, mdot_ = 0;
};

}  // namespace hgks
