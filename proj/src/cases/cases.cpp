#include "hgks/cases.hpp"

#include <cmath>
#include <random>

#include "hgks/common.hpp"

namespace hgks {

Mesh TgvSpec::mesh() const { return Mesh::periodic_box(n, -M_PI * L, 2 * M_PI * L); }

GasModel TgvSpec::gas() const { return GasModel::from_gamma(gamma, Pr, ViscosityLaw::constant, mu()); }

void TgvSpec::validate() const {
  if (!(L > 0 && V0 > 0 && rho0 > 0 && Ma > 0 && Re > 0 && gamma > 1 && Pr > 0))
    throw ConfigError("Taylor-Green parameters must be positive (gamma > 1)");
  if (n < 5) throw ConfigError("Taylor-Green resolution must be at least 5");
}

PrimState<double> tgv_point(const TgvSpec& s, double x, double y, double z) {
  const double X = x / s.L, Y = y / s.L, Z = z / s.L;
  PrimState<double> w;
  w.U = s.V0 * std::sin(X) * std::cos(Y) * std::cos(Z);
  w.V = -s.V0 * std::cos(X) * std::sin(Y) * std::cos(Z);
  w.W = 0;
  w.p = s.p0() + s.rho0 * s.V0 * s.V0 / 16 * (std::cos(2 * X) + std::cos(2 * Y)) * (std::cos(2 * Z) + 2);
  // Uniform temperature T0 = p0 / rho0.
  w.rho = w.p * s.rho0 / s.p0();
  return w;
}

template <class T>
void init_tgv(const TgvSpec& spec, const Mesh& mesh, int i0, Field<T>& q) {
  const GasModel gm = spec.gas();
  const Extent e = q.extent();
  for (int i = 0; i < e.nx; ++i)
    for (int j = 0; j < e.ny; ++j)
      for (int k = 0; k < e.nz; ++k) {
        const auto w = tgv_point(spec, mesh.x_center(i0 + i), mesh.y_center(j), mesh.z_center(k));
        const auto c = prim_to_cons(w, gm).vec();
        q.set(i, j, k, {T(c[0]), T(c[1]), T(c[2]), T(c[3]), T(c[4])});
      }
}

double dean_bulk_reynolds(double re_tau) {
  return std::pow(re_tau * std::pow(2.0, 0.125) / std::sqrt(0.0365), 8.0 / 7.0);
}

double ChannelSpec::bulk_reynolds() const {
  return target == ChannelTarget::friction ? dean_bulk_reynolds(re_tau) : re_bulk;
}

double ChannelSpec::target_mass_flux() const { return rho_bulk() * U_bulk() * 2 * H * M_PI * H; }

Mesh ChannelSpec::mesh() const { return Mesh::channel(nx, ny, nz, H, bg); }

GasModel ChannelSpec::gas() const { return GasModel::from_gamma(gamma, Pr, law, mu_wall(), T_wall(), exponent); }

void ChannelSpec::validate() const {
  if (nx < 5 || ny < 2 || nz < 1) throw ConfigError("channel resolution too small");
  if (!(H > 0 && bg > 0)) throw ConfigError("channel needs H > 0 and b_g > 0");
  if (!(amplitude >= 0 && amplitude < 1)) throw ConfigError("perturbation amplitude must lie in [0, 1)");
  if (!(Ma > 0 && gamma > 1 && Pr > 0)) throw ConfigError("channel gas parameters out of range");
  if (!(re_tau > 0) || !(re_bulk > 0)) throw ConfigError("Reynolds numbers must be positive");
}

template <class T>
void init_channel(const ChannelSpec& spec, const Mesh& mesh, int i0, Field<T>& q) {
  const GasModel gm = spec.gas();
  const Extent e = q.extent();
  const double Ub = spec.U_bulk(), a = spec.amplitude;
  for (int i = 0; i < e.nx; ++i) {
    std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                      static_cast<std::uint32_t>(i0 + i)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> r(-1.0, 1.0);
    for (int j = 0; j < e.ny; ++j) {
      const double U0 = poiseuille(mesh.y_center(j), spec.H, Ub);
      for (int k = 0; k < e.nz; ++k) {
        PrimState<double> w;
        w.rho = spec.rho_bulk();
        // Fixed draw order keeps the stream layout independent of amplitude.
        const double ru = r(rng), rv = r(rng), rw = r(rng);
        w.U = U0 + a * std::abs(U0) * ru;
        w.V = a * Ub * rv;
        w.W = a * Ub * rw;
        w.p = w.rho * spec.T_wall();
        const auto c = prim_to_cons(w, gm).vec();
        q.set(i, j, k, {T(c[0]), T(c[1]), T(c[2]), T(c[3]), T(c[4])});
      }
    }
  }
}

template <class T>
std::vector<double> mass_flux_rows(const Field<T>& q, const Mesh& mesh) {
  const Extent e = q.extent();
  std::vector<double> rows(2 * static_cast<std::size_t>(e.nx), 0.0);
  for (int i = 0; i < e.nx; ++i) {
    double flux = 0, mass = 0;
    for (int j = 0; j < e.ny; ++j) {
      double fj = 0, mj = 0;
      for (int k = 0; k < e.nz; ++k) {
        fj += q(1, i, j, k);
        mj += q(0, i, j, k);
      }
      flux += fj * mesh.volume(j);
      mass += mj * mesh.volume(j);
    }
    rows[2 * i] = flux;
    rows[2 * i + 1] = mass;
  }
  return rows;
}

template <class T>
void apply_body_force(Field<T>& q, double f, double dt) {
  const Extent e = q.extent();
  const double df = dt * f;
  for (int i = 0; i < e.nx; ++i)
    for (int j = 0; j < e.ny; ++j)
      for (int k = 0; k < e.nz; ++k) {
        const double rho = q(0, i, j, k), mx = q(1, i, j, k);
        q(1, i, j, k) = T(mx + rho * df);
        q(4, i, j, k) = T(q(4, i, j, k) + df * (mx + 0.5 * rho * df));
      }
}

ForcingController::ForcingController(double target, double memory) : target_(target), memory_(memory) {
  if (!(memory >= 0 && memory < 1)) throw ConfigError("forcing memory gain must lie in [0, 1)");
}

void ForcingController::prime(double mdot, double force) {
  mdot_ = mdot;
  f_ = force;
}

double ForcingController::update(double mdot_solver, double mass_per_length, double dt) {
  const double c = dt * mass_per_length;
  const double pre = mdot_solver + c * f_;
  const double err = target_ - mdot_;
  f_ += ((target_ - pre) + memory_ * err) / c;
  mdot_ = mdot_solver + c * f_;
  return f_;
}

template void init_tgv<float>(const TgvSpec&, const Mesh&, int, Field<float>&);
template void init_tgv<double>(const TgvSpec&, const Mesh&, int, Field<double>&);
template void init_channel<float>(const ChannelSpec&, const Mesh&, int, Field<float>&);
template void init_channel<double>(const ChannelSpec&, const Mesh&, int, Field<double>&);
template std::vector<double> mass_flux_rows<float>(const Field<float>&, const Mesh&);
template std::vector<double> mass_flux_rows<double>(const Field<double>&, const Mesh&);
template void apply_body_force<float>(Field<float>&, double, double);
template void apply_body_force<double>(Field<double>&, double, double);

}  // namespace hgks
