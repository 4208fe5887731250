#include <gtest/gtest.h>

#include <cmath>

#include "hgks/cases.hpp"
#include "hgks/integrator.hpp"
#include "hgks/kernels.hpp"

using namespace hgks;

namespace {

double kinetic_energy_oracle(const Field<double>& q, const Mesh& m, double rho0) {
  double sum = 0;
  for (int i = 0; i < m.nx; ++i)
    for (int j = 0; j < m.ny; ++j)
      for (int k = 0; k < m.nz; ++k) {
        const auto v = q.get(i, j, k);
        sum += 0.5 * (v[1] * v[1] + v[2] * v[2] + v[3] * v[3]) / v[0] * m.volume(j);
      }
  return sum / (rho0 * m.domain_volume());
}

}  // namespace

TEST(Tgv, PointValues) {
  TgvSpec s;
  const auto w = tgv_point(s, M_PI / 2, 0, 0);
  EXPECT_NEAR(w.U, 1.0, 1e-15);
  EXPECT_NEAR(w.V, 0.0, 1e-15);
  EXPECT_EQ(w.W, 0.0);
  EXPECT_NEAR(w.p, 71.428571428571, 1e-9);
  EXPECT_NEAR(s.p0(), 1 / (1.4 * 0.01), 1e-12);
  EXPECT_NEAR(w.rho, 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(s.mu(), 6.25e-4);
}

TEST(Tgv, UniformTemperatureAndZeroW) {
  TgvSpec s;
  s.n = 16;
  const Mesh m = s.mesh();
  Field<double> q({16, 16, 16});
  init_tgv(s, m, 0, q);
  const double T0 = s.p0() / s.rho0;
  const GasModel gm = s.gas();
  for (int i = 0; i < 16; ++i)
    for (int j = 0; j < 16; ++j)
      for (int k = 0; k < 16; ++k) {
        const auto w = cons_to_prim(ConsState<double>::from(q.get(i, j, k)), gm);
        EXPECT_EQ(q(3, i, j, k), 0.0);
        EXPECT_NEAR(w.p / w.rho, T0, 1e-12 * T0);
      }
}

TEST(Tgv, InitialKineticEnergy) {
  // The midpoint rule integrates these trigonometric polynomials exactly once
  // the grid resolves their highest wavenumber.
  for (double Ma : {0.1, 1.0}) {
    TgvSpec s;
    s.n = 32;
    s.Ma = Ma;
    const Mesh m = s.mesh();
    Field<double> q({32, 32, 32});
    init_tgv(s, m, 0, q);
    EXPECT_NEAR(kinetic_energy_oracle(q, m, s.rho0), 0.125, 1e-12) << "Ma=" << Ma;
  }
}

TEST(Tgv, SlabInitialisationMatchesWhole) {
  TgvSpec s;
  s.n = 12;
  const Mesh m = s.mesh();
  Field<double> whole({12, 12, 12}), part({5, 12, 12});
  init_tgv(s, m, 0, whole);
  init_tgv(s, m, 7, part);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 12; ++j)
      for (int k = 0; k < 12; ++k) EXPECT_EQ(part.get(i, j, k), whole.get(i + 7, j, k));
}

TEST(Tgv, SinglePrecisionIsRoundedDouble) {
  TgvSpec s;
  s.n = 8;
  const Mesh m = s.mesh();
  Field<double> q64({8, 8, 8});
  Field<float> q32({8, 8, 8});
  init_tgv(s, m, 0, q64);
  init_tgv(s, m, 0, q32);
  for (int c = 0; c < 5; ++c)
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        for (int k = 0; k < 8; ++k) EXPECT_EQ(q32(c, i, j, k), static_cast<float>(q64(c, i, j, k)));
}

TEST(Viscosity, Laws) {
  ChannelSpec s;
  s.law = ViscosityLaw::power;
  const GasModel gm = s.gas();
  EXPECT_DOUBLE_EQ(viscosity(s.T_wall(), gm), s.mu_wall());
  EXPECT_NEAR(viscosity(2 * s.T_wall(), gm) / s.mu_wall(), 1.6245047927124710, 1e-13);
  TgvSpec t;
  EXPECT_DOUBLE_EQ(viscosity(123.0, t.gas()), 6.25e-4);
}

TEST(Channel, Units) {
  ChannelSpec s;
  s.Ma = 0.8;
  EXPECT_NEAR(sound_speed(1.0, s.T_wall(), s.gamma), 1 / 0.8, 1e-14);
  s.target = ChannelTarget::bulk;
  s.re_bulk = 3000;
  EXPECT_DOUBLE_EQ(s.mu_wall(), 1.0 / 3000);
  // Dean: Re_tau = Re_b sqrt(Cf / 2), Cf = 0.073 (2 Re_b)^(-1/4).
  const double rb = dean_bulk_reynolds(395);
  EXPECT_NEAR(rb * std::sqrt(0.073 * std::pow(2 * rb, -0.25) / 2), 395, 1e-9);
  EXPECT_NEAR(s.target_mass_flux(), 2 * M_PI, 1e-14);
}

TEST(ChannelMesh, EndpointsAndMonotone) {
  ChannelSpec s;
  s.ny = 96;
  const Mesh m = s.mesh();
  EXPECT_EQ(m.y_face(0), -1.0);
  EXPECT_EQ(m.y_face(96), 1.0);
  EXPECT_NEAR(m.y_face(48), 0.0, 1e-15);
  for (int j = 0; j < 96; ++j) EXPECT_LT(m.y_face(j), m.y_face(j + 1));
  EXPECT_NEAR(m.lx, 2 * M_PI, 1e-15);
  EXPECT_NEAR(m.lz, M_PI, 1e-15);
}

TEST(ChannelMesh, WallUnitsOfG1) {
  ChannelSpec s;
  s.nx = 256;
  s.ny = 128;
  s.nz = 128;
  const auto r = wall_resolution(s.mesh(), s.re_tau);
  EXPECT_NEAR(r.dy_min, 0.93, 0.02 * 0.93);
  EXPECT_NEAR(r.dy_max, 12.80, 0.02 * 12.80);
  EXPECT_NEAR(r.dx, 9.69, 0.02 * 9.69);
  EXPECT_NEAR(r.dz, 9.69, 0.02 * 9.69);
}

TEST(ChannelInit, UnperturbedIsParabola) {
  ChannelSpec s;
  s.nx = 6;
  s.ny = 10;
  s.nz = 4;
  s.amplitude = 0;
  const Mesh m = s.mesh();
  Field<double> q({6, 10, 4});
  init_channel(s, m, 0, q);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 10; ++j)
      for (int k = 0; k < 4; ++k) {
        EXPECT_EQ(q(0, i, j, k), 1.0);
        EXPECT_EQ(q(1, i, j, k), poiseuille(m.y_center(j), 1, 1));
        EXPECT_EQ(q(2, i, j, k), 0.0);
        EXPECT_EQ(q(3, i, j, k), 0.0);
      }
}

TEST(ChannelInit, NoiseIsBoundedAndDeterministic) {
  ChannelSpec s;
  s.nx = 8;
  s.ny = 12;
  s.nz = 6;
  s.seed = 42;
  const Mesh m = s.mesh();
  Field<double> a({8, 12, 6}), b({8, 12, 6}), part({3, 12, 6});
  init_channel(s, m, 0, a);
  init_channel(s, m, 0, b);
  init_channel(s, m, 5, part);
  double max_v = 0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 12; ++j) {
      const double U0 = poiseuille(m.y_center(j), 1, 1);
      for (int k = 0; k < 6; ++k) {
        EXPECT_EQ(a.get(i, j, k), b.get(i, j, k));
        if (i >= 5) {
          EXPECT_EQ(part.get(i - 5, j, k), a.get(i, j, k));
        }
        EXPECT_LE(std::abs(a(1, i, j, k) - U0), 0.1 * U0);
        EXPECT_LE(std::abs(a(2, i, j, k)), 0.1);
        EXPECT_LE(std::abs(a(3, i, j, k)), 0.1);
        max_v = std::max(max_v, std::abs(a(2, i, j, k)));
      }
    }
  EXPECT_GT(max_v, 0.05);
  ChannelSpec other = s;
  other.seed = 43;
  Field<double> c({8, 12, 6});
  init_channel(other, m, 0, c);
  EXPECT_NE(c.get(0, 0, 0), a.get(0, 0, 0));
}

TEST(ChannelWall, StaticIsothermalFluidStaysAtRest) {
  ChannelSpec s;
  s.nx = 6;
  s.ny = 12;
  s.nz = 6;
  s.amplitude = 0;
  s.re_bulk = 100;
  s.target = ChannelTarget::bulk;
  const Mesh m = s.mesh();
  const GasModel gm = s.gas();
  Field<double> q({6, 12, 6});
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 12; ++j)
      for (int k = 0; k < 6; ++k) q.set(i, j, k, prim_to_cons(PrimState<double>{1, 0, 0, 0, s.T_wall()}, gm).vec());
  const Field<double> q0 = q;
  Stepper<double> st(m, 0, 6, gm, {}, default_kernels().f64);
  const BoundarySpec bc = s.boundary();
  st.step(q, 1e-3, [&](Field<double>& f) {
    fill_yz_ghosts(f, bc, gm);
    fill_x_periodic(f);
  });
  for (int c = 0; c < 5; ++c)
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 12; ++j)
        for (int k = 0; k < 6; ++k)
          EXPECT_NEAR(q(c, i, j, k), q0(c, i, j, k), 1e-13 * std::max(1.0, std::abs(q0(c, i, j, k))));
}

TEST(BodyForce, AddsMomentumAtFixedTemperature) {
  const GasModel gm = GasModel::from_gamma(1.4, 0.7, ViscosityLaw::constant, 0.01);
  Field<double> q({5, 2, 2});
  for (int i = 0; i < 5; ++i) q.set(i, 1, 1, prim_to_cons(PrimState<double>{1.0 + 0.1 * i, 0.3, -0.2, 0.1, 2.0}, gm).vec());
  Field<double> f = q;
  apply_body_force(f, 0.7, 0.01);
  for (int i = 0; i < 5; ++i) {
    const auto a = cons_to_prim(ConsState<double>::from(q.get(i, 1, 1)), gm);
    const auto b = cons_to_prim(ConsState<double>::from(f.get(i, 1, 1)), gm);
    EXPECT_NEAR(b.U - a.U, 0.007, 1e-15);
    EXPECT_NEAR(b.p, a.p, 1e-14);
    EXPECT_EQ(b.rho, a.rho);
  }
}

TEST(Forcing, StartsPositiveFromRest) {
  ForcingController c(2 * M_PI);
  c.prime(0.0);
  EXPECT_GT(c.update(0.0, 2 * M_PI, 1e-3), 0.0);
}

TEST(Forcing, ConvergesToWallShearBalance) {
  // Surrogate: each solver step removes a fixed wall-friction loss D from the
  // flux. The balance force is then D / (dt M / Lx), and the flux error
  // halves in magnitude every step.
  const double target = 2 * M_PI, mass = 2 * M_PI, dt = 2e-3, D = 3e-4;
  ForcingController c(target);
  double m = 0.9 * target;
  c.prime(m);
  double prev_err = std::abs(m - target);
  for (int n = 0; n < 60; ++n) {
    const double solver = m - D;
    const double f = c.update(solver, mass, dt);
    m = solver + dt * mass * f;
    const double err = std::abs(m - target);
    if (n < 30) {
      EXPECT_LE(err, 0.5 * prev_err + 1e-15);
    }
    prev_err = err;
  }
  EXPECT_NEAR(m, target, 1e-12);
  EXPECT_NEAR(c.force(), D / (dt * mass), 1e-9 * D / (dt * mass));
  EXPECT_NEAR(c.mass_flux(), m, 1e-12);
}

TEST(Forcing, RejectsUnstableMemory) { EXPECT_THROW(ForcingController(1.0, 1.0), ConfigError); }
