#include <gtest/gtest.h>

#include <charconv>
#include <cmath>
#include <sstream>

#include "hgks/boundary.hpp"
#include "hgks/cases.hpp"
#include "hgks/statistics.hpp"

using namespace hgks;

namespace {

GasModel gas(double mu) { return GasModel::from_gamma(1.4, 1.0, ViscosityLaw::constant, mu); }

std::vector<double> column_totals(const std::vector<double>& rows, std::size_t width) {
  std::vector<double> t(width, 0.0);
  for (std::size_t n = 0; n < rows.size(); ++n) t[n % width] += rows[n];
  return t;
}

VolumeIntegrals integrals(const Field<double>& q, const Mesh& m, const GasModel& gm, double rho0 = 1) {
  return volume_integrals(column_totals(volume_integral_rows(q, m, gm), kVolumeColumns), m, rho0);
}

// Every cell including ghosts from a primitive function of position.
template <class F>
Field<double> everywhere(const Mesh& m, const GasModel& gm, F f) {
  Field<double> q({m.nx, m.ny, m.nz});
  const int G = kGhost;
  for (int i = -G; i < m.nx + G; ++i)
    for (int j = -G; j < m.ny + G; ++j)
      for (int k = -G; k < m.nz + G; ++k)
        q.set(i, j, k, prim_to_cons(f(m.x_center(i), m.y_center(j), m.z_center(k)), gm).vec());
  return q;
}

Field<double> tgv_field(const TgvSpec& s) {
  const Mesh m = s.mesh();
  Field<double> q({s.n, s.n, s.n});
  init_tgv(s, m, 0, q);
  fill_yz_ghosts(q, BoundarySpec{}, s.gas());
  fill_x_periodic(q);
  return q;
}

}  // namespace

TEST(VolumeIntegrals, KineticEnergyOfSimpleFields) {
  const Mesh m = Mesh::periodic_box(6, 0, 1);
  const GasModel gm = gas(0.01);
  const auto moving = everywhere(m, gm, [](double, double, double) { return PrimState<double>{1, 1, 0, 0, 1}; });
  EXPECT_NEAR(integrals(moving, m, gm).Ek, 0.5, 1e-15);
  EXPECT_EQ(integrals(moving, m, gm).eps_com(), 0.0);
  const auto rest = everywhere(m, gm, [](double, double, double) { return PrimState<double>{1.3, 0, 0, 0, 1}; });
  EXPECT_EQ(integrals(rest, m, gm).Ek, 0.0);
}

TEST(VolumeIntegrals, SolidBodyRotation) {
  const Mesh m = Mesh::periodic_box(8, -1, 2);
  const double mu = 0.02;
  const GasModel gm = gas(mu);
  const auto q = everywhere(m, gm, [](double x, double y, double) { return PrimState<double>{1, -y, x, 0, 10}; });
  const auto v = integrals(q, m, gm);
  EXPECT_NEAR(v.eps_vort, 4 * mu, 1e-13);
  EXPECT_NEAR(v.eps_dil, 0.0, 1e-13);
}

TEST(VolumeIntegrals, TaylorGreenInitialState) {
  // omega = (-cos x sin y sin z, -sin x cos y sin z, 2 sin x sin y cos z),
  // whose squared magnitude averages to 3/4. With the density variation the
  // enstrophy is 3/8 - 5 / (128 p0).
  double prev = 0;
  for (int n : {16, 32}) {
    TgvSpec s;
    s.n = n;
    const auto v = integrals(tgv_field(s), s.mesh(), s.gas());
    EXPECT_NEAR(v.Ek, 0.125, 1e-12);
    const double err = std::abs(v.eps_vort - 0.75 * s.mu());
    EXPECT_LT(err, 2e-3 * 0.75 * s.mu()) << n;
    EXPECT_LT(v.eps_dil, 1e-20);
    const double ens = 0.375 - 5 / (128 * s.p0());
    EXPECT_NEAR(v.enstrophy, ens, ens * (n == 16 ? 2e-3 : 2e-4)) << n;
    if (prev > 0) {
      EXPECT_GT(std::log2(prev / err), 3.8);
    }
    prev = err;
  }
}

TEST(VolumeIntegrals, SlabRowsMatchWholeDomain) {
  TgvSpec s;
  s.n = 10;
  const auto whole = tgv_field(s);
  const auto rows = volume_integral_rows(whole, s.mesh(), s.gas());
  // Slab [4, 9) with ghosts copied from the whole-domain field.
  Field<double> part({5, 10, 10});
  for (int c = 0; c < 5; ++c)
    for (int i = -kGhost; i < 5 + kGhost; ++i)
      for (int j = -kGhost; j < 10 + kGhost; ++j)
        for (int k = -kGhost; k < 10 + kGhost; ++k) part(c, i, j, k) = whole(c, i + 4, j, k);
  const auto prow = volume_integral_rows(part, s.mesh(), s.gas());
  for (std::size_t n = 0; n < prow.size(); ++n) EXPECT_EQ(prow[n], rows[4 * kVolumeColumns + n]);
}

TEST(TimeSeries, DissipationRateExactForQuadratics) {
  std::vector<TimeSeriesRecord> s;
  for (double t : {0.0, 0.1, 0.35, 0.4, 0.9, 1.0}) s.push_back({t, 1 - 2 * t + 3 * t * t});
  dissipation_rate(s);
  for (const auto& r : s) EXPECT_NEAR(r.eps_Ek, 2 - 6 * r.t, 1e-12) << r.t;
  s[2].t = s[1].t;
  EXPECT_THROW(dissipation_rate(s), ConfigError);
}

TEST(TimeSeries, DissipationRateSecondOrder) {
  double prev = 0;
  for (int n : {20, 40}) {
    std::vector<TimeSeriesRecord> s;
    for (int i = 0; i <= n; ++i) {
      const double t = 2.0 * i / n + 0.3 * std::sin(i) / n;  // uneven sample spacing
      s.push_back({t, std::exp(-t)});
    }
    dissipation_rate(s);
    double err = 0;
    for (const auto& r : s) err = std::max(err, std::abs(r.eps_Ek - std::exp(-r.t)));
    if (prev > 0) {
      EXPECT_GT(std::log2(prev / err), 1.8);
    }
    prev = err;
  }
}

namespace {

PlaneAccumulator accumulate(const std::vector<Field<double>>& samples, const GasModel& gm) {
  const Extent e = samples.front().extent();
  PlaneAccumulator acc(e.ny);
  for (const auto& q : samples)
    acc.add(column_totals(plane_moment_rows(q, gm), static_cast<std::size_t>(e.ny) * kPlaneMoments),
            static_cast<double>(e.nx) * e.nz);
  return acc;
}

template <class F>
Field<double> channel_field(const Mesh& m, const GasModel& gm, F f) {
  Field<double> q({m.nx, m.ny, m.nz});
  for (int i = 0; i < m.nx; ++i)
    for (int j = 0; j < m.ny; ++j)
      for (int k = 0; k < m.nz; ++k) q.set(i, j, k, prim_to_cons(f(m.x_center(i), m.y_center(j), m.z_center(k)), gm).vec());
  return q;
}

}  // namespace

TEST(PlaneStats, EmptyWindowIsAnError) {
  const Mesh m = Mesh::channel(6, 8, 4, 1, 2);
  EXPECT_THROW(PlaneAccumulator(8).profile(m), ConfigError);
}

TEST(PlaneStats, ConstantFieldHasNoFluctuations) {
  const Mesh m = Mesh::channel(6, 8, 4, 1, 2);
  const GasModel gm = gas(0.01);
  const auto q = channel_field(m, gm, [](double, double, double) { return PrimState<double>{1.2, 0.5, 0.25, -0.125, 2}; });
  const auto p = accumulate({q, q}, gm).profile(m);
  for (int j = 0; j < 8; ++j) {
    EXPECT_NEAR(p.U[j], 0.5, 1e-15);
    EXPECT_NEAR(p.rho[j], 1.2, 1e-15);
    EXPECT_NEAR(p.T[j], 2 / 1.2, 1e-14);
    EXPECT_NEAR(p.U_rms[j], 0, 1e-7);
    EXPECT_NEAR(p.uv[j], 0, 1e-15);
    EXPECT_NEAR(p.M_t[j], 0, 1e-7);
    EXPECT_NEAR(p.M_rms[j], 0, 1e-7);
  }
  EXPECT_EQ(p.samples, 2);
}

TEST(PlaneStats, SinusoidRms) {
  const Mesh m = Mesh::channel(16, 8, 4, 1, 2);
  const GasModel gm = gas(0.01);
  const double A = 0.3;
  const auto q = channel_field(m, gm, [&](double x, double y, double) {
    return PrimState<double>{1, 1 - y * y + A * std::sin(x), 0, 0, 1};
  });
  const auto p = accumulate({q}, gm).profile(m);
  for (int j = 0; j < 8; ++j) {
    EXPECT_NEAR(p.U_rms[j], A / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(p.U[j], 1 - m.y_center(j) * m.y_center(j), 1e-14);
    EXPECT_NEAR(p.M_t[j], A / std::sqrt(2.0) / std::sqrt(1.4), 1e-12);
  }
  // Adding a constant leaves the rms alone.
  const auto shifted = channel_field(m, gm, [&](double x, double y, double) {
    return PrimState<double>{1, 3 - y * y + A * std::sin(x), 0, 0, 1};
  });
  const auto ps = accumulate({shifted}, gm).profile(m);
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(ps.U_rms[j], p.U_rms[j], 1e-12);
}

TEST(PlaneStats, OppositeSamplesAverageToZero) {
  const Mesh m = Mesh::channel(6, 8, 4, 1, 2);
  const GasModel gm = gas(0.01);
  const auto f = [](double y) { return 0.4 * (1 - y * y) + 0.1; };
  const auto a = channel_field(m, gm, [&](double, double y, double) { return PrimState<double>{1, f(y), 0, 0, 1}; });
  const auto b = channel_field(m, gm, [&](double, double y, double) { return PrimState<double>{1, -f(y), 0, 0, 1}; });
  const auto p = accumulate({a, b}, gm).profile(m);
  for (int j = 0; j < 8; ++j) {
    EXPECT_NEAR(p.U[j], 0, 1e-15);
    EXPECT_NEAR(p.U_rms[j], f(m.y_center(j)), 1e-14);
  }
}

TEST(PlaneStats, ReynoldsStressOfCorrelatedField) {
  // U' = a s, V' = b s with s = sin x at unit density: <rho U' V'> = a b / 2.
  const Mesh m = Mesh::channel(16, 8, 4, 1, 2);
  const GasModel gm = gas(0.01);
  const auto q = channel_field(m, gm, [](double x, double, double) {
    return PrimState<double>{1, 0.7 + 0.2 * std::sin(x), -0.1 + 0.3 * std::sin(x), 0, 1};
  });
  const auto p = accumulate({q}, gm).profile(m);
  for (int j = 0; j < 8; ++j) EXPECT_NEAR(p.uv[j], 0.03, 1e-14);
}

namespace {

PlaneProfile laminar_profile(const Mesh& m, double a) {
  const GasModel gm = gas(0.01);
  const auto q = channel_field(m, gm, [&](double, double y, double) { return PrimState<double>{1, a * (1 - y * y), 0, 0, 1}; });
  return accumulate({q}, gm).profile(m);
}

}  // namespace

TEST(WallUnits, LaminarShearIsExact) {
  const Mesh m = Mesh::channel(4, 24, 4, 1, 2);
  for (double mu : {0.01, 0.02}) {
    const auto wu = wall_units(laminar_profile(m, 1.5), m, gas(mu), 1.0);
    ASSERT_TRUE(wu.valid);
    EXPECT_NEAR(wu.tau_w, 3 * mu, 1e-12 * mu);
    EXPECT_NEAR(wu.rho_w, 1.0, 1e-14);
    EXPECT_NEAR(wu.u_tau, std::sqrt(3 * mu), 1e-12);
    EXPECT_NEAR(wu.re_tau, std::sqrt(3 * mu) / mu, 1e-9);
    EXPECT_EQ(wu.y_plus.size(), 12u);
    for (std::size_t j = 0; j < 12; ++j) EXPECT_NEAR(wu.U_plus_vd[j], wu.U_plus[j], 1e-12);
  }
}

TEST(WallUnits, ZeroShearIsFlagged) {
  const Mesh m = Mesh::channel(4, 24, 4, 1, 2);
  EXPECT_FALSE(wall_units(laminar_profile(m, 0.0), m, gas(0.01), 1.0).valid);
}

TEST(WallUnits, FirstCellOfG1AtRetau395) {
  // Profile with u_tau set for Re_tau = 395 at mu = 1 / 6800: the first cell
  // spans twice the first y+ value.
  const Mesh m = Mesh::channel(4, 128, 4, 1, 2);
  const double mu = 1.0 / 6800, u_tau = 395 * mu;
  const auto wu = wall_units(laminar_profile(m, u_tau * u_tau / (2 * mu)), m, gas(mu), 1.0);
  EXPECT_NEAR(wu.re_tau, 395, 1e-8);
  EXPECT_NEAR(2 * wu.y_plus[0], 0.93, 0.02 * 0.93);
}

TEST(VanDriest, IdentityAndScaling) {
  std::vector<double> up, rho1, rho4;
  for (int j = 0; j < 50; ++j) {
    up.push_back(std::log1p(0.37 * j) * 4.1 + 0.01 * j);
    rho1.push_back(0.8);
    rho4.push_back(3.2);
  }
  const auto id = van_driest(up, rho1, 0.8);
  const auto dbl = van_driest(up, rho4, 0.8);
  for (int j = 0; j < 50; ++j) {
    EXPECT_NEAR(id[j], up[j], 1e-12);
    EXPECT_NEAR(dbl[j], 2 * up[j], 1e-12);
    if (j > 0) {
      EXPECT_GT(id[j], id[j - 1]);
    }
  }
}

TEST(VanDriest, MonotoneForVaryingDensity) {
  std::vector<double> up, rho;
  for (int j = 0; j < 40; ++j) {
    up.push_back(j * 0.5 + 0.1 * j * j);
    rho.push_back(1 + 0.3 * std::sin(0.2 * j));
  }
  const auto vd = van_driest(up, rho, 1.0);
  for (int j = 1; j < 40; ++j) EXPECT_GT(vd[j], vd[j - 1]);
}

TEST(LogLaw, RecoversConstants) {
  std::vector<double> yp, up;
  for (int j = 0; j < 200; ++j) {
    const double y = 0.5 * std::pow(1.04, j);
    yp.push_back(y);
    up.push_back(y < 5 ? y : std::log(y) / 0.40 + 5.5);
  }
  const auto fit = fit_log_law(yp, up, 30, 300);
  EXPECT_NEAR(fit.kappa, 0.40, 1e-6);
  EXPECT_NEAR(fit.B, 5.5, 1e-6);
  EXPECT_GT(fit.points, 10);
  EXPECT_THROW(fit_log_law(yp, up, 1e6, 2e6), ConfigError);
}

TEST(Csv, TimeSeriesRoundTripsValues) {
  std::vector<TimeSeriesRecord> s{{0.1, 0.125, 0.001, 0.002, 0.375, 6.283185307179586, 1.0 / 3}};
  std::ostringstream os;
  write_time_series_csv(os, s);
  std::istringstream is(os.str());
  std::string header, row;
  std::getline(is, header);
  std::getline(is, row);
  EXPECT_EQ(header, "t,Ek,eps_Ek,eps_com,enstrophy,mass_flux,force");
  const auto last = row.substr(row.rfind(',') + 1);
  double back = 0;
  std::from_chars(last.data(), last.data() + last.size(), back);
  EXPECT_EQ(back, 1.0 / 3);
}

TEST(Csv, ProfileHasOneRowPerCell) {
  const Mesh m = Mesh::channel(4, 16, 4, 1, 2);
  const auto p = laminar_profile(m, 1.5);
  const auto wu = wall_units(p, m, gas(0.01), 1.0);
  std::ostringstream os;
  write_profile_csv(os, p, &wu);
  const std::string out = os.str();
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), 17);
}
