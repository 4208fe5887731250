#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "hgks/flux.hpp"
#include "hgks/kernels.hpp"
#include "oracles.hpp"

using namespace hgks;

namespace {

GasModel gas(double mu, double Pr = 1.0) { return GasModel::from_gamma(1.4, Pr, ViscosityLaw::constant, mu); }

ConsState<double> cons(double rho, double U, double V, double W, double p) {
  return prim_to_cons(PrimState<double>{rho, U, V, W, p}, gas(0));
}

InterfaceInput uniform(const ConsState<double>& q) {
  InterfaceInput in;
  in.left = in.right = q;
  return in;
}

// Gradient of the conservative state for given primitive gradients.
Vec5<double> cons_gradient(const PrimState<double>& w, const PrimState<double>& dw, double gamma) {
  const double u2 = w.U * w.U + w.V * w.V + w.W * w.W;
  const double du2 = 2 * (w.U * dw.U + w.V * dw.V + w.W * dw.W);
  return {dw.rho, dw.rho * w.U + w.rho * dw.U, dw.rho * w.V + w.rho * dw.V, dw.rho * w.W + w.rho * dw.W,
          dw.p / (gamma - 1) + 0.5 * (dw.rho * u2 + w.rho * du2)};
}

// Smooth state with identical sides and the exact derivatives.
struct Manufactured {
  PrimState<double> w;
  std::array<PrimState<double>, 3> dw;  // d/dn, d/dt1, d/dt2
};

InterfaceInput input_of(const Manufactured& m, double gamma) {
  InterfaceInput in;
  in.left = in.right = prim_to_cons(m.w, gas(0));
  for (int k = 0; k < 3; ++k) in.dleft[k] = in.dright[k] = cons_gradient(m.w, m.dw[k], gamma);
  in.dequilibrium = in.dleft[0];
  return in;
}

// Navier-Stokes flux through a face with normal n, for the BGK gas with K
// internal degrees of freedom: bulk viscosity makes the isotropic stress part
// -2/(K+3) div U, and the conductivity is mu c_p / Pr with c_p = (K+5)/2.
Vec5<double> navier_stokes_flux(const Manufactured& m, const GasModel& gm) {
  const auto& w = m.w;
  const double E = w.p / (gm.gamma - 1) + 0.5 * w.rho * (w.U * w.U + w.V * w.V + w.W * w.W);
  const double vel[3] = {w.U, w.V, w.W};
  double grad[3][3];  // grad[i][j] = d u_j / d x_i
  for (int i = 0; i < 3; ++i) {
    grad[i][0] = m.dw[i].U;
    grad[i][1] = m.dw[i].V;
    grad[i][2] = m.dw[i].W;
  }
  const double div = grad[0][0] + grad[1][1] + grad[2][2];
  const double mu = gm.mu_ref;
  double sigma[3];  // stress row of the normal direction
  for (int j = 0; j < 3; ++j) sigma[j] = mu * (grad[0][j] + grad[j][0] - (j == 0 ? 2 / (gm.K + 3) * div : 0.0));
  const double dT = (m.dw[0].p - w.p / w.rho * m.dw[0].rho) / w.rho;
  const double kappa = mu * 0.5 * (gm.K + 5) / gm.Pr;
  Vec5<double> f;
  f[0] = w.rho * w.U;
  for (int j = 0; j < 3; ++j) f[1 + j] = w.rho * w.U * vel[j] + (j == 0 ? w.p : 0.0) - sigma[j];
  f[4] = w.U * (E + w.p) - (sigma[0] * w.U + sigma[1] * w.V + sigma[2] * w.W) - kappa * dT;
  return f;
}

Vec5<double> mirror(const Vec5<double>& v) { return {v[0], -v[1], v[2], v[3], v[4]}; }

InterfaceInput random_input(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-1, 1);
  std::uniform_real_distribution<double> pos(0.6, 1.6);
  InterfaceInput in;
  in.left = cons(pos(rng), 0.5 * d(rng), 0.5 * d(rng), 0.5 * d(rng), pos(rng));
  in.right = cons(pos(rng), 0.5 * d(rng), 0.5 * d(rng), 0.5 * d(rng), pos(rng));
  for (int k = 0; k < 3; ++k) {
    for (int c = 0; c < 5; ++c) {
      in.dleft[k][c] = 0.3 * d(rng);
      in.dright[k][c] = 0.3 * d(rng);
    }
  }
  for (int c = 0; c < 5; ++c) in.dequilibrium[c] = 0.3 * d(rng);
  return in;
}

}  // namespace

TEST(CollisionTime, Examples) {
  EXPECT_EQ(collision_time(0.5, 0.0), 0.0);
  EXPECT_EQ(collision_time(0.5, 1e-3), 2e-3);
  const double p0 = 1.0 / (1.4 * 0.1 * 0.1);
  EXPECT_NEAR(p0, 71.4286, 1e-4);
  EXPECT_NEAR(collision_time(p0, 1.0 / 1600), 8.75e-6, 1e-12);
  EXPECT_THROW(collision_time(0.0, 1e-3), InvalidStateError);
  EXPECT_THROW(collision_time(-1.0, 1e-3), InvalidStateError);
}

TEST(InterfaceState, EqualSidesGiveThatState) {
  const auto q = cons(1.2, 0.3, -0.2, 0.1, 0.9);
  const auto s = equilibrium_interface_state(q, q, gas(0));
  const auto a = q.vec(), b = s.Q0.vec();
  for (int c = 0; c < 5; ++c) EXPECT_NEAR(b[c], a[c], 1e-15 * (1 + std::abs(a[c])));
}

TEST(InterfaceState, CollidingStreamsHaveNoNormalMomentum) {
  for (double U : {0.1, 1.0, 3.0}) {
    const auto s = equilibrium_interface_state(cons(1, U, 0, 0, 1), cons(1, -U, 0, 0, 1), gas(0));
    EXPECT_NEAR(s.Q0.rhoU, 0.0, 1e-15) << U;
  }
}

TEST(InterfaceState, MatchesSplitQuadrature) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> vel(-3, 3);
  std::uniform_real_distribution<double> pos(0.2, 5);
  const GasModel gm = gas(0);
  for (int n = 0; n < 40; ++n) {
    const auto l = cons(pos(rng), vel(rng), vel(rng), vel(rng), pos(rng));
    const auto r = cons(pos(rng), vel(rng), vel(rng), vel(rng), pos(rng));
    const Maxwellian ml = maxwellian_of(l, gm), mr = maxwellian_of(r, gm);
    oracle::MaxwellianQuadrature ql(ml.U, ml.V, ml.W, ml.lambda, ml.K, +1);
    oracle::MaxwellianQuadrature qr(mr.U, mr.V, mr.W, mr.lambda, mr.K, -1);
    const oracle::Poly one{{{0, 0, 0, 0}, 1.0}};
    const auto a = oracle::psi_moments(ql, one), b = oracle::psi_moments(qr, one);
    const auto s = equilibrium_interface_state(l, r, gm).Q0.vec();
    for (int c = 0; c < 5; ++c) {
      const double expect = ml.rho * a[c] + mr.rho * b[c];
      const double scale = ml.rho * std::abs(a[c]) + mr.rho * std::abs(b[c]);
      EXPECT_LE(std::abs(s[c] - expect), 1e-10 * scale) << c;
    }
  }
}

TEST(InterfaceState, NonPositiveEnergyThrows) {
  ConsState<double> bad{1, 0, 0, 0, -1};
  EXPECT_THROW(equilibrium_interface_state(bad, bad, gas(0)), InvalidStateError);
}

TEST(TimeIntegratedFlux, UniformStateGivesEulerFlux) {
  const auto in = uniform(cons(1, 1, 0, 0, 1));
  for (double tau : {0.0, 1e-4, 0.3}) {
    for (double delta : {1e-3, 0.5}) {
      const auto f = time_integrated_flux(in, gas(1e-3), tau, delta);
      const Vec5<double> expect{1, 2, 0, 0, 4};
      for (int c = 0; c < 5; ++c) EXPECT_NEAR(f[c], delta * expect[c], 1e-14 * delta) << c;
    }
  }
}

TEST(TimeIntegratedFlux, StaticStateCarriesOnlyPressure) {
  const double p = 0.8, delta = 0.1;
  const auto f = time_integrated_flux(uniform(cons(1.3, 0, 0, 0, p)), gas(1e-3), 1e-3, delta);
  EXPECT_NEAR(f[0], 0.0, 1e-16);
  EXPECT_NEAR(f[1], delta * p, 1e-15);
  EXPECT_NEAR(f[2], 0.0, 1e-16);
  EXPECT_NEAR(f[3], 0.0, 1e-16);
  EXPECT_NEAR(f[4], 0.0, 1e-16);
}

// Linear tangential velocity across the face: the shear flux is -mu dV/dn.
TEST(TimeIntegratedFlux, CouetteShearMatchesNavierStokes) {
  const double mu = 1e-3, shear = 0.4, delta = 0.2;
  Manufactured m{{1.0, 0.0, 0.2, 0.0, 1.0}, {}};
  m.dw[0].V = shear;
  const GasModel gm = gas(mu);
  const auto in = input_of(m, gm.gamma);
  const double tau = interface_collision_time(in, gm);
  EXPECT_NEAR(tau, mu / 1.0, 1e-15);
  const auto f = time_integrated_flux(in, gm, tau, delta);
  EXPECT_NEAR(f[2] / delta, -mu * shear, 0.02 * mu * shear);
  const auto tf = interface_flux(in, gm, delta);
  EXPECT_NEAR(tf.F[2], -mu * shear, 0.02 * mu * shear);
}

// Constant pressure, linear temperature: the energy flux is the heat flux
// -mu c_p / Pr dT/dn, with the Prandtl number correction active.
TEST(TimeIntegratedFlux, HeatFluxFollowsPrandtlNumber) {
  for (double Pr : {1.0, 0.72}) {
    const double mu = 1e-3, dT = 0.3, T = 1.0, p = 1.0;
    Manufactured m{{p / T, 0, 0, 0, p}, {}};
    m.dw[0].rho = -p / (T * T) * dT;
    const GasModel gm = gas(mu, Pr);
    const auto in = input_of(m, gm.gamma);
    const auto tf = interface_flux(in, gm, 0.2);
    const double q = -mu * (gm.gamma / (gm.gamma - 1)) / Pr * dT;
    EXPECT_NEAR(tf.F[4], q, 0.02 * std::abs(q)) << Pr;
  }
}

// Random manufactured smooth fields: linearised flux against the NS flux.
TEST(InterfaceFlux, ReproducesNavierStokesForSmoothFields) {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> d(-1, 1);
  for (double Pr : {1.0, 0.72}) {
    for (int n = 0; n < 20; ++n) {
      Manufactured m{{1 + 0.2 * d(rng), 0.5 * d(rng), 0.5 * d(rng), 0.5 * d(rng), 1 + 0.2 * d(rng)}, {}};
      for (auto& g : m.dw) g = {0.1 * d(rng), 0.3 * d(rng), 0.3 * d(rng), 0.3 * d(rng), 0.1 * d(rng)};
      const double mu = 1e-4;
      const GasModel gm = gas(mu, Pr);
      const auto in = input_of(m, gm.gamma);
      const double tau = interface_collision_time(in, gm);
      const double dt = 100 * tau;
      const auto tf = interface_flux(in, gm, dt);
      const auto ns = navier_stokes_flux(m, gm);
      const auto euler = navier_stokes_flux(m, gas(0, Pr));
      for (int c = 0; c < 5; ++c) {
        const double viscous = std::abs(ns[c] - euler[c]);
        EXPECT_LE(std::abs(tf.F[c] - ns[c]), 0.02 * viscous + 1e-14)
            << "Pr " << Pr << " sample " << n << " component " << c;
      }
    }
  }
}

TEST(InterfaceFlux, MirrorSymmetry) {
  std::mt19937_64 rng(41);
  const GasModel gm = gas(2e-3, 0.72);
  for (int n = 0; n < 100; ++n) {
    const InterfaceInput in = random_input(rng);
    InterfaceInput mi;
    mi.left = ConsState<double>::from(mirror(in.right.vec()));
    mi.right = ConsState<double>::from(mirror(in.left.vec()));
    mi.dleft[0] = -1.0 * mirror(in.dright[0]);
    mi.dright[0] = -1.0 * mirror(in.dleft[0]);
    for (int k = 1; k < 3; ++k) {
      mi.dleft[k] = mirror(in.dright[k]);
      mi.dright[k] = mirror(in.dleft[k]);
    }
    mi.dequilibrium = -1.0 * mirror(in.dequilibrium);
    const auto a = interface_flux(in, gm, 0.05);
    const auto b = interface_flux(mi, gm, 0.05);
    for (int c = 0; c < 5; ++c) {
      const double sign = c == 1 ? 1.0 : -1.0;
      EXPECT_NEAR(b.F[c], sign * a.F[c], 1e-12 * (1 + std::abs(a.F[c]))) << c;
      EXPECT_NEAR(b.dF[c], sign * a.dF[c], 1e-12 * (1 + std::abs(a.dF[c]))) << c;
    }
  }
}

// The kernel integrals against 50-digit quadrature, across the switch
// between series and closed forms.
TEST(TimeKernels, MatchHighPrecisionQuadrature) {
  using Real = boost::multiprecision::cpp_bin_float_50;
  const double tau = 0.7;
  for (double x : {1e-6, 1e-4, 1e-3, 0.1, 0.5, 0.999999, 1.0, 1.000001, 2.0, 10.0, 1e3}) {
    const double delta = x * tau;
    const auto k = time_kernel_integrals(tau, delta);
    const Real t(tau);
    auto e = [&](const Real& s) { return exp(-s / t); };
    std::array<std::function<Real(const Real&)>, 6> kernel = {
        [&](const Real& s) { return Real(1) - e(s); },
        [&](const Real& s) { return (s + t) * e(s) - t; },
        [&](const Real& s) { return s - t + t * e(s); },
        [&](const Real& s) { return e(s); },
        [&](const Real& s) { return -(s + t) * e(s); },
        [&](const Real& s) { return -t * e(s); },
    };
    boost::math::quadrature::gauss_kronrod<Real, 61> q;
    for (int n = 0; n < 6; ++n) {
      // Split where the exponential boundary layer decays.
      Real ref = 0, a = 0;
      for (double cut : {tau, 5 * tau, 20 * tau, 80 * tau, delta}) {
        const Real b = std::min(cut, delta);
        if (b > a) ref += q.integrate(kernel[n], a, b, 0, Real(1e-40));
        a = b;
      }
      const double r = static_cast<double>(ref);
      EXPECT_LE(std::abs(k[n] - r), 4e-15 * std::abs(r)) << "x " << x << " kernel " << n;
    }
  }
  const auto inviscid = time_kernel_integrals(0.0, 0.3);
  EXPECT_EQ(inviscid[0], 0.3);
  EXPECT_EQ(inviscid[2], 0.5 * 0.3 * 0.3);
  for (int n : {1, 3, 4, 5}) EXPECT_EQ(inviscid[n], 0.0);
}

TEST(LinearizeFlux, Examples) {
  const Vec5<double> F{1, -2, 0.5, 3, 7};
  const double dt = 0.3;
  const auto c = linearize_flux(0.5 * dt * F, dt * F, dt);
  for (int n = 0; n < 5; ++n) {
    EXPECT_NEAR(c.F[n], F[n], 1e-15 * std::abs(F[n]));
    EXPECT_NEAR(c.dF[n], 0.0, 1e-13 * std::abs(F[n]));
  }
  // F(t) = a + b t: windows a dt + b dt^2 / 2 and a dt / 2 + b dt^2 / 8.
  const Vec5<double> a{1, 2, 3, 4, 5}, b{-1, 0.5, 2, -3, 0.25};
  Vec5<double> ih, iF;
  for (int n = 0; n < 5; ++n) {
    ih[n] = a[n] * dt / 2 + b[n] * dt * dt / 8;
    iF[n] = a[n] * dt + b[n] * dt * dt / 2;
  }
  const auto l = linearize_flux(ih, iF, dt);
  for (int n = 0; n < 5; ++n) {
    EXPECT_NEAR(l.F[n], a[n], 1e-14);
    EXPECT_NEAR(l.dF[n], b[n], 1e-12);
  }
  EXPECT_THROW(linearize_flux(ih, iF, 0.0), std::invalid_argument);
}

TEST(LinearizeFlux, BackSubstitutionReproducesWindows) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int n = 0; n < 500; ++n) {
    const double dt = std::pow(10.0, -4 + 3 * (d(rng) + 1) / 2);
    Vec5<double> ih, iF;
    for (int c = 0; c < 5; ++c) {
      ih[c] = d(rng) * dt;
      iF[c] = d(rng) * dt;
    }
    const auto l = linearize_flux(ih, iF, dt);
    for (int c = 0; c < 5; ++c) {
      const double full = l.F[c] * dt + 0.5 * l.dF[c] * dt * dt;
      const double half = 0.5 * l.F[c] * dt + 0.125 * l.dF[c] * dt * dt;
      const double scale = std::abs(ih[c]) + std::abs(iF[c]);
      EXPECT_LE(std::abs(full - iF[c]), 1e-13 * scale);
      EXPECT_LE(std::abs(half - ih[c]), 1e-13 * scale);
    }
  }
}

TEST(InterfaceFlux, InvalidStateThrows) {
  InterfaceInput in = uniform(cons(1, 0, 0, 0, 1));
  in.left.rhoE = -0.1;
  EXPECT_THROW(interface_flux(in, gas(1e-3), 0.1), InvalidStateError);
}

namespace {

template <class T>
struct Batch {
  std::size_t n;
  std::vector<T> in;   // 5 + 5 + 15 + 15 + 5 rows
  std::vector<T> out;  // 10 rows

  explicit Batch(std::size_t lanes) : n(lanes), in(45 * lanes), out(10 * lanes) {}
  T* row(int r) { return in.data() + r * n; }

  FluxBatchArgs<T> args(const FluxParams<T>& p) {
    FluxBatchArgs<T> a;
    a.n = n;
    for (int c = 0; c < 5; ++c) {
      a.ql[c] = row(c);
      a.qr[c] = row(5 + c);
      for (int k = 0; k < 3; ++k) {
        a.dl[k][c] = row(10 + 5 * k + c);
        a.dr[k][c] = row(25 + 5 * k + c);
      }
      a.de[c] = row(40 + c);
      a.f[c] = out.data() + c * n;
      a.df[c] = out.data() + (5 + c) * n;
    }
    a.params = p;
    return a;
  }
};

template <class T>
Batch<T> random_batch(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  Batch<T> b(n);
  for (std::size_t l = 0; l < n; ++l) {
    const InterfaceInput in = random_input(rng);
    const auto ql = in.left.vec(), qr = in.right.vec();
    for (int c = 0; c < 5; ++c) {
      b.row(c)[l] = static_cast<T>(ql[c]);
      b.row(5 + c)[l] = static_cast<T>(qr[c]);
      for (int k = 0; k < 3; ++k) {
        b.row(10 + 5 * k + c)[l] = static_cast<T>(in.dleft[k][c]);
        b.row(25 + 5 * k + c)[l] = static_cast<T>(in.dright[k][c]);
      }
      b.row(40 + c)[l] = static_cast<T>(in.dequilibrium[c]);
    }
  }
  return b;
}

template <class T>
void check_flux_kernels_agree(bool power_law, T Pr, EquilibriumSlope eq) {
  FluxParams<T> p;
  p.K = 2;
  p.Pr = Pr;
  p.power_law = power_law;
  p.mu_ref = T(3e-3);
  p.T_ref = T(0.9);
  p.dt = T(0.02);
  p.eq_slope = eq;
  std::vector<std::vector<T>> results;
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::avx512}) {
    if (!isa_supported(isa)) continue;
    Batch<T> b = random_batch<T>(29, 53);
    auto a = b.args(p);
    kernels(isa).get<T>().gks_flux(a);
    EXPECT_EQ(a.bad, b.n);
    results.push_back(b.out);
  }
  ASSERT_GE(results.size(), 2u);
  for (std::size_t i = 1; i < results.size(); ++i) EXPECT_EQ(results[i], results[0]) << "isa " << i;
}

}  // namespace

TEST(FluxKernels, InstructionSetsAgreeBitwise) {
  for (auto eq : {EquilibriumSlope::central, EquilibriumSlope::side_average}) {
    check_flux_kernels_agree<double>(false, 1.0, eq);
    check_flux_kernels_agree<double>(true, 0.72, eq);
    check_flux_kernels_agree<float>(false, 1.0f, eq);
    check_flux_kernels_agree<float>(true, 0.72f, eq);
  }
}

TEST(FluxKernels, ScalarBatchMatchesLibraryPath) {
  std::mt19937_64 rng(59);
  const GasModel gm = GasModel::from_gamma(1.4, 0.72, ViscosityLaw::power, 3e-3, 0.9);
  const double dt = 0.02;
  Batch<double> b(8);
  std::vector<InterfaceInput> inputs;
  for (std::size_t l = 0; l < b.n; ++l) {
    inputs.push_back(random_input(rng));
    const auto& in = inputs.back();
    for (int c = 0; c < 5; ++c) {
      b.row(c)[l] = in.left.vec()[c];
      b.row(5 + c)[l] = in.right.vec()[c];
      for (int k = 0; k < 3; ++k) {
        b.row(10 + 5 * k + c)[l] = in.dleft[k][c];
        b.row(25 + 5 * k + c)[l] = in.dright[k][c];
      }
      b.row(40 + c)[l] = in.dequilibrium[c];
    }
  }
  auto a = b.args(flux_params(gm, dt, EquilibriumSlope::central));
  kernels(Isa::scalar).f64.gks_flux(a);
  for (std::size_t l = 0; l < b.n; ++l) {
    const auto tf = interface_flux(inputs[l], gm, dt);
    for (int c = 0; c < 5; ++c) {
      EXPECT_EQ(a.f[c][l], tf.F[c]);
      EXPECT_EQ(a.df[c][l], tf.dF[c]);
    }
  }
}

TEST(FluxKernels, ReportsFirstInvalidLane) {
  for (Isa isa : {Isa::scalar, Isa::avx2, Isa::avx512}) {
    if (!isa_supported(isa)) continue;
    Batch<double> b = random_batch<double>(21, 61);
    b.row(5 + 4)[13] = -1.0;  // right energy of lane 13
    b.row(0)[17] = -1.0;      // left density of lane 17
    FluxParams<double> p;
    p.dt = 0.01;
    p.mu_ref = 1e-3;
    auto a = b.args(p);
    kernels(isa).f64.gks_flux(a);
    EXPECT_EQ(a.bad, 13u) << to_string(isa);
  }
}
