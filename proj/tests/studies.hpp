#pragma once

// Convergence studies shared by the unit tests and the acceptance binary.

#include <cmath>
#include <random>
#include <vector>

#include "hgks/boundary.hpp"
#include "hgks/integrator.hpp"
#include "hgks/kernels.hpp"
#include "hgks/kinetic.hpp"
#include "hgks/operator.hpp"
#include "hgks/weno.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

namespace support {

/// Small-amplitude plane acoustic wave along (1, 1, 1) in an inviscid gas at
/// rho = p = 1. The linear solution is exact up to O(A) relative terms.
struct AcousticWave {
  double A = 1e-7;
  double gamma = 1.4;

  double c() const { return std::sqrt(gamma); }
  Prim at(double x, double y, double z, double t) const {
    const double w = A * std::sin(x + y + z - c() * std::sqrt(3.0) * t);
    const double u = c() * w / std::sqrt(3.0);
    return {1 + w, u, u, u, 1 + c() * c() * w};
  }
};

/// Max density error over A after t_end on an n^3 periodic box, taking
/// `steps` equal steps.
inline double acoustic_error(int n, int steps, double t_end, const AcousticWave& wave = {}) {
  using namespace hgks;
  const GasModel gm = GasModel::from_gamma(wave.gamma, 1.0, ViscosityLaw::constant, 0.0);
  const Mesh m = Mesh::periodic_box(n, 0, 2 * M_PI);
  auto q = cell_averages<double>(m, 0, n, [&](double x, double y, double z) { return wave.at(x, y, z, 0); },
                                 gm.gamma);
  const auto exact = cell_averages<double>(
      m, 0, n, [&](double x, double y, double z) { return wave.at(x, y, z, t_end); }, gm.gamma);
  Stepper<double> st(m, 0, n, gm, {}, default_kernels().f64);
  const double dt = t_end / steps;
  for (int s = 0; s < steps; ++s)
    st.step(q, dt, [&](Field<double>& f) {
      fill_yz_ghosts(f, BoundarySpec{}, gm);
      fill_x_periodic(f);
    });
  double err = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) err = std::max(err, std::abs(q(0, i, j, k) - exact(0, i, j, k)));
  return err / wave.A;
}

/// Least-squares slope of log(err) against log(h) for halving h.
inline double observed_order(const std::vector<double>& err) {
  const int n = static_cast<int>(err.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double x = -i * std::log(2.0), y = std::log(err[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Largest error of the WENO left face value at the upper edge of each cell,
/// for cell averages of sin on a periodic grid of n cells on [0, 2 pi).
inline double weno_face_error(int n, hgks::WenoKind kind) {
  const double h = 2 * M_PI / n;
  auto avg = [h](int i) { return (std::cos(i * h) - std::cos((i + 1) * h)) / h; };
  double err = 0;
  for (int i = 0; i < n; ++i) {
    hgks::Stencil s;
    for (int m = 0; m < 5; ++m) s[m] = avg(i - 2 + m);
    err = std::max(err, std::abs(hgks::weno5_edge(s, kind) - std::sin((i + 1) * h)));
  }
  return err;
}

inline std::array<double, 5> euler_flux(const Prim& w, int axis, double gamma) {
  const auto q = cons_of(w, gamma);
  const double un = w[1 + axis];
  std::array<double, 5> f;
  for (int c = 0; c < 5; ++c) f[c] = un * q[c];
  f[1 + axis] += w[4];
  f[4] += un * w[4];
  return f;
}

/// Exact cell-averaged residual -div F of the Euler flux of smooth_state on a
/// box mesh, from 4x4 Gauss quadrature over each face.
inline std::array<double, 5> exact_euler_residual(const hgks::Mesh& m, int i, int j, int k, double gamma) {
  const double h[3] = {m.dx(), m.dy(j), m.dz()};
  const double lo[3] = {m.x0 + i * h[0], m.y_face(j), m.z0 + k * h[2]};
  std::array<double, 5> r{};
  const auto& g = gauss4();
  for (int axis = 0; axis < 3; ++axis) {
    const int t1 = (axis + 1) % 3, t2 = (axis + 2) % 3;
    for (int side = 0; side < 2; ++side) {
      for (const auto& a : g)
        for (const auto& b : g) {
          double p[3];
          p[axis] = lo[axis] + side * h[axis];
          p[t1] = lo[t1] + (a[0] + 0.5) * h[t1];
          p[t2] = lo[t2] + (b[0] + 0.5) * h[t2];
          const auto f = euler_flux(smooth_state(p[0], p[1], p[2]), axis, gamma);
          const double s = (side == 0 ? 1.0 : -1.0) * a[1] * b[1] / h[axis];
          for (int c = 0; c < 5; ++c) r[c] += s * f[c];
        }
    }
  }
  return r;
}

/// Max error of the inviscid operator residual L on an n^3 periodic box.
inline double euler_residual_error(int n) {
  using namespace hgks;
  const Mesh m = Mesh::periodic_box(n, 0.0, 2 * M_PI);
  const GasModel gm = GasModel::from_gamma(1.4, 1.0, ViscosityLaw::constant, 0.0);
  auto q = cell_averages<double>(m, 0, n, smooth_state, gm.gamma);
  fill_yz_ghosts(q, BoundarySpec{}, gm);
  fill_x_periodic(q);
  FluxOperator<double> op(m, 0, n, gm, {}, default_kernels().f64);
  CellArray<double> L(q.extent()), dL(q.extent());
  op.apply(q, 1e-3, &L, dL);
  double err = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const auto ex = exact_euler_residual(m, i, j, k, gm.gamma);
        for (int c = 0; c < 5; ++c) err = std::max(err, std::abs(L(c, i, j, k) - ex[c]));
      }
  return err;
}

/// Worst relative error of the closed-form moment tables against adaptive
/// velocity-space quadrature over `trials` random (U, lambda). Sign-changing
/// integrals are judged relative to the integral of |u^n|.
inline double moment_quadrature_error(int trials = 100, unsigned seed = 2024) {
  using namespace hgks;
  auto rel = [](double a, double b, double scale) { return std::abs(a - b) / scale; };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> vel(-3.0, 3.0);
  std::uniform_real_distribution<double> loglam(std::log(0.1), std::log(10.0));
  double worst = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const double U = vel(rng);
    const double lam = std::exp(loglam(rng));
    const auto t = moments(Maxwellian{1, U, 0.5 * U, -U, lam, 2.0});
    const oracle::Gauss1D g{U, lam};
    const oracle::Gauss1D gv{0.5 * U, lam};
    for (int n = 0; n <= 6; ++n) {
      worst = std::max(worst, rel(t.full[n], g.full(n), g.absolute(n)));
      worst = std::max(worst, rel(t.pos[n], g.pos(n), std::abs(g.pos(n))));
      worst = std::max(worst, rel(t.neg[n], g.neg(n), std::abs(g.neg(n))));
      worst = std::max(worst, rel(t.v[n], gv.full(n), gv.absolute(n)));
    }
    worst = std::max(worst, rel(t.xi2, oracle::xi_moment(2.0, lam, 1), t.xi2));
    worst = std::max(worst, rel(t.xi4, oracle::xi_moment(2.0, lam, 2), t.xi4));
  }
  return worst;
}

}  // namespace support
