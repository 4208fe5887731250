// Scalar library entry points for the kinetic, flux and reconstruction math.
// They share the generic code with the batched kernels.

#include <cmath>
#include <cstddef>
#include <experimental/simd>
#include <stdexcept>
#include <type_traits>

#include "hgks/flux.hpp"
#include "hgks/kernels.hpp"
#include "hgks/kinetic.hpp"
#include "hgks/weno.hpp"

namespace hgks::ref {

template <class T>
using lane_t = T;

#include "kernels/generic.inl"

Gaussian<double> gaussian_of(const Maxwellian& mx) {
  Gaussian<double> g;
  g.rho = mx.rho;
  g.U = mx.U;
  g.Vt = mx.V;
  g.W = mx.W;
  g.lam = mx.lambda;
  full_moments(g.U, g.lam, g.u);
  full_moments(g.Vt, g.lam, g.v);
  full_moments(g.W, g.lam, g.w);
  const double h = 0.5 / g.lam;
  g.xi2 = mx.K * h;
  g.xi4 = (mx.K * mx.K + 2 * mx.K) * h * h;
  return g;
}

Maxwellian maxwellian_from(const Gaussian<double>& g, double K) { return {g.rho, g.U, g.Vt, g.W, g.lam, K}; }

void check(const Maxwellian& mx) {
  if (!(mx.lambda > 0)) throw InvalidStateError("Maxwellian with non-positive lambda");
  if (!(mx.rho > 0)) throw InvalidStateError("Maxwellian with non-positive density");
}

}  // namespace hgks::ref

namespace hgks {

Maxwellian maxwellian_of(const ConsState<double>& q, const GasModel& gm, CellIndex where) {
  const PrimState<double> w = cons_to_prim(q, gm, where);
  const double eint = q.rhoE - 0.5 * (q.rhoU * w.U + q.rhoV * w.V + q.rhoW * w.W);
  return {q.rho, w.U, w.V, w.W, (gm.K + 3.0) * q.rho / (4.0 * eint), gm.K};
}

ConsState<double> take_moments(const Maxwellian& mx) {
  ref::check(mx);
  const auto g = ref::gaussian_of(mx);
  double m[5];
  ref::psi_moment<0, 0, 0>(g.full(), m);
  return {mx.rho * m[0], mx.rho * m[1], mx.rho * m[2], mx.rho * m[3], mx.rho * m[4]};
}

MomentTable moments(const Maxwellian& mx, int max_order) {
  ref::check(mx);
  if (max_order < 0 || max_order > MomentTable::kOrder) throw std::invalid_argument("moment order must be in [0, 6]");
  const auto g = ref::gaussian_of(mx);
  double pos[7], neg[7];
  ref::half_moments(g.U, g.lam, g.u, pos, neg);
  MomentTable t;
  for (int n = 0; n <= max_order; ++n) {
    t.full[n] = g.u[n];
    t.pos[n] = pos[n];
    t.neg[n] = neg[n];
    t.v[n] = g.v[n];
    t.w[n] = g.w[n];
  }
  t.xi2 = g.xi2;
  t.xi4 = g.xi4;
  return t;
}

Vec5<double> slopes_from_gradient(const Maxwellian& mx, const Vec5<double>& dQ) {
  ref::check(mx);
  const auto g = ref::gaussian_of(mx);
  double b[5], a[5];
  for (int c = 0; c < 5; ++c) b[c] = dQ[c] / mx.rho;
  ref::solve_slope(g, mx.K, b, a);
  return {a[0], a[1], a[2], a[3], a[4]};
}

Vec5<double> project_slope(const Maxwellian& mx, const Vec5<double>& a) {
  ref::check(mx);
  const auto g = ref::gaussian_of(mx);
  double m[5];
  ref::a_moment<0, 0, 0>(g.full(), a.data(), m);
  return {mx.rho * m[0], mx.rho * m[1], mx.rho * m[2], mx.rho * m[3], mx.rho * m[4]};
}

Vec5<double> temporal_slope(const Maxwellian& mx, const Vec5<double>& an, const Vec5<double>& at1,
                            const Vec5<double>& at2) {
  ref::check(mx);
  const auto g = ref::gaussian_of(mx);
  Vec5<double> A;
  ref::temporal_slope(g, mx.K, an.data(), at1.data(), at2.data(), A.data());
  return A;
}

Vec5<double> compatibility_residual(const Maxwellian& mx, const MicroSlopes& s) {
  ref::check(mx);
  const auto g = ref::gaussian_of(mx);
  double m0[5], m1[5], m2[5], mA[5];
  ref::a_moment<1, 0, 0>(g.full(), s.a[0].data(), m0);
  ref::a_moment<0, 1, 0>(g.full(), s.a[1].data(), m1);
  ref::a_moment<0, 0, 1>(g.full(), s.a[2].data(), m2);
  ref::a_moment<0, 0, 0>(g.full(), s.A.data(), mA);
  Vec5<double> r;
  for (int c = 0; c < 5; ++c) r[c] = m0[c] + m1[c] + m2[c] + mA[c];
  return r;
}

MicroSlopes micro_slopes(const Maxwellian& mx, const std::array<Vec5<double>, 3>& gradients, SlopeSide side) {
  MicroSlopes s;
  s.side = side;
  for (int d = 0; d < 3; ++d) s.a[d] = slopes_from_gradient(mx, gradients[d]);
  s.A = temporal_slope(mx, s.a[0], s.a[1], s.a[2]);
  return s;
}

// ---------------------------------------------------------------------------

double collision_time(double p, double mu) {
  if (!(p > 0)) throw InvalidStateError("non-positive pressure in collision time");
  return mu / p;
}

InterfaceState equilibrium_interface_state(const ConsState<double>& left, const ConsState<double>& right,
                                           const GasModel& gm) {
  const Maxwellian ml = maxwellian_of(left, gm);
  const Maxwellian mr = maxwellian_of(right, gm);
  const auto gl = ref::gaussian_of(ml);
  const auto gr = ref::gaussian_of(mr);
  double posl[7], negl[7], posr[7], negr[7];
  ref::half_moments(gl.U, gl.lam, gl.u, posl, negl);
  ref::half_moments(gr.U, gr.lam, gr.u, posr, negr);
  double wl[5], wr[5];
  ref::psi_moment<0, 0, 0>(gl.with(posl), wl);
  ref::psi_moment<0, 0, 0>(gr.with(negr), wr);
  Vec5<double> q0;
  for (int c = 0; c < 5; ++c) q0[c] = gl.rho * wl[c] + gr.rho * wr[c];
  InterfaceState s;
  s.Q0 = ConsState<double>::from(q0);
  s.g0 = maxwellian_of(s.Q0, gm);
  return s;
}

FluxParams<double> flux_params(const GasModel& gm, double dt, EquilibriumSlope eq) {
  FluxParams<double> p;
  p.K = gm.K;
  p.Pr = gm.Pr;
  p.power_law = gm.law == ViscosityLaw::power;
  p.mu_ref = gm.mu_ref;
  p.T_ref = gm.T_ref;
  p.exponent = gm.exponent;
  p.dt = dt;
  p.eq_slope = eq;
  return p;
}

std::array<double, 6> time_kernel_integrals(double tau, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("time window must be positive");
  if (!(tau >= 0)) throw std::invalid_argument("collision time must be non-negative");
  const auto k = ref::time_coefficients(tau, delta);
  return {k.c[0], k.c[1], k.c[2], k.c[3], k.c[4], k.c[5]};
}

namespace {

struct Prepared {
  ref::InterfaceData<double> d;
};

void prepare(const InterfaceInput& in, const GasModel& gm, Prepared& out) {
  const Vec5<double> ql = in.left.vec();
  const Vec5<double> qr = in.right.vec();
  double dl[3][5], dr[3][5];
  for (int k = 0; k < 3; ++k) {
    for (int c = 0; c < 5; ++c) {
      dl[k][c] = in.dleft[k][c];
      dr[k][c] = in.dright[k][c];
    }
  }
  const bool ok = ref::prepare_interface(ql.data(), qr.data(), dl, dr, in.dequilibrium.data(), gm.K,
                                         in.eq_slope, out.d);
  if (!ok) throw InvalidStateError("invalid left, right or interface state");
}

}  // namespace

double interface_collision_time(const InterfaceInput& in, const GasModel& gm) {
  Prepared p;
  prepare(in, gm, p);
  return ref::interface_tau(p.d, flux_params(gm, 1.0, in.eq_slope));
}

Vec5<double> time_integrated_flux(const InterfaceInput& in, const GasModel& gm, double tau, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("time window must be positive");
  Prepared p;
  prepare(in, gm, p);
  ref::FluxBasis<double> fb, sb;
  ref::interface_basis<1>(p.d, fb);
  const ref::FluxBasis<double>* state = nullptr;
  if (gm.Pr != 1.0) {
    ref::interface_basis<0>(p.d, sb);
    state = &sb;
  }
  Vec5<double> out;
  ref::window_integral(p.d, fb, state, ref::time_coefficients(tau, delta), gm.Pr, out.data());
  return out;
}

TimeFlux linearize_flux(const Vec5<double>& i_half, const Vec5<double>& i_full, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
  TimeFlux r;
  const double inv = 1.0 / dt;
  for (int c = 0; c < 5; ++c) {
    r.F[c] = (4.0 * i_half[c] - i_full[c]) * inv;
    r.dF[c] = 4.0 * (i_full[c] - 2.0 * i_half[c]) * (inv * inv);
  }
  return r;
}

TimeFlux interface_flux(const InterfaceInput& in, const GasModel& gm, double dt) {
  if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
  const Vec5<double> ql = in.left.vec();
  const Vec5<double> qr = in.right.vec();
  double dl[3][5], dr[3][5];
  for (int k = 0; k < 3; ++k) {
    for (int c = 0; c < 5; ++c) {
      dl[k][c] = in.dleft[k][c];
      dr[k][c] = in.dright[k][c];
    }
  }
  TimeFlux r;
  const bool ok = ref::point_flux(ql.data(), qr.data(), dl, dr, in.dequilibrium.data(),
                                  flux_params(gm, dt, in.eq_slope), r.F.data(), r.dF.data());
  if (!ok) throw InvalidStateError("invalid left, right or interface state");
  return r;
}

// ---------------------------------------------------------------------------

double weno5_edge(const Stencil& s, WenoKind kind) { return ref::weno_edge(s[0], s[1], s[2], s[3], s[4], kind); }

Vec5<double> weno5_face_value(const Stencil5& s, Side side, WenoKind kind) {
  Vec5<double> r;
  for (int c = 0; c < 5; ++c) {
    const auto& q = s.cells;
    r[c] = side == Side::left ? ref::weno_edge(q[0][c], q[1][c], q[2][c], q[3][c], q[4][c], kind)
                              : ref::weno_edge(q[4][c], q[3][c], q[2][c], q[1][c], q[0][c], kind);
  }
  return r;
}

double edge_derivative(const Stencil& s) { return ref::edge_derivative(s[1], s[2], s[3], s[4]); }

std::array<double, 3> weno5_weights(const Stencil& s, WenoKind kind) {
  double a[3];
  ref::weno_alpha(s[0], s[1], s[2], s[3], s[4], kind, 0.1, 0.6, 0.3, a);
  const double sum = a[0] + a[1] + a[2];
  return {a[0] / sum, a[1] / sum, a[2] / sum};
}

QuadratureRule QuadratureRule::gauss2() {
  const double s = 0.5 / std::sqrt(3.0);
  return {{-s, s}, {0.5, 0.5}};
}

double gauss_point_value(const Stencil& s, bool upper, bool nonlinear, WenoKind kind) {
  if (upper) {
    return nonlinear ? ref::gauss_value_weno(s[0], s[1], s[2], s[3], s[4], kind)
                     : ref::gauss_value_linear(s[0], s[1], s[2], s[3], s[4]);
  }
  return nonlinear ? ref::gauss_value_weno(s[4], s[3], s[2], s[1], s[0], kind)
                   : ref::gauss_value_linear(s[4], s[3], s[2], s[1], s[0]);
}

double gauss_point_derivative(const Stencil& s, bool upper) {
  if (upper) return ref::gauss_derivative(s[0], s[1], s[2], s[3], s[4]);
  return -ref::gauss_derivative(s[4], s[3], s[2], s[1], s[0]);
}

}  // namespace hgks
