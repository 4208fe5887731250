// Generic numeric core, written once over a value type V that is either a
// scalar (float/double) or a std::experimental::simd vector of one.
//
// This file is included inside a per-instruction-set namespace so each
// translation unit gets its own copy of every template. Include
// <experimental/simd>, <cmath>, <cstddef>, <type_traits> and hgks/kernels.hpp
// before it. Do not use standard containers here: their inline members would
// be compiled with this unit's target flags and could be picked by the
// linker for code running on a CPU without those instructions.

namespace stdx = std::experimental;

template <class V>
struct scalar_of {
  using type = V;
};
template <class T, class A>
struct scalar_of<stdx::simd<T, A>> {
  using type = T;
};
template <class V>
using scalar_t = typename scalar_of<V>::type;

template <class V>
inline constexpr bool is_vector_v = !std::is_arithmetic_v<V>;

template <class V>
inline V load(const scalar_t<V>* p) {
  if constexpr (is_vector_v<V>) {
    return V(p, stdx::element_aligned);
  } else {
    return *p;
  }
}

template <class V>
inline void store(const V& v, scalar_t<V>* p) {
  if constexpr (is_vector_v<V>) {
    v.copy_to(p, stdx::element_aligned);
  } else {
    *p = v;
  }
}

template <class V, class M>
inline V select(const M& m, const V& a, const V& b) {
  if constexpr (is_vector_v<V>) {
    V r = b;
    stdx::where(m, r) = a;
    return r;
  } else {
    return m ? a : b;
  }
}

inline bool any_of(bool m) { return m; }
inline bool all_of(bool m) { return m; }
inline int first_false(bool m) { return m ? 1 : 0; }

template <class M>
inline int first_false(const M& m) {
  return stdx::find_first_set(!m);
}

template <class V>
inline V vabs(const V& x) {
  using std::abs;
  return abs(x);
}

template <class V>
inline V vmin(const V& a, const V& b) {
  if constexpr (is_vector_v<V>) {
    return stdx::min(a, b);
  } else {
    return a < b ? a : b;
  }
}

// ---------------------------------------------------------------------------
// WENO reconstruction

// Unnormalised nonlinear weights of the three candidates {a,b,c}, {b,c,d},
// {c,d,e} given their linear weights.
template <class V>
inline void weno_alpha(const V& a, const V& b, const V& c, const V& d, const V& e, WenoKind kind,
                       scalar_t<V> l0, scalar_t<V> l1, scalar_t<V> l2, V* alpha) {
  using S = scalar_t<V>;
  const V s0 = a - S(2) * b + c;
  const V s1 = b - S(2) * c + d;
  const V s2 = c - S(2) * d + e;
  const V t0 = a - S(4) * b + S(3) * c;
  const V t1 = b - d;
  const V t2 = S(3) * c - S(4) * d + e;
  const S k13 = S(13) / S(12);
  const V b0 = k13 * s0 * s0 + S(0.25) * t0 * t0;
  const V b1 = k13 * s1 * s1 + S(0.25) * t1 * t1;
  const V b2 = k13 * s2 * s2 + S(0.25) * t2 * t2;
  if (kind == WenoKind::z) {
    const S eps = S(1e-6);
    const V tau = vabs(b0 - b2);
    const V r0 = tau / (b0 + eps);
    const V r1 = tau / (b1 + eps);
    const V r2 = tau / (b2 + eps);
    alpha[0] = l0 * (S(1) + r0 * r0);
    alpha[1] = l1 * (S(1) + r1 * r1);
    alpha[2] = l2 * (S(1) + r2 * r2);
  } else {
    const S eps = S(1e-6);
    const V r0 = b0 + eps;
    const V r1 = b1 + eps;
    const V r2 = b2 + eps;
    alpha[0] = l0 / (r0 * r0);
    alpha[1] = l1 / (r1 * r1);
    alpha[2] = l2 / (r2 * r2);
  }
}

// Left-biased value at the right edge of the centre cell of (a, b, c, d, e).
template <class V>
inline V weno_edge(const V& a, const V& b, const V& c, const V& d, const V& e, WenoKind kind) {
  using S = scalar_t<V>;
  V w[3];
  weno_alpha(a, b, c, d, e, kind, S(0.1), S(0.6), S(0.3), w);
  const V sum = w[0] + w[1] + w[2];
  const V d0 = S(2) * (a - b) + S(5) * (c - b);
  const V d1 = S(2) * (d - c) + (c - b);
  const V d2 = S(5) * (d - c) - (e - c);
  return c + (w[0] * d0 + w[1] * d1 + w[2] * d2) / (S(6) * sum);
}

// d/d(index) of the cell quartic at the edge between b and c of (a, b, c, d).
template <class V>
inline V edge_derivative(const V& a, const V& b, const V& c, const V& d) {
  using S = scalar_t<V>;
  return (S(15) * (c - b) - (d - a)) / S(12);
}

// Coefficients of the quartic reconstruction at the upper Gauss point
// s = +1/(2 sqrt 3) of the centre cell, for cells -2..2 relative to the centre.
struct GaussCoefficients {
  double value[5];
  double deriv[5];
  double cand0[2];  // candidate on {-2,-1,0}: weights of (q-2 - q0), (q-1 - q0)
  double cand1;     // candidate on {-1,0,1}: weight of (q1 - q-1)
  double cand2[2];  // candidate on {0,1,2}: weights of (q1 - q0), (q2 - q0)
  double lin[3];
};

inline constexpr double kSqrt3 = 1.7320508075688772935;

inline constexpr GaussCoefficients kGauss = {
    {-1.0 / 4320 + 7 * kSqrt3 / 432, 1.0 / 1080 - 25 * kSqrt3 / 216, 719.0 / 720,
     1.0 / 1080 + 25 * kSqrt3 / 216, -7 * kSqrt3 / 432 - 1.0 / 4320},
    {1.0 / 12 - kSqrt3 / 54, -2.0 / 3 + 13 * kSqrt3 / 54, -4 * kSqrt3 / 9, 2.0 / 3 + 13 * kSqrt3 / 54,
     -1.0 / 12 - kSqrt3 / 54},
    {kSqrt3 / 12, -kSqrt3 / 3},
    kSqrt3 / 12,
    {kSqrt3 / 3, -kSqrt3 / 12},
    {7.0 / 36 - kSqrt3 / 1080, 11.0 / 18, 7.0 / 36 + kSqrt3 / 1080},
};

// Point value at the upper Gauss point; the lower one is the same call on the
// reversed stencil.
template <class V>
inline V gauss_value_linear(const V& a, const V& b, const V& c, const V& d, const V& e) {
  using S = scalar_t<V>;
  const auto& g = kGauss.value;
  return c + (S(g[0]) * (a - c) + S(g[1]) * (b - c) + S(g[3]) * (d - c) + S(g[4]) * (e - c));
}

template <class V>
inline V gauss_derivative(const V& a, const V& b, const V& c, const V& d, const V& e) {
  using S = scalar_t<V>;
  const auto& g = kGauss.deriv;
  return S(g[0]) * (a - c) + S(g[1]) * (b - c) + S(g[3]) * (d - c) + S(g[4]) * (e - c);
}

template <class V>
inline V gauss_value_weno(const V& a, const V& b, const V& c, const V& d, const V& e, WenoKind kind) {
  using S = scalar_t<V>;
  V w[3];
  weno_alpha(a, b, c, d, e, kind, S(kGauss.lin[0]), S(kGauss.lin[1]), S(kGauss.lin[2]), w);
  const V sum = w[0] + w[1] + w[2];
  const V d0 = S(kGauss.cand0[0]) * (a - c) + S(kGauss.cand0[1]) * (b - c);
  const V d1 = S(kGauss.cand1) * (d - b);
  const V d2 = S(kGauss.cand2[0]) * (d - c) + S(kGauss.cand2[1]) * (e - c);
  return c + (w[0] * d0 + w[1] * d1 + w[2] * d2) / sum;
}

// ---------------------------------------------------------------------------
// Maxwellian moments. All moments are normalised by density.

inline constexpr double kSqrtPi = 1.7724538509055160273;

template <class V>
struct MomentView {
  const V* u;
  const V* v;
  const V* w;
  V xi2;
  V xi4;
};

template <class V>
struct Gaussian {
  V rho, U, Vt, W, lam;
  V u[7];  // full normal moments
  V v[7];
  V w[7];
  V xi2, xi4;

  MomentView<V> full() const { return {u, v, w, xi2, xi4}; }
  MomentView<V> with(const V* half) const { return {half, v, w, xi2, xi4}; }
};

template <class V>
inline void full_moments(const V& mean, const V& lam, V* out) {
  using S = scalar_t<V>;
  const V h = S(0.5) / lam;
  out[0] = V(S(1));
  out[1] = mean;
  for (int n = 1; n < 6; ++n) out[n + 1] = mean * out[n] + S(n) * h * out[n - 1];
}

// Builds the Maxwellian of a conservative state and its full moment tables.
// `ok` is false where density or internal energy is not positive.
template <class V>
inline void make_gaussian(const V* q, scalar_t<V> K, Gaussian<V>& g, decltype(V() > V())& ok) {
  using S = scalar_t<V>;
  g.rho = q[0];
  const V inv = S(1) / q[0];
  g.U = q[1] * inv;
  g.Vt = q[2] * inv;
  g.W = q[3] * inv;
  const V eint = q[4] - S(0.5) * (q[1] * g.U + q[2] * g.Vt + q[3] * g.W);
  ok = ok && (q[0] > S(0)) && (eint > S(0));
  g.lam = (K + S(3)) * q[0] / (S(4) * eint);
  full_moments(g.U, g.lam, g.u);
  full_moments(g.Vt, g.lam, g.v);
  full_moments(g.W, g.lam, g.w);
  const V h = S(0.5) / g.lam;
  g.xi2 = K * h;
  g.xi4 = (K * K + S(2) * K) * h * h;
}

// Half-space normal moments <u^n>_{u>0} and <u^n>_{u<0}.
//
// Near the mean both halves follow the forward recursion from the erfc seeds.
// Far from it the half not containing the mean is tiny and the forward
// recursion loses all its digits, so that tail is computed by backward
// (Miller) recursion and the other half as full minus tail.
template <class V>
inline void half_moments(const V& U, const V& lam, const V* full, V* pos, V* neg) {
  using S = scalar_t<V>;
  using std::erfc;
  using std::exp;
  using std::sqrt;
  const V s = sqrt(lam);
  const V x = s * U;
  const V h = S(0.5) / lam;
  pos[0] = S(0.5) * erfc(-x);
  pos[1] = U * pos[0] + S(0.5) * exp(-x * x) / (s * S(kSqrtPi));
  for (int n = 1; n < 6; ++n) pos[n + 1] = U * pos[n] + S(n) * h * pos[n - 1];
  for (int n = 0; n < 7; ++n) neg[n] = full[n] - pos[n];

  const V xa = vabs(x);
  const auto far = xa > S(2);
  if (!any_of(far)) return;

  constexpr int kStart = std::is_same_v<S, float> ? 32 : 64;
  const V xr = vmin(xa, V(S(25)));
  V above = V(S(0));
  V cur = V(S(1));
  V ratio[7];
  for (int n = kStart - 1; n >= 1; --n) {
    const V below = (S(2) * xr * cur + S(2) * above) / S(n);
    above = cur;
    cur = below;
    if (n - 1 <= 6) ratio[n - 1] = cur;
  }
  const V j0 = S(0.5) * erfc(xr);
  const auto upper = U > S(0);
  const V step = select(upper, V(S(-1)), V(S(1))) / s;
  V scale = j0 / ratio[0];
  V tail[7];
  for (int n = 0; n < 7; ++n) {
    tail[n] = select(xa > S(25), V(S(0)), scale * ratio[n]);
    scale = scale * step;
  }
  for (int n = 0; n < 7; ++n) {
    const V major = full[n] - tail[n];
    pos[n] = select(far, select(upper, major, tail[n]), pos[n]);
    neg[n] = select(far, select(upper, tail[n], major), neg[n]);
  }
}

// <u^n v^m w^l psi>
template <int n, int m, int l, class V>
inline void psi_moment(const MomentView<V>& t, V* out) {
  using S = scalar_t<V>;
  const V base = t.u[n] * t.v[m] * t.w[l];
  out[0] = base;
  out[1] = t.u[n + 1] * t.v[m] * t.w[l];
  out[2] = t.u[n] * t.v[m + 1] * t.w[l];
  out[3] = t.u[n] * t.v[m] * t.w[l + 1];
  out[4] = S(0.5) * (t.u[n + 2] * t.v[m] * t.w[l] + t.u[n] * t.v[m + 2] * t.w[l] +
                     t.u[n] * t.v[m] * t.w[l + 2] + base * t.xi2);
}

// <xi^2 u^n v^m w^l psi>
template <int n, int m, int l, class V>
inline void xi_psi_moment(const MomentView<V>& t, V* out) {
  using S = scalar_t<V>;
  const V base = t.u[n] * t.v[m] * t.w[l];
  out[0] = t.xi2 * base;
  out[1] = t.xi2 * t.u[n + 1] * t.v[m] * t.w[l];
  out[2] = t.xi2 * t.u[n] * t.v[m + 1] * t.w[l];
  out[3] = t.xi2 * t.u[n] * t.v[m] * t.w[l + 1];
  out[4] = S(0.5) * (t.xi2 * (t.u[n + 2] * t.v[m] * t.w[l] + t.u[n] * t.v[m + 2] * t.w[l] +
                              t.u[n] * t.v[m] * t.w[l + 2]) +
                     t.xi4 * base);
}

// <(a . psi) u^n v^m w^l psi>
template <int n, int m, int l, class V>
inline void a_moment(const MomentView<V>& t, const V* a, V* out) {
  using S = scalar_t<V>;
  V p0[5], p1[5], p2[5], p3[5], pu[5], pv[5], pw[5], px[5];
  psi_moment<n, m, l>(t, p0);
  psi_moment<n + 1, m, l>(t, p1);
  psi_moment<n, m + 1, l>(t, p2);
  psi_moment<n, m, l + 1>(t, p3);
  psi_moment<n + 2, m, l>(t, pu);
  psi_moment<n, m + 2, l>(t, pv);
  psi_moment<n, m, l + 2>(t, pw);
  xi_psi_moment<n, m, l>(t, px);
  const V half4 = S(0.5) * a[4];
  for (int c = 0; c < 5; ++c) {
    out[c] = a[0] * p0[c] + a[1] * p1[c] + a[2] * p2[c] + a[3] * p3[c] +
             half4 * (pu[c] + pv[c] + pw[c] + px[c]);
  }
}

// Solves <(a . psi) psi> = b for the Maxwellian g (b already divided by rho).
template <class V>
inline void solve_slope(const Gaussian<V>& g, scalar_t<V> K, const V* b, V* a) {
  using S = scalar_t<V>;
  const V u2 = g.U * g.U + g.Vt * g.Vt + g.W * g.W;
  const V energy = u2 + (K + S(3)) * (S(0.5) / g.lam);
  const V r1 = b[1] - g.U * b[0];
  const V r2 = b[2] - g.Vt * b[0];
  const V r3 = b[3] - g.W * b[0];
  const V r4 = S(2) * b[4] - energy * b[0];
  const V l2 = S(2) * g.lam;
  a[4] = (l2 * l2 / (K + S(3))) *
         (r4 - S(2) * g.U * r1 - S(2) * g.Vt * r2 - S(2) * g.W * r3);
  a[3] = l2 * r3 - g.W * a[4];
  a[2] = l2 * r2 - g.Vt * a[4];
  a[1] = l2 * r1 - g.U * a[4];
  a[0] = b[0] - g.U * a[1] - g.Vt * a[2] - g.W * a[3] - S(0.5) * a[4] * energy;
}

// Temporal coefficient from the compatibility condition
// <(a_n u + a_t1 v + a_t2 w + A) psi> = 0 over the full Maxwellian.
template <class V>
inline void temporal_slope(const Gaussian<V>& g, scalar_t<V> K, const V* an, const V* at1,
                           const V* at2, V* A) {
  V m0[5], m1[5], m2[5], rhs[5];
  const MomentView<V> t = g.full();
  a_moment<1, 0, 0>(t, an, m0);
  a_moment<0, 1, 0>(t, at1, m1);
  a_moment<0, 0, 1>(t, at2, m2);
  for (int c = 0; c < 5; ++c) rhs[c] = -(m0[c] + m1[c] + m2[c]);
  solve_slope(g, K, rhs, A);
}

// ---------------------------------------------------------------------------
// Time integrals of the kernel functions over [0, delta].

template <class V>
struct TimeCoefficients {
  V c[6];
};

// e = exp(-x) and om = 1 - e for x = delta / tau, supplied by the caller.
template <class V>
inline TimeCoefficients<V> time_coefficients(const V& tau, scalar_t<V> delta, const V& x, const V& e,
                                             const V& om) {
  using S = scalar_t<V>;
  TimeCoefficients<V> r;
  r.c[0] = delta - tau * om;
  r.c[1] = -tau * delta * (S(1) + e) + S(2) * tau * tau * om;
  r.c[2] = S(0.5) * delta * delta - tau * delta + tau * tau * om;
  r.c[3] = tau * om;
  r.c[4] = -S(2) * tau * tau * om + tau * delta * e;
  r.c[5] = -tau * tau * om;

  // Windows shorter than tau: three of the closed forms cancel down to
  // O(x^2) or O(x^3) and lose up to eps / x^2, so sum their Taylor series
  // instead. Twenty terms reach rounding for every x below 1.
  const auto small = x < S(1);
  if (any_of(small)) {
    const V xs = vmin(x, V(S(1)));
    V term = xs;
    V s1 = V(S(0)), s2 = V(S(0)), s3 = V(S(0));
    for (int k = 2; k <= 20; ++k) {
      term = term * xs / S(k);
      const S sign = (k % 2 == 0) ? S(1) : S(-1);
      s1 = s1 + sign * term;
      s2 = s2 + sign * S(k - 2) * term;
      if (k >= 3) s3 = s3 - sign * term;
    }
    const V t2 = tau * tau;
    r.c[0] = select(small, tau * s1, r.c[0]);
    r.c[1] = select(small, t2 * s2, r.c[1]);
    r.c[2] = select(small, t2 * s3, r.c[2]);
  }
  return r;
}

template <class V>
inline TimeCoefficients<V> time_coefficients(const V& tau, scalar_t<V> delta) {
  using std::exp;
  using std::expm1;
  const V x = delta / tau;
  return time_coefficients(tau, delta, x, V(exp(-x)), V(-expm1(-x)));
}

// Coefficients of the windows [0, dt/2] and [0, dt] from one exponential.
template <class V>
inline void time_coefficient_pair(const V& tau, scalar_t<V> dt, TimeCoefficients<V>& half,
                                  TimeCoefficients<V>& full) {
  using S = scalar_t<V>;
  using std::exp;
  using std::expm1;
  const V xh = (S(0.5) * dt) / tau;
  const V eh = exp(-xh);
  const V omh = -expm1(-xh);
  half = time_coefficients(tau, S(0.5) * dt, xh, eh, omh);
  full = time_coefficients(tau, dt, xh + xh, eh * eh, omh * (S(1) + eh));
}

// ---------------------------------------------------------------------------
// Flux basis: the moments that the time coefficients multiply.

template <class V>
struct FluxBasis {
  V e0[5], ea[5], eA[5];  // equilibrium part
  V l0[5], la[5], lA[5];  // left half
  V r0[5], ra[5], rA[5];  // right half
};

template <int p, class V>
inline void slope_terms(const MomentView<V>& t, const V (*a)[5], const V* A, V* sa, V* sA) {
  V m0[5], m1[5], m2[5];
  a_moment<p + 1, 0, 0>(t, a[0], m0);
  a_moment<p, 1, 0>(t, a[1], m1);
  a_moment<p, 0, 1>(t, a[2], m2);
  for (int c = 0; c < 5; ++c) sa[c] = m0[c] + m1[c] + m2[c];
  a_moment<p, 0, 0>(t, A, sA);
}

// p = 1 gives flux moments (weight u), p = 0 the transported state itself.
template <int p, class V>
inline void flux_basis(const Gaussian<V>& g0, const V (*ae)[5], const V* Ae, const MomentView<V>& lt,
                       const V (*al)[5], const V* Al, const MomentView<V>& rt, const V (*ar)[5],
                       const V* Ar, FluxBasis<V>& b) {
  psi_moment<p, 0, 0>(g0.full(), b.e0);
  slope_terms<p>(g0.full(), ae, Ae, b.ea, b.eA);
  psi_moment<p, 0, 0>(lt, b.l0);
  slope_terms<p>(lt, al, Al, b.la, b.lA);
  psi_moment<p, 0, 0>(rt, b.r0);
  slope_terms<p>(rt, ar, Ar, b.ra, b.rA);
}

template <class V>
inline void integrate(const FluxBasis<V>& b, const TimeCoefficients<V>& k, const V& rho0,
                      const V& rhol, const V& rhor, V* out) {
  for (int c = 0; c < 5; ++c) {
    out[c] = rho0 * (k.c[0] * b.e0[c] + k.c[1] * b.ea[c] + k.c[2] * b.eA[c]) +
             rhol * (k.c[3] * b.l0[c] + k.c[4] * b.la[c] + k.c[5] * b.lA[c]) +
             rhor * (k.c[3] * b.r0[c] + k.c[4] * b.ra[c] + k.c[5] * b.rA[c]);
  }
}

// Rescales the heat flux carried by the time-integrated energy flux by 1/Pr.
template <class V>
inline void prandtl_fix(const Gaussian<V>& g0, scalar_t<V> Pr, const V* state, V* flux) {
  using S = scalar_t<V>;
  const V u2 = g0.U * g0.U + g0.Vt * g0.Vt + g0.W * g0.W;
  const V qf = flux[4] - (g0.U * flux[1] + g0.Vt * flux[2] + g0.W * flux[3]) + S(0.5) * u2 * flux[0];
  const V qs = state[4] - (g0.U * state[1] + g0.Vt * state[2] + g0.W * state[3]) + S(0.5) * u2 * state[0];
  const V q = qf - g0.U * qs;
  flux[4] = flux[4] + (S(1) / Pr - S(1)) * q;
}

template <class V>
inline V viscosity_of(const V& T, const FluxParams<scalar_t<V>>& p) {
  using std::exp;
  using std::log;
  if (p.power_law) return p.mu_ref * exp(p.exponent * log(T / p.T_ref));
  return V(p.mu_ref);
}

// Everything about one Gauss point that does not depend on the time window.
template <class V>
struct InterfaceData {
  Gaussian<V> gl, gr, g0;
  V posl[7], negl[7], posr[7], negr[7];
  V al[3][5], ar[3][5], ae[3][5];
  V Al[5], Ar[5], Ae[5];

  MomentView<V> left() const { return gl.with(posl); }
  MomentView<V> right() const { return gr.with(negr); }
};

// Builds both side Maxwellians, the interface equilibrium and all slopes.
// Inputs are conservative states and derivatives in the face frame;
// derivatives are indexed [normal, t1, t2]. Returns the validity mask.
template <class V>
inline auto prepare_interface(const V* ql, const V* qr, const V (*dl)[5], const V (*dr)[5], const V* de,
                              scalar_t<V> K, EquilibriumSlope eq_slope, InterfaceData<V>& d) {
  using S = scalar_t<V>;
  auto ok = V(S(1)) > V(S(0));
  make_gaussian(ql, K, d.gl, ok);
  make_gaussian(qr, K, d.gr, ok);
  half_moments(d.gl.U, d.gl.lam, d.gl.u, d.posl, d.negl);
  half_moments(d.gr.U, d.gr.lam, d.gr.u, d.posr, d.negr);

  V wl[5], wr[5], q0[5];
  psi_moment<0, 0, 0>(d.left(), wl);
  psi_moment<0, 0, 0>(d.right(), wr);
  for (int c = 0; c < 5; ++c) q0[c] = d.gl.rho * wl[c] + d.gr.rho * wr[c];
  make_gaussian(q0, K, d.g0, ok);

  V b[5];
  const V il = S(1) / d.gl.rho;
  const V ir = S(1) / d.gr.rho;
  const V i0 = S(1) / d.g0.rho;
  for (int k = 0; k < 3; ++k) {
    for (int c = 0; c < 5; ++c) b[c] = dl[k][c] * il;
    solve_slope(d.gl, K, b, d.al[k]);
    for (int c = 0; c < 5; ++c) b[c] = dr[k][c] * ir;
    solve_slope(d.gr, K, b, d.ar[k]);
    for (int c = 0; c < 5; ++c) {
      const V eq = (k == 0 && eq_slope == EquilibriumSlope::central) ? de[c] : S(0.5) * (dl[k][c] + dr[k][c]);
      b[c] = eq * i0;
    }
    solve_slope(d.g0, K, b, d.ae[k]);
  }
  temporal_slope(d.gl, K, d.al[0], d.al[1], d.al[2], d.Al);
  temporal_slope(d.gr, K, d.ar[0], d.ar[1], d.ar[2], d.Ar);
  temporal_slope(d.g0, K, d.ae[0], d.ae[1], d.ae[2], d.Ae);
  return ok;
}

template <class V>
inline V interface_tau(const InterfaceData<V>& d, const FluxParams<scalar_t<V>>& p) {
  using S = scalar_t<V>;
  const V T0 = S(0.5) / d.g0.lam;
  return viscosity_of(T0, p) / (d.g0.rho * T0);
}

// Flux moments (p = 1) or transported-state moments (p = 0) of one interface.
template <int p, class V>
inline void interface_basis(const InterfaceData<V>& d, FluxBasis<V>& b) {
  flux_basis<p>(d.g0, d.ae, d.Ae, d.left(), d.al, d.Al, d.right(), d.ar, d.Ar, b);
}

// Time integral of the flux over [0, delta]. `state` is the transported-state
// basis, required when Pr != 1.
template <class V>
inline void window_integral(const InterfaceData<V>& d, const FluxBasis<V>& flux, const FluxBasis<V>* state,
                            const TimeCoefficients<V>& k, scalar_t<V> Pr, V* out) {
  integrate(flux, k, d.g0.rho, d.gl.rho, d.gr.rho, out);
  if (state != nullptr) {
    V s[5];
    integrate(*state, k, d.g0.rho, d.gl.rho, d.gr.rho, s);
    prandtl_fix(d.g0, Pr, s, out);
  }
}

// One Gauss point (or one vector of them): linearised flux and its time
// derivative over a step p.dt. Returns the validity mask.
template <class V>
inline auto point_flux(const V* ql, const V* qr, const V (*dl)[5], const V (*dr)[5], const V* de,
                       const FluxParams<scalar_t<V>>& p, V* f, V* df) {
  using S = scalar_t<V>;
  InterfaceData<V> d;
  const auto ok = prepare_interface(ql, qr, dl, dr, de, p.K, p.eq_slope, d);
  const V tau = interface_tau(d, p);
  FluxBasis<V> fb;
  interface_basis<1>(d, fb);
  FluxBasis<V> sb;
  const FluxBasis<V>* state = nullptr;
  if (p.Pr != S(1)) {
    interface_basis<0>(d, sb);
    state = &sb;
  }
  TimeCoefficients<V> kh, kf;
  time_coefficient_pair(tau, p.dt, kh, kf);
  V ih[5], iF[5];
  window_integral(d, fb, state, kh, p.Pr, ih);
  window_integral(d, fb, state, kf, p.Pr, iF);
  const S inv = S(1) / p.dt;
  for (int c = 0; c < 5; ++c) {
    f[c] = (S(4) * ih[c] - iF[c]) * inv;
    df[c] = S(4) * (iF[c] - S(2) * ih[c]) * (inv * inv);
  }
  return ok;
}

// ---------------------------------------------------------------------------
// Batched kernels. Full vectors first, then the remainder one lane at a time
// with the scalar instantiation of the same code.

template <class V, class T>
inline void face_lines_chunk(const FaceLinesArgs<T>& a, std::size_t l) {
  const std::ptrdiff_t s = a.stride;
  const V scale = V(a.dscale);
  for (int c = 0; c < 5; ++c) {
    const T* base = a.q[c] + l;
    const V m3 = load<V>(base - 3 * s);
    const V m2 = load<V>(base - 2 * s);
    const V m1 = load<V>(base - s);
    const V p0 = load<V>(base);
    const V p1 = load<V>(base + s);
    const V p2 = load<V>(base + 2 * s);
    store(weno_edge(m3, m2, m1, p0, p1, a.weno), a.ql[c] + l);
    store(weno_edge(p2, p1, p0, m1, m2, a.weno), a.qr[c] + l);
    const V d = edge_derivative(m2, m1, p0, p1) * scale;
    store(d, a.dl[c] + l);
    store(d, a.dr[c] + l);
    store(d, a.de[c] + l);
  }
}

template <class V, class T>
inline void point_lines_chunk(const PointLinesArgs<T>& a, std::size_t l) {
  for (int c = 0; c < 5; ++c) {
    const V m2 = load<V>(a.in[0][c] + l);
    const V m1 = load<V>(a.in[1][c] + l);
    const V z0 = load<V>(a.in[2][c] + l);
    const V p1 = load<V>(a.in[3][c] + l);
    const V p2 = load<V>(a.in[4][c] + l);
    if (a.nonlinear) {
      store(gauss_value_weno(p2, p1, z0, m1, m2, a.weno), a.vm[c] + l);
      store(gauss_value_weno(m2, m1, z0, p1, p2, a.weno), a.vp[c] + l);
      store(-gauss_derivative(p2, p1, z0, m1, m2) * V(a.dscale_m), a.dm[c] + l);
      store(gauss_derivative(m2, m1, z0, p1, p2) * V(a.dscale_p), a.dp[c] + l);
    } else {
      store(gauss_value_linear(p2, p1, z0, m1, m2), a.vm[c] + l);
      store(gauss_value_linear(m2, m1, z0, p1, p2), a.vp[c] + l);
    }
  }
}

template <class V, class T>
inline bool flux_chunk(FluxBatchArgs<T>& a, std::size_t l) {
  V ql[5], qr[5], dl[3][5], dr[3][5], de[5], f[5], df[5];
  for (int c = 0; c < 5; ++c) {
    ql[c] = load<V>(a.ql[c] + l);
    qr[c] = load<V>(a.qr[c] + l);
    de[c] = load<V>(a.de[c] + l);
    for (int d = 0; d < 3; ++d) {
      dl[d][c] = load<V>(a.dl[d][c] + l);
      dr[d][c] = load<V>(a.dr[d][c] + l);
    }
  }
  const auto ok = point_flux(ql, qr, dl, dr, de, a.params, f, df);
  if (!all_of(ok)) {
    a.bad = l + static_cast<std::size_t>(first_false(ok));
    return false;
  }
  for (int c = 0; c < 5; ++c) {
    store(f[c], a.f[c] + l);
    store(df[c], a.df[c] + l);
  }
  return true;
}

// The including unit defines lane_t<T>: the widest vector type it targets,
// or T itself for the scalar reference build.
template <class W>
inline constexpr std::size_t width_v = [] {
  if constexpr (is_vector_v<W>) {
    return W::size();
  } else {
    return std::size_t{1};
  }
}();

template <class T>
void face_lines_impl(FaceLinesArgs<T>& a) {
  using W = lane_t<T>;
  std::size_t l = 0;
  for (; l + width_v<W> <= a.n; l += width_v<W>) face_lines_chunk<W>(a, l);
  for (; l < a.n; ++l) face_lines_chunk<T>(a, l);
}

template <class T>
void point_lines_impl(PointLinesArgs<T>& a) {
  using W = lane_t<T>;
  std::size_t l = 0;
  for (; l + width_v<W> <= a.n; l += width_v<W>) point_lines_chunk<W>(a, l);
  for (; l < a.n; ++l) point_lines_chunk<T>(a, l);
}

template <class T>
void gks_flux_impl(FluxBatchArgs<T>& a) {
  using W = lane_t<T>;
  a.bad = a.n;
  std::size_t l = 0;
  for (; l + width_v<W> <= a.n; l += width_v<W>) {
    if (!flux_chunk<W>(a, l)) return;
  }
  for (; l < a.n; ++l) {
    if (!flux_chunk<T>(a, l)) return;
  }
}

template <class T>
KernelSet<T> make_kernel_set() {
  KernelSet<T> k;
  k.face_lines = &face_lines_impl<T>;
  k.point_lines = &point_lines_impl<T>;
  k.gks_flux = &gks_flux_impl<T>;
  return k;
}
