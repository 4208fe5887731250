#include "hgks/operator.hpp"

#include <string>

namespace hgks {

template <class T>
FluxParams<T> flux_params_as(const GasModel& gm, double dt, EquilibriumSlope eq) {
  FluxParams<T> p;
  p.K = static_cast<T>(gm.K);
  p.Pr = static_cast<T>(gm.Pr);
  p.power_law = gm.law == ViscosityLaw::power;
  p.mu_ref = static_cast<T>(gm.mu_ref);
  p.T_ref = static_cast<T>(gm.T_ref);
  p.exponent = static_cast<T>(gm.exponent);
  p.dt = static_cast<T>(dt);
  p.eq_slope = eq;
  return p;
}

template FluxParams<float> flux_params_as<float>(const GasModel&, double, EquilibriumSlope);
template FluxParams<double> flux_params_as<double>(const GasModel&, double, EquilibriumSlope);

namespace {

// Face frames: component c of the frame is global component perm[c].
constexpr int kFrameX[5] = {0, 1, 2, 3, 4};
constexpr int kFrameY[5] = {0, 2, 1, 3, 4};
constexpr int kFrameZ[5] = {0, 3, 1, 2, 4};

}  // namespace

template <class T>
void FluxOperator<T>::Tangential::resize(std::size_t n) {
  for (int g = 0; g < 2; ++g) {
    vl[g].resize(n);
    vr[g].resize(n);
    tl[g].resize(n);
    tr[g].resize(n);
    d[g].resize(n);
  }
}

template <class T>
void FluxOperator<T>::Batch::resize(std::size_t n) {
  for (Rows* r : {&ql, &qr, &d, &dl1, &dl2, &dr1, &dr2, &f, &df}) r->resize(n);
}

template <class T>
FluxOperator<T>::FluxOperator(const Mesh& mesh, int i0, int nxl, const GasModel& gm, OperatorOptions opt,
                              const KernelSet<T>& kernels)
    : mesh_(mesh), i0_(i0), ext_{nxl, mesh.ny, mesh.nz}, gm_(gm), opt_(opt), k_(kernels), ygeo_(mesh) {
  mesh_.validate();
  if (nxl < 1) throw ConfigError("operator slab needs at least one x-slice");
  const std::size_t ny = mesh.ny, nz = mesh.nz;
  const std::size_t ks = nz + 2 * kGhost;
  for (Rows* r : {&xs_.ql, &xs_.qr, &xs_.d}) r->resize((ny + 4) * ks);
  xt_.resize(nz + 4);
  for (auto& st : yring_)
    for (Rows* r : {&st.ql, &st.qr, &st.d}) r->resize((ny + 1) * (nz + 4));
  for (auto& st : zring_)
    for (Rows* r : {&st.ql, &st.qr, &st.d}) r->resize((ny + 4) * (nz + 1));
  yt_.resize((ny + 1) * (nz + 4));
  zt_.resize((ny + 4) * (nz + 1));
  batch_.resize(4 * (nz + 1));
  sum_f_.resize(nz + 1);
  sum_df_.resize(nz + 1);
}

template <class T>
std::size_t FluxOperator<T>::scratch_bytes() const {
  std::size_t b = 0;
  auto add = [&](const Rows& r) { b += r.v.size() * sizeof(T); };
  auto add_stage = [&](const Stage& s) {
    add(s.ql);
    add(s.qr);
    add(s.d);
  };
  auto add_tan = [&](const Tangential& t) {
    for (int g = 0; g < 2; ++g)
      for (const Rows* r : {&t.vl[g], &t.vr[g], &t.tl[g], &t.tr[g], &t.d[g]}) add(*r);
  };
  add_stage(xs_);
  add_tan(xt_);
  for (const auto& s : yring_) add_stage(s);
  for (const auto& s : zring_) add_stage(s);
  add_tan(yt_);
  add_tan(zt_);
  for (const Rows* r : {&batch_.ql, &batch_.qr, &batch_.d, &batch_.dl1, &batch_.dl2, &batch_.dr1, &batch_.dr2,
                        &batch_.f, &batch_.df})
    add(*r);
  add(sum_f_);
  add(sum_df_);
  return b;
}

template <class T>
void FluxOperator<T>::apply(const Field<T>& q, double dt, CellArray<T>* L, CellArray<T>& dL) {
  if (!(q.extent() == ext_) || !(dL.extent() == ext_) || (L && !(L->extent() == ext_)))
    throw std::invalid_argument("operator block extents do not match");
  if (!(dt > 0)) throw std::invalid_argument("time step must be positive");
  if (L) L->fill(T(0));
  dL.fill(T(0));
  x_faces(q, static_cast<T>(dt), L, dL);
  yz_faces(q, static_cast<T>(dt), L, dL);
}

template <class T>
void FluxOperator<T>::first_pass(Stage* const (&st)[5], std::ptrdiff_t off0, std::ptrdiff_t step, std::size_t n,
                                 T sm, T sp, Tangential& out) {
  auto run = [&](Rows Stage::*src, Rows* v, Rows* d, bool nonlinear) {
    PointLinesArgs<T> a;
    for (int m = 0; m < 5; ++m)
      for (int c = 0; c < 5; ++c) a.in[m][c] = (st[m]->*src)[c] + off0 + m * step;
    a.n = n;
    a.nonlinear = nonlinear;
    a.weno = opt_.weno;
    a.dscale_m = sm;
    a.dscale_p = sp;
    for (int c = 0; c < 5; ++c) {
      a.vm[c] = v[0][c];
      a.vp[c] = v[1][c];
      if (d) {
        a.dm[c] = d[0][c];
        a.dp[c] = d[1][c];
      }
    }
    k_.point_lines(a);
  };
  run(&Stage::ql, out.vl, out.tl, true);
  run(&Stage::qr, out.vr, out.tr, true);
  run(&Stage::d, out.d, nullptr, false);
}

template <class T>
void FluxOperator<T>::second_pass(Tangential& t, std::ptrdiff_t off0, std::ptrdiff_t step, std::size_t n, T sm,
                                  T sp) {
  Batch& b = batch_;
  for (int g1 = 0; g1 < 2; ++g1) {
    auto run = [&](Rows& src, Rows& v, Rows* d, bool nonlinear) {
      PointLinesArgs<T> a;
      for (int m = 0; m < 5; ++m)
        for (int c = 0; c < 5; ++c) a.in[m][c] = src[c] + off0 + m * step;
      a.n = n;
      a.nonlinear = nonlinear;
      a.weno = opt_.weno;
      a.dscale_m = sm;
      a.dscale_p = sp;
      for (int c = 0; c < 5; ++c) {
        a.vm[c] = v[c] + (2 * g1) * n;
        a.vp[c] = v[c] + (2 * g1 + 1) * n;
        if (d) {
          a.dm[c] = (*d)[c] + (2 * g1) * n;
          a.dp[c] = (*d)[c] + (2 * g1 + 1) * n;
        }
      }
      k_.point_lines(a);
    };
    run(t.vl[g1], b.ql, &b.dl2, true);
    run(t.tl[g1], b.dl1, nullptr, false);
    run(t.vr[g1], b.qr, &b.dr2, true);
    run(t.tr[g1], b.dr1, nullptr, false);
    run(t.d[g1], b.d, nullptr, false);
  }
}

template <class T>
std::size_t FluxOperator<T>::run_flux(std::size_t n, const int (&perm)[5], T dt) {
  Batch& b = batch_;
  FluxBatchArgs<T> a;
  a.n = n;
  for (int c = 0; c < 5; ++c) {
    const int g = perm[c];
    a.ql[c] = b.ql[g];
    a.qr[c] = b.qr[g];
    a.dl[0][c] = b.d[g];
    a.dl[1][c] = b.dl1[g];
    a.dl[2][c] = b.dl2[g];
    a.dr[0][c] = b.d[g];
    a.dr[1][c] = b.dr1[g];
    a.dr[2][c] = b.dr2[g];
    a.de[c] = b.d[g];
    a.f[c] = b.f[g];
    a.df[c] = b.df[g];
  }
  a.params = flux_params_as<T>(gm_, dt, opt_.eq_slope);
  k_.gks_flux(a);
  return a.bad;
}

template <class T>
void FluxOperator<T>::x_faces(const Field<T>& q, T dt, CellArray<T>* L, CellArray<T>& dL) {
  const int nxl = ext_.nx, ny = ext_.ny, nz = ext_.nz;
  const std::ptrdiff_t ks = q.stride_y();
  const std::size_t nb = 4 * static_cast<std::size_t>(nz);
  const T inv_dx = static_cast<T>(1.0 / mesh_.dx());
  const T inv_dz = static_cast<T>(1.0 / mesh_.dz());
  Stage* const st[5] = {&xs_, &xs_, &xs_, &xs_, &xs_};
  for (int f = 0; f <= nxl; ++f) {
    FaceLinesArgs<T> a;
    for (int c = 0; c < 5; ++c) {
      a.q[c] = q.data(c) + q.index(f, -2, -3);
      a.ql[c] = xs_.ql[c];
      a.qr[c] = xs_.qr[c];
      a.dl[c] = a.dr[c] = a.de[c] = xs_.d[c];
    }
    a.stride = q.stride_x();
    a.n = static_cast<std::size_t>(ny + 4) * ks;
    a.dscale = inv_dx;
    a.weno = opt_.weno;
    k_.face_lines(a);

    for (int j = 0; j < ny; ++j) {
      first_pass(st, j * ks + 1, ks, nz + 4, static_cast<T>(ygeo_.gauss_scale[2 * j]),
                 static_cast<T>(ygeo_.gauss_scale[2 * j + 1]), xt_);
      second_pass(xt_, 0, 1, nz, inv_dz, inv_dz);
      const std::size_t bad = run_flux(nb, kFrameX, dt);
      if (bad < nb)
        throw InvalidStateError("invalid reconstructed state at an x-face",
                                CellIndex{i0_ + f, j, static_cast<std::int64_t>(bad % nz)});
      const T wm = static_cast<T>(0.5 * ygeo_.gauss_weight[2 * j]);
      const T wp = static_cast<T>(0.5 * ygeo_.gauss_weight[2 * j + 1]);
      const T w[4] = {wm, wm, wp, wp};
      for (int c = 0; c < 5; ++c) {
        const T* F = batch_.f[c];
        const T* dF = batch_.df[c];
        for (int k = 0; k < nz; ++k) {
          const T s = w[0] * F[k] + w[1] * F[nz + k] + w[2] * F[2 * nz + k] + w[3] * F[3 * nz + k];
          const T ds = w[0] * dF[k] + w[1] * dF[nz + k] + w[2] * dF[2 * nz + k] + w[3] * dF[3 * nz + k];
          if (f > 0) {
            if (L) (*L)(c, f - 1, j, k) -= s * inv_dx;
            dL(c, f - 1, j, k) -= ds * inv_dx;
          }
          if (f < nxl) {
            if (L) (*L)(c, f, j, k) += s * inv_dx;
            dL(c, f, j, k) += ds * inv_dx;
          }
        }
      }
    }
  }
}

template <class T>
void FluxOperator<T>::stage_y(const Field<T>& q, int s, Stage& out) {
  const int ny = ext_.ny, nz = ext_.nz;
  const std::size_t w = nz + 4;
  for (int jf = 0; jf <= ny; ++jf) {
    FaceLinesArgs<T> a;
    for (int c = 0; c < 5; ++c) {
      a.q[c] = q.data(c) + q.index(s, jf, -2);
      a.ql[c] = out.ql[c] + jf * w;
      a.qr[c] = out.qr[c] + jf * w;
      a.dl[c] = a.dr[c] = a.de[c] = out.d[c] + jf * w;
    }
    a.stride = q.stride_y();
    a.n = w;
    a.dscale = static_cast<T>(ygeo_.face_scale[jf]);
    a.weno = opt_.weno;
    k_.face_lines(a);
  }
}

template <class T>
void FluxOperator<T>::stage_z(const Field<T>& q, int s, Stage& out) {
  const int ny = ext_.ny, nz = ext_.nz;
  const std::size_t w = nz + 1;
  for (int j = -2; j < ny + 2; ++j) {
    FaceLinesArgs<T> a;
    const std::size_t row = (j + 2) * w;
    for (int c = 0; c < 5; ++c) {
      a.q[c] = q.data(c) + q.index(s, j, 0);
      a.ql[c] = out.ql[c] + row;
      a.qr[c] = out.qr[c] + row;
      a.dl[c] = a.dr[c] = a.de[c] = out.d[c] + row;
    }
    a.stride = 1;
    a.n = w;
    a.dscale = static_cast<T>(1.0 / mesh_.dz());
    a.weno = opt_.weno;
    k_.face_lines(a);
  }
}

template <class T>
void FluxOperator<T>::yz_faces(const Field<T>& q, T dt, CellArray<T>* L, CellArray<T>& dL) {
  const int nxl = ext_.nx, ny = ext_.ny, nz = ext_.nz;
  const std::size_t wy = nz + 4, wz = nz + 1;
  const T inv_dx = static_cast<T>(1.0 / mesh_.dx());
  const T inv_dz = static_cast<T>(1.0 / mesh_.dz());
  auto slot = [](int s) { return (s + 2) % 5; };
  for (int s = -2; s < 2; ++s) {
    stage_y(q, s, yring_[slot(s)]);
    stage_z(q, s, zring_[slot(s)]);
  }
  for (int i = 0; i < nxl; ++i) {
    stage_y(q, i + 2, yring_[slot(i + 2)]);
    stage_z(q, i + 2, zring_[slot(i + 2)]);
    Stage* sy[5];
    Stage* sz[5];
    for (int m = 0; m < 5; ++m) {
      sy[m] = &yring_[slot(i - 2 + m)];
      sz[m] = &zring_[slot(i - 2 + m)];
    }

    // y-faces: tangential passes in x, then z
    first_pass(sy, 0, 0, (ny + 1) * wy, inv_dx, inv_dx, yt_);
    const std::size_t nby = 4 * static_cast<std::size_t>(nz);
    for (int jf = 0; jf <= ny; ++jf) {
      second_pass(yt_, jf * wy, 1, nz, inv_dz, inv_dz);
      const std::size_t bad = run_flux(nby, kFrameY, dt);
      if (bad < nby)
        throw InvalidStateError("invalid reconstructed state at a y-face",
                                CellIndex{i0_ + i, jf, static_cast<std::int64_t>(bad % nz)});
      const T w = static_cast<T>(0.25);
      const T inv_lo = jf > 0 ? static_cast<T>(ygeo_.inv_dy[jf - 1]) : T(0);
      const T inv_hi = jf < ny ? static_cast<T>(ygeo_.inv_dy[jf]) : T(0);
      for (int c = 0; c < 5; ++c) {
        const T* F = batch_.f[c];
        const T* dF = batch_.df[c];
        for (int k = 0; k < nz; ++k) {
          const T s = w * F[k] + w * F[nz + k] + w * F[2 * nz + k] + w * F[3 * nz + k];
          const T ds = w * dF[k] + w * dF[nz + k] + w * dF[2 * nz + k] + w * dF[3 * nz + k];
          if (jf > 0) {
            if (L) (*L)(c, i, jf - 1, k) -= s * inv_lo;
            dL(c, i, jf - 1, k) -= ds * inv_lo;
          }
          if (jf < ny) {
            if (L) (*L)(c, i, jf, k) += s * inv_hi;
            dL(c, i, jf, k) += ds * inv_hi;
          }
        }
      }
    }

    // z-faces: tangential passes in x, then y
    first_pass(sz, 0, 0, (ny + 4) * wz, inv_dx, inv_dx, zt_);
    const std::size_t nbz = 4 * wz;
    for (int j = 0; j < ny; ++j) {
      second_pass(zt_, j * wz, wz, wz, static_cast<T>(ygeo_.gauss_scale[2 * j]),
                  static_cast<T>(ygeo_.gauss_scale[2 * j + 1]));
      const std::size_t bad = run_flux(nbz, kFrameZ, dt);
      if (bad < nbz)
        throw InvalidStateError("invalid reconstructed state at a z-face",
                                CellIndex{i0_ + i, j, static_cast<std::int64_t>(bad % wz)});
      const T wm = static_cast<T>(0.5 * ygeo_.gauss_weight[2 * j]);
      const T wp = static_cast<T>(0.5 * ygeo_.gauss_weight[2 * j + 1]);
      const T w[4] = {wm, wp, wm, wp};
      for (int c = 0; c < 5; ++c) {
        const T* F = batch_.f[c];
        const T* dF = batch_.df[c];
        for (std::size_t kf = 0; kf < wz; ++kf) {
          const T s = w[0] * F[kf] + w[1] * F[wz + kf] + w[2] * F[2 * wz + kf] + w[3] * F[3 * wz + kf];
          const T ds = w[0] * dF[kf] + w[1] * dF[wz + kf] + w[2] * dF[2 * wz + kf] + w[3] * dF[3 * wz + kf];
          const int k = static_cast<int>(kf);
          if (k > 0) {
            if (L) (*L)(c, i, j, k - 1) -= s * inv_dz;
            dL(c, i, j, k - 1) -= ds * inv_dz;
          }
          if (k < nz) {
            if (L) (*L)(c, i, j, k) += s * inv_dz;
            dL(c, i, j, k) += ds * inv_dz;
          }
        }
      }
    }
  }
}

template class FluxOperator<float>;
template class FluxOperator<double>;

}  // namespace hgks
