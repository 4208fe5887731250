#include "hgks/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace hgks {

template <class T>
void stage_update(Field<T>& out, const Field<T>& q, const CellArray<T>& L, const CellArray<T>& dL, double dt) {
  const Extent e = q.extent();
  const T a = static_cast<T>(dt / 2), b = static_cast<T>(dt * dt / 8);
  for (int c = 0; c < 5; ++c) {
    const T* src = q.data(c);
    T* dst = out.data(c);
    const T* l = L.data(c);
    const T* dl = dL.data(c);
    for (int i = 0; i < e.nx; ++i)
      for (int j = 0; j < e.ny; ++j) {
        const auto n = q.index(i, j, 0);
        const auto m = L.index(i, j, 0);
        for (int k = 0; k < e.nz; ++k) dst[n + k] = src[n + k] + a * l[m + k] + b * dl[m + k];
      }
  }
}

template <class T>
void final_update(Field<T>& q, const CellArray<T>& L, const CellArray<T>& dL, const CellArray<T>& dLs, double dt) {
  const Extent e = q.extent();
  const T a = static_cast<T>(dt), b = static_cast<T>(dt * dt / 6);
  for (int c = 0; c < 5; ++c) {
    T* dst = q.data(c);
    const T* l = L.data(c);
    const T* dl = dL.data(c);
    const T* dls = dLs.data(c);
    for (int i = 0; i < e.nx; ++i)
      for (int j = 0; j < e.ny; ++j) {
        const auto n = q.index(i, j, 0);
        const auto m = L.index(i, j, 0);
        for (int k = 0; k < e.nz; ++k) dst[n + k] = dst[n + k] + a * l[m + k] + b * (dl[m + k] + T(2) * dls[m + k]);
      }
  }
}

template <class T>
double local_dt_bound(const Field<T>& q, const Mesh& mesh, int i0, const GasModel& gm) {
  const Extent e = q.extent();
  constexpr double D = 3;
  double bound = std::numeric_limits<double>::infinity();
  for (int j = 0; j < e.ny; ++j) {
    const double h = std::min({mesh.dx(), mesh.dy(j), mesh.dz()});
    for (int i = 0; i < e.nx; ++i)
      for (int k = 0; k < e.nz; ++k) {
        const auto v = q.get(i, j, k);
        const CellIndex at{i0 + i, j, k};
        const auto w = cons_to_prim(ConsState<double>{v[0], v[1], v[2], v[3], v[4]}, gm, at);
        const double c = sound_speed(w.rho, w.p, gm.gamma);
        const double conv = h / (std::abs(w.U) + std::abs(w.V) + std::abs(w.W) + c);
        const double mu = viscosity(w.p / w.rho, gm);
        const double visc = mu > 0 ? h * h * w.rho / (2 * mu * D) : conv;
        bound = std::min({bound, conv, visc});
      }
  }
  return bound;
}

std::int64_t fixed_step_count(double t_end, double dt) {
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("fixed time step must be positive and finite");
  // Tolerate rounding in t_end / dt so that an exact multiple is not padded.
  return static_cast<std::int64_t>(std::ceil(t_end / dt * (1 - 1e-12)));
}

double next_dt(const TimeStepControl& ctl, double cfl_bound, double t, double t_end, double t_stop) {
  double dt = ctl.mode == DtMode::fixed ? ctl.dt_fixed : ctl.cfl * cfl_bound;
  if (!(dt > 0) || !std::isfinite(dt)) throw InvalidStateError("time step is not positive and finite");
  if (ctl.mode == DtMode::cfl && t_stop > t && t + dt > t_stop) dt = t_stop - t;
  const double rest = t_end - t;
  if (dt >= rest * (1 - 1e-12)) dt = rest;
  return dt;
}

template <class T>
Stepper<T>::Stepper(const Mesh& mesh, int i0, int nxl, const GasModel& gm, OperatorOptions opt,
                    const KernelSet<T>& kernels)
    : op_(mesh, i0, nxl, gm, opt, kernels),
      qs_(op_.extent()),
      L_(op_.extent()),
      dL_(op_.extent()),
      dLs_(op_.extent()) {}

template <class T>
void Stepper<T>::step(Field<T>& q, double dt, const GhostFill& fill, const Agreement& agree) {
  // Runs one operator evaluation and settles its outcome with the group.
  const auto evaluate = [&](auto&& body) {
    std::exception_ptr err;
    try {
      body();
    } catch (const InvalidStateError&) {
      err = std::current_exception();
    }
    const bool all_ok = agree ? agree(err == nullptr) : err == nullptr;
    if (err) std::rethrow_exception(err);
    if (!all_ok) throw InvalidStateError("step failed on another worker");
  };
  fill(q);
  evaluate([&] { op_.apply(q, dt, &L_, dL_); });
  stage_update(qs_, q, L_, dL_, dt);
  fill(qs_);
  evaluate([&] { op_.apply(qs_, dt, nullptr, dLs_); });
  final_update(q, L_, dL_, dLs_, dt);
}

template <class T>
std::size_t Stepper<T>::bytes() const {
  return op_.scratch_bytes() + qs_.bytes() + L_.bytes() + dL_.bytes() + dLs_.bytes();
}

template void stage_update<float>(Field<float>&, const Field<float>&, const CellArray<float>&,
                                  const CellArray<float>&, double);
template void stage_update<double>(Field<double>&, const Field<double>&, const CellArray<double>&,
                                   const CellArray<double>&, double);
template void final_update<float>(Field<float>&, const CellArray<float>&, const CellArray<float>&,
                                  const CellArray<float>&, double);
template void final_update<double>(Field<double>&, const CellArray<double>&, const CellArray<double>&,
                                   const CellArray<double>&, double);
template double local_dt_bound<float>(const Field<float>&, const Mesh&, int, const GasModel&);
template double local_dt_bound<double>(const Field<double>&, const Mesh&, int, const GasModel&);
template class Stepper<float>;
template class Stepper<double>;

}  // namespace hgks
