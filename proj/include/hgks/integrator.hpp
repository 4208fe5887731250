#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "hgks/field.hpp"
#include "hgks/gas.hpp"
#include "hgks/mesh.hpp"
#include "hgks/operator.hpp"

namespace hgks {

/// Two-stage fourth-order step for any state type with vector-space
/// operators. `op(q)` returns the pair (L, dL).
///   Q*      = Q + dt/2 L(Q) + dt^2/8 dL(Q)
///   Q^{n+1} = Q + dt L(Q) + dt^2/6 (dL(Q) + 2 dL(Q*))
template <class Q, class Op>
Q two_stage_step(const Q& q, double dt, Op&& op) {
  const auto [L, dL] = op(q);
  const Q qs = q + (dt / 2) * L + (dt * dt / 8) * dL;
  const auto [Ls, dLs] = op(qs);
  return q + dt * L + (dt * dt / 6) * (dL + 2.0 * dLs);
}

/// Q* over the owned cells; ghosts of `out` are left for the caller to fill.
template <class T>
void stage_update(Field<T>& out, const Field<T>& q, const CellArray<T>& L, const CellArray<T>& dL, double dt);

/// In-place final update of the owned cells.
template <class T>
void final_update(Field<T>& q, const CellArray<T>& L, const CellArray<T>& dL, const CellArray<T>& dLs, double dt);

enum class DtMode { cfl, fixed };

struct TimeStepControl {
  DtMode mode = DtMode::cfl;
  double cfl = 0.4;
  double dt_fixed = 0.0;
};

/// min over owned cells of min(dx_min / (|U|+|V|+|W|+c), dx_min^2 rho / (2 mu D)),
/// D = 3, before the CFL factor. Throws InvalidStateError on a bad cell.
template <class T>
double local_dt_bound(const Field<T>& q, const Mesh& mesh, int i0, const GasModel& gm);

/// Number of steps a fixed-dt schedule takes to reach t_end; the last step
/// is shortened to land on t_end.
std::int64_t fixed_step_count(double t_end, double dt);

/// Length of the next step: never past t_end, and in CFL mode clipped to
/// land on `t_stop` (the next output time) when it is closer.
double next_dt(const TimeStepControl& ctl, double cfl_bound, double t, double t_end, double t_stop);

/// Storage and sequencing of one two-stage step on a slab. `fill` must make
/// every ghost layer of its argument current (boundary fill plus halo
/// exchange); it is called once before each operator evaluation.
///
/// `agree` is called after each operator evaluation with the local outcome
/// and returns whether every worker succeeded. When any evaluation fails the
/// step throws InvalidStateError and the state is left untouched, on every
/// worker, provided all workers pass the same agreement.
template <class T>
class Stepper {
 public:
  using GhostFill = std::function<void(Field<T>&)>;
  using Agreement = std::function<bool(bool)>;

  Stepper(const Mesh& mesh, int i0, int nxl, const GasModel& gm, OperatorOptions opt, const KernelSet<T>& kernels);

  void step(Field<T>& q, double dt, const GhostFill& fill, const Agreement& agree = {});

  FluxOperator<T>& op() { return op_; }
  /// Bytes of every precision-typed array this stepper owns.
  std::size_t bytes() const;

 private:
  FluxOperator<T> op_;
  Field<T> qs_;
  CellArray<T> L_, dL_, dLs_;
};

extern template class Stepper<float>;
extern template class Stepper<double>;

}  // namespace hgks
