#pragma once

#include <cstddef>
#include <vector>

#include "hgks/field.hpp"
#include "hgks/gas.hpp"
#include "hgks/kernels.hpp"
#include "hgks/mesh.hpp"

namespace hgks {

struct OperatorOptions {
  WenoKind weno = WenoKind::z;
  EquilibriumSlope eq_slope = EquilibriumSlope::central;
};

template <class T>
FluxParams<T> flux_params_as(const GasModel& gm, double dt, EquilibriumSlope eq);

/// Finite-volume residual of the gas-kinetic scheme on one x-slab.
///
/// For each owned cell, L = -(1/|cell|) * sum over faces of the Gauss-weighted
/// linearised flux F(t_n), and dL the same sum over dF. Faces are handled
/// direction by direction: a normal WENO pass along the face-normal lines,
/// then two tangential passes that place values and tangential derivatives at
/// the 2x2 Gauss points. Contributions are added per cell in the fixed order
/// x, y, z with faces ascending, so a slab produces the same bits no matter
/// how the global domain is split.
template <class T>
class FluxOperator {
 public:
  /// Owned slab covers global x-slices [i0, i0 + nxl).
  FluxOperator(const Mesh& mesh, int i0, int nxl, const GasModel& gm, OperatorOptions opt,
               const KernelSet<T>& kernels);

  /// Ghost layers of q must be current. L may be null when only dL is needed.
  void apply(const Field<T>& q, double dt, CellArray<T>* L, CellArray<T>& dL);

  Extent extent() const { return ext_; }
  std::size_t scratch_bytes() const;

 private:
  struct Rows {
    std::vector<T> v;
    std::size_t n = 0;
    void resize(std::size_t size) {
      n = size;
      v.assign(5 * size, T(0));
    }
    T* operator[](int c) { return v.data() + c * n; }
  };
  struct Stage {
    Rows ql, qr, d;
  };
  // Output of the first tangential pass: values at the two Gauss points and,
  // for the side states, the derivatives along that direction.
  struct Tangential {
    Rows vl[2], vr[2], tl[2], tr[2], d[2];
    void resize(std::size_t n);
  };
  struct Batch {
    Rows ql, qr, d, dl1, dl2, dr1, dr2, f, df;
    void resize(std::size_t n);
  };

  void x_faces(const Field<T>& q, T dt, CellArray<T>* L, CellArray<T>& dL);
  void yz_faces(const Field<T>& q, T dt, CellArray<T>* L, CellArray<T>& dL);
  void stage_y(const Field<T>& q, int s, Stage& out);
  void stage_z(const Field<T>& q, int s, Stage& out);
  void first_pass(Stage* const (&st)[5], std::ptrdiff_t off0, std::ptrdiff_t step, std::size_t n, T sm, T sp,
                  Tangential& out);
  void second_pass(Tangential& t, std::ptrdiff_t off0, std::ptrdiff_t step, std::size_t n, T sm, T sp);
  std::size_t run_flux(std::size_t n, const int (&perm)[5], T dt);

  Mesh mesh_;
  int i0_ = 0;
  Extent ext_;
  GasModel gm_;
  OperatorOptions opt_;
  KernelSet<T> k_;
  YGeometry ygeo_;

  Stage xs_;
  Tangential xt_;
  Stage yring_[5], zring_[5];
  Tangential yt_, zt_;
  Batch batch_;
  Rows sum_f_, sum_df_;
};

extern template class FluxOperator<float>;
extern template class FluxOperator<double>;

}  // namespace hgks
