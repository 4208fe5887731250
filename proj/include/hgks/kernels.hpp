#pragma once

// Batched numeric kernels behind a runtime-selected instruction-set table.
//
// All arrays are structure-of-arrays rows; lane l of a batch lives at
// pointer[l]. Every kernel is lane-independent, so a row can be split into
// chunks of any size without changing a single bit of the result.

#include <cstddef>
#include <string>

namespace hgks {

enum class WenoKind : int { z = 0, js = 1 };

/// How the normal derivative of the equilibrium state at a face is formed.
enum class EquilibriumSlope : int { central = 0, side_average = 1 };

enum class Isa : int { scalar = 0, avx2 = 1, avx512 = 2 };

std::string to_string(Isa isa);
Isa isa_from_string(const std::string& name);

/// Normal reconstruction along lines crossing a family of faces.
///
/// Stencil cell m (m = -3..2, face between m = -1 and m = 0) of component c
/// and lane l is q[c][m * stride + l]. Writes left/right face values, the
/// left/right normal derivatives and the equilibrium normal derivative.
template <class T>
struct FaceLinesArgs {
  const T* q[5] = {};
  std::ptrdiff_t stride = 0;
  std::size_t n = 0;
  T dscale = 1;  // converts d/d(index) into a physical derivative
  WenoKind weno = WenoKind::z;
  T* ql[5] = {};
  T* qr[5] = {};
  T* dl[5] = {};
  T* dr[5] = {};
  T* de[5] = {};
};

/// Tangential reconstruction at the two Gauss points of a cell.
///
/// Stencil cell m (m = -2..2) of component c and lane l is in[m + 2][c][l].
/// With nonlinear = true, values use WENO weights and derivatives are written;
/// otherwise only linear point values are produced.
template <class T>
struct PointLinesArgs {
  const T* in[5][5] = {};
  std::size_t n = 0;
  bool nonlinear = false;
  WenoKind weno = WenoKind::z;
  T dscale_m = 1;  // derivative scale at the lower Gauss point
  T dscale_p = 1;  // derivative scale at the upper Gauss point
  T* vm[5] = {};
  T* vp[5] = {};
  T* dm[5] = {};
  T* dp[5] = {};
};

template <class T>
struct FluxParams {
  T K = 2;
  T Pr = 1;
  bool power_law = false;
  T mu_ref = 0;
  T T_ref = 1;
  T exponent = 0.7;
  T dt = 0;
  EquilibriumSlope eq_slope = EquilibriumSlope::central;
};

/// Gauss-point flux batch, all quantities in the face frame (normal, t1, t2).
///
/// Outputs the linearised flux F and its time derivative dF for a step dt.
/// `bad` receives the first lane with an invalid left, right or interface
/// state, or n if every lane is valid.
template <class T>
struct FluxBatchArgs {
  std::size_t n = 0;
  const T* ql[5] = {};
  const T* qr[5] = {};
  const T* dl[3][5] = {};
  const T* dr[3][5] = {};
  const T* de[5] = {};
  FluxParams<T> params;
  T* f[5] = {};
  T* df[5] = {};
  std::size_t bad = 0;
};

template <class T>
struct KernelSet {
  void (*face_lines)(FaceLinesArgs<T>&) = nullptr;
  void (*point_lines)(PointLinesArgs<T>&) = nullptr;
  void (*gks_flux)(FluxBatchArgs<T>&) = nullptr;
};

struct KernelTable {
  Isa isa = Isa::scalar;
  int lanes_fp64 = 1;
  KernelSet<float> f32;
  KernelSet<double> f64;

  template <class T>
  const KernelSet<T>& get() const {
    if constexpr (sizeof(T) == 4) {
      return f32;
    } else {
      return f64;
    }
  }
};

/// Best instruction set supported by this CPU and compiled into the binary.
Isa detect_isa();

/// Kernel table for a given instruction set. Throws ConfigError if the CPU
/// cannot execute it.
const KernelTable& kernels(Isa isa);

/// Kernel table chosen from the HGKS_ISA environment variable or, if unset,
/// detect_isa().
const KernelTable& default_kernels();

bool isa_supported(Isa isa);

}  // namespace hgks
