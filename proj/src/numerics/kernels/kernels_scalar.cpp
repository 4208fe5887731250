#include <cmath>
#include <cstddef>
#include <experimental/simd>
#include <type_traits>

#include "hgks/kernels.hpp"
#include "kernels_isa.hpp"

namespace hgks::isa_scalar {

template <class T>
using lane_t = T;

#include "generic.inl"

}  // namespace hgks::isa_scalar

namespace hgks::detail {

void fill_scalar(KernelTable& t) {
  t.isa = Isa::scalar;
  t.lanes_fp64 = 1;
  t.f32 = isa_scalar::make_kernel_set<float>();
  t.f64 = isa_scalar::make_kernel_set<double>();
}

}  // namespace hgks::detail
