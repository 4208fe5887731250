#include <cmath>
#include <cstddef>
#include <experimental/simd>
#include <type_traits>

#include "hgks/kernels.hpp"
#include "kernels_isa.hpp"

namespace hgks::isa_avx512 {

template <class T>
using lane_t = std::experimental::native_simd<T>;

#include "generic.inl"

}  // namespace hgks::isa_avx512

namespace hgks::detail {

void fill_avx512(KernelTable& t) {
  t.isa = Isa::avx512;
  t.lanes_fp64 = static_cast<int>(std::experimental::native_simd<double>::size());
  t.f32 = isa_avx512::make_kernel_set<float>();
  t.f64 = isa_avx512::make_kernel_set<double>();
}

}  // namespace hgks::detail
