#pragma once

#include "hgks/kernels.hpp"

namespace hgks::detail {

void fill_scalar(KernelTable& t);
void fill_avx2(KernelTable& t);
void fill_avx512(KernelTable& t);

}  // namespace hgks::detail
