#include <cstdlib>
#include <string>

#include "hgks/common.hpp"
#include "hgks/kernels.hpp"
#include "kernels_isa.hpp"

namespace hgks {

std::string to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
    case Isa::avx512:
      return "avx512";
  }
  return "unknown";
}

Isa isa_from_string(const std::string& name) {
  if (name == "scalar") return Isa::scalar;
  if (name == "avx2") return Isa::avx2;
  if (name == "avx512") return Isa::avx512;
  throw ConfigError("unknown kernel instruction set '" + name + "' (expected scalar, avx2 or avx512)");
}

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    case Isa::avx512:
      return __builtin_cpu_supports("avx512f") && __builtin_cpu_supports("avx512dq") &&
             __builtin_cpu_supports("avx512vl") && __builtin_cpu_supports("avx512bw");
  }
  return false;
}

Isa detect_isa() {
  if (isa_supported(Isa::avx512)) return Isa::avx512;
  if (isa_supported(Isa::avx2)) return Isa::avx2;
  return Isa::scalar;
}

const KernelTable& kernels(Isa isa) {
  if (!isa_supported(isa)) throw ConfigError("this CPU cannot run the " + to_string(isa) + " kernels");
  // Each table is filled by code compiled for its own instruction set, so
  // only build the ones this CPU can run.
  switch (isa) {
    case Isa::avx512: {
      static const KernelTable t = [] {
        KernelTable k;
        detail::fill_avx512(k);
        return k;
      }();
      return t;
    }
    case Isa::avx2: {
      static const KernelTable t = [] {
        KernelTable k;
        detail::fill_avx2(k);
        return k;
      }();
      return t;
    }
    case Isa::scalar:
      break;
  }
  static const KernelTable t = [] {
    KernelTable k;
    detail::fill_scalar(k);
    return k;
  }();
  return t;
}

const KernelTable& default_kernels() {
  if (const char* env = std::getenv("HGKS_ISA"); env != nullptr && *env != '\0') {
    return kernels(isa_from_string(env));
  }
  return kernels(detect_isa());
}

}  // namespace hgks
