#include "conjlab/simd/kernels.hpp"

#include <cstdlib>
#include <string>

namespace conjlab::simd {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &scalar_kernels();
    case Isa::kAvx2:
#if defined(CONJLAB_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2_kernels();
#endif
      return nullptr;
    case Isa::kNeon:
#if defined(CONJLAB_HAVE_NEON)
      return &neon_kernels();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

namespace {

const KernelTable& select() {
  const char* env = std::getenv("CONJLAB_SIMD");
  const std::string request = env ? env : "auto";
  if (request == "scalar") return scalar_kernels();
  if (request == "avx2") {
    const KernelTable* t = table_for(Isa::kAvx2);
    return t ? *t : scalar_kernels();
  }
  if (request == "neon") {
    const KernelTable* t = table_for(Isa::kNeon);
    return t ? *t : scalar_kernels();
  }
  for (Isa isa : {Isa::kAvx2, Isa::kNeon}) {
    if (const KernelTable* t = table_for(isa)) return *t;
  }
  return scalar_kernels();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

}  // namespace conjlab::simd
