// Dense arithmetic kernels used by the simplex tableau and the step-function
// evaluators. Every kernel has a scalar reference implementation; wider
// variants are selected once at runtime from the CPU feature set.
//
// Element-wise kernels (axpy, scale) are bit-identical across variants.
// Reductions (dot, sum, max_abs) may differ in the last bits.
#pragma once

#include <cstddef>
#include <span>
#include <string_view>

namespace conjlab::simd {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  Isa isa;
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // x[i] *= a
  void (*scale)(double a, double* x, std::size_t n);
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*max_abs)(const double* x, std::size_t n);
};

const KernelTable& scalar_kernels();
#if defined(CONJLAB_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(CONJLAB_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

bool cpu_has_avx2();

// The table selected for this process. Honors CONJLAB_SIMD=scalar|avx2|neon|auto;
// an unavailable request falls back to scalar.
const KernelTable& active();

// Variant lookup for equivalence tests; returns nullptr when not compiled in
// or not supported by this CPU.
const KernelTable* table_for(Isa isa);

std::string_view isa_name(Isa isa);

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), y.size());
}
inline void scale(double a, std::span<double> x) { active().scale(a, x.data(), x.size()); }
inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}
inline double sum(std::span<const double> x) { return active().sum(x.data(), x.size()); }
inline double max_abs(std::span<const double> x) { return active().max_abs(x.data(), x.size()); }

}  // namespace conjlab::simd
