#pragma once

#include <cstddef>
#include <cstdint>

// Arithmetic inner loops shared by the evaluators, the feasibility checks and
// the benchmark harness. Each kernel has a scalar reference implementation and
// an AVX2 variant; the active one is picked at startup from CPUID and can be
// overridden with CNL_KERNELS=scalar|avx2 for testing. The two variants may
// differ by accumulation order only, never by more than rounding noise;
// the equivalence suite in tests/test_kernels.cpp enforces that.
namespace cnl::kernels {

enum class Isa { scalar, avx2 };

// Implementation that function-pointer dispatch currently routes to.
Isa active();

// Force a specific implementation (no-op if unavailable on this CPU).
void force(Isa isa);

// sum_i a[i] * x[i] with x[i] in {0, 1}.
double masked_sum(const double* a, const std::uint8_t* x, std::size_t n);

// sum_i a[i] * b[i].
double dot(const double* a, const double* b, std::size_t n);

double sum(const double* a, std::size_t n);

// Scalar reference kernels, always available; these are the oracles the SIMD
// variants are tested against.
namespace ref {
double masked_sum(const double* a, const std::uint8_t* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace ref

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double masked_sum(const double* a, const std::uint8_t* x, std::size_t n);
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* a, std::size_t n);
}  // namespace avx2
#endif

}  // namespace cnl::kernels
