#include "cnl/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace cnl::kernels {

namespace {

using MaskedSumFn = double (*)(const double*, const std::uint8_t*, std::size_t);
using DotFn = double (*)(const double*, const double*, std::size_t);
using SumFn = double (*)(const double*, std::size_t);

struct Dispatch {
    Isa isa = Isa::scalar;
    MaskedSumFn masked_sum = &ref::masked_sum;
    DotFn dot = &ref::dot;
    SumFn sum = &ref::sum;
};

bool avx2_available() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Dispatch make_dispatch() {
    Dispatch d;
    bool want_avx2 = avx2_available();
    if (const char* env = std::getenv("CNL_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) want_avx2 = false;
        // "avx2" keeps the CPUID decision; we never run unsupported code
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (want_avx2) {
        d.isa = Isa::avx2;
        d.masked_sum = &avx2::masked_sum;
        d.dot = &avx2::dot;
        d.sum = &avx2::sum;
    }
#endif
    return d;
}

Dispatch& dispatch() {
    static Dispatch d = make_dispatch();
    return d;
}

}  // namespace

Isa active() { return dispatch().isa; }

void force(Isa isa) {
    Dispatch& d = dispatch();
    if (isa == Isa::scalar) {
        d = Dispatch{};
        return;
    }
#if defined(__x86_64__) || defined(_M_X64)
    if (isa == Isa::avx2 && avx2_available()) {
        d.isa = Isa::avx2;
        d.masked_sum = &avx2::masked_sum;
        d.dot = &avx2::dot;
        d.sum = &avx2::sum;
    }
#endif
}

double masked_sum(const double* a, const std::uint8_t* x, std::size_t n) {
    return dispatch().masked_sum(a, x, n);
}

double dot(const double* a, const double* b, std::size_t n) {
    return dispatch().dot(a, b, n);
}

double sum(const double* a, std::size_t n) { return dispatch().sum(a, n); }

}  // namespace cnl::kernels
