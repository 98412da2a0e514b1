#include "cnl/kernels.hpp"

namespace cnl::kernels::ref {

double masked_sum(const double* a, const std::uint8_t* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += a[i] * static_cast<double>(x[i]);
    return acc;
}

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += a[i] * b[i];
    return acc;
}

double sum(const double* a, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        acc += a[i];
    return acc;
}

}  // namespace cnl::kernels::ref
