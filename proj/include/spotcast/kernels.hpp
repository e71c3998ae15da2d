#pragma once

// Dense double-precision inner loops shared by the models.
//
// Each kernel has a scalar reference implementation and, on x86-64, an
// AVX2/FMA variant. The variant is picked once at first use from CPUID;
// setting SPOTCAST_KERNELS=scalar in the environment forces the reference
// path. Variants agree with the reference up to summation-order rounding.

#include <cstddef>
#include <span>
#include <string_view>

namespace spotcast::kernels {

struct KernelTable {
    std::string_view name;
    /// sum_i a[i] * b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    /// y += alpha * x
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    /// out = W x + bias, W row-major rows x cols. bias may be null.
    void (*gemv)(const double* w, const double* x, const double* bias, double* out,
                 std::size_t rows, std::size_t cols);
    /// out = W^T v, W row-major rows x cols; out has cols entries.
    void (*gemv_t)(const double* w, const double* v, double* out, std::size_t rows,
                   std::size_t cols);
    /// A += alpha * u v^T, A row-major rows x cols.
    void (*ger)(double alpha, const double* u, const double* v, double* a, std::size_t rows,
                std::size_t cols);
    /// sum_i (a[i] - b[i])^2
    double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
};

[[nodiscard]] const KernelTable& scalar_table() noexcept;
/// Null when the AVX2 variant was not compiled in or the CPU lacks AVX2/FMA.
[[nodiscard]] const KernelTable* avx2_table() noexcept;
/// The table used by the free functions below.
[[nodiscard]] const KernelTable& active() noexcept;

[[nodiscard]] double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
void gemv(std::span<const double> w, std::span<const double> x, std::span<const double> bias,
          std::span<double> out);
void gemv_t(std::span<const double> w, std::span<const double> v, std::span<double> out);
void ger(double alpha, std::span<const double> u, std::span<const double> v, std::span<double> a);
[[nodiscard]] double sum_sq_diff(std::span<const double> a, std::span<const double> b);

}  // namespace spotcast::kernels
