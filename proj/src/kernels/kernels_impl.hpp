#pragma once

#include <cstddef>

#include "spotcast/kernels.hpp"

namespace spotcast::kernels::scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* w, const double* x, const double* bias, double* out, std::size_t rows,
          std::size_t cols);
void gemv_t(const double* w, const double* v, double* out, std::size_t rows, std::size_t cols);
void ger(double alpha, const double* u, const double* v, double* a, std::size_t rows,
         std::size_t cols);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
}  // namespace spotcast::kernels::scalar

#if defined(SPOTCAST_HAVE_AVX2)
namespace spotcast::kernels::avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void gemv(const double* w, const double* x, const double* bias, double* out, std::size_t rows,
          std::size_t cols);
void gemv_t(const double* w, const double* v, double* out, std::size_t rows, std::size_t cols);
void ger(double alpha, const double* u, const double* v, double* a, std::size_t rows,
         std::size_t cols);
double sum_sq_diff(const double* a, const double* b, std::size_t n);
}  // namespace spotcast::kernels::avx2
#endif
