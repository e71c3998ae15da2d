#include <cstdlib>
#include <stdexcept>
#include <string_view>

#include "kernels_impl.hpp"

namespace spotcast::kernels {

namespace {

constexpr KernelTable kScalar{"scalar",       scalar::dot,    scalar::axpy,
                              scalar::gemv,   scalar::gemv_t, scalar::ger,
                              scalar::sum_sq_diff};

#if defined(SPOTCAST_HAVE_AVX2)
constexpr KernelTable kAvx2{"avx2",       avx2::dot,    avx2::axpy,       avx2::gemv,
                            avx2::gemv_t, avx2::ger,    avx2::sum_sq_diff};
#endif

bool cpu_has_avx2() noexcept {
#if defined(SPOTCAST_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& select() noexcept {
    if (const char* env = std::getenv("SPOTCAST_KERNELS")) {
        if (std::string_view(env) == "scalar") return kScalar;
    }
    if (const KernelTable* t = avx2_table()) return *t;
    return kScalar;
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(SPOTCAST_HAVE_AVX2)
    static const bool supported = cpu_has_avx2();
    return supported ? &kAvx2 : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() noexcept {
    static const KernelTable& table = select();
    return table;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "kernels::dot: length mismatch");
    return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require(x.size() == y.size(), "kernels::axpy: length mismatch");
    active().axpy(alpha, x.data(), y.data(), x.size());
}

void gemv(std::span<const double> w, std::span<const double> x, std::span<const double> bias,
          std::span<double> out) {
    require(w.size() == out.size() * x.size(), "kernels::gemv: shape mismatch");
    require(bias.empty() || bias.size() == out.size(), "kernels::gemv: bias length mismatch");
    active().gemv(w.data(), x.data(), bias.empty() ? nullptr : bias.data(), out.data(),
                  out.size(), x.size());
}

void gemv_t(std::span<const double> w, std::span<const double> v, std::span<double> out) {
    require(w.size() == v.size() * out.size(), "kernels::gemv_t: shape mismatch");
    active().gemv_t(w.data(), v.data(), out.data(), v.size(), out.size());
}

void ger(double alpha, std::span<const double> u, std::span<const double> v,
         std::span<double> a) {
    require(a.size() == u.size() * v.size(), "kernels::ger: shape mismatch");
    active().ger(alpha, u.data(), v.data(), a.data(), u.size(), v.size());
}

double sum_sq_diff(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "kernels::sum_sq_diff: length mismatch");
    return active().sum_sq_diff(a.data(), b.data(), a.size());
}

}  // namespace spotcast::kernels
