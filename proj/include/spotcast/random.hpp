#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace spotcast::rng {

/// Default CLI seed; never time-based.
inline constexpr std::uint64_t kDefaultSeed = 20190329;

/// splitmix64 finalizer applied to root ^ stream-constant. Stable across platforms.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) noexcept;
/// Seed for a named component: derive_seed(root, fnv1a64(label)).
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t root, std::string_view label) noexcept;

/**
 * Reproducible random stream over std::mt19937_64.
 *
 * Uniforms and normals are computed here rather than through the standard
 * distributions, whose algorithms are implementation-defined, so a given
 * seed yields identical draws with any standard library.
 */
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }
    /// Standard normal via Box-Muller; each call consumes two uniforms.
    double normal() noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace spotcast::rng
