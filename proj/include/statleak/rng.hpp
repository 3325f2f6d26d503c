#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace statleak {

// SplitMix64: a counter-based generator (Weyl increment + output hash).
// Every randomized operation in the library takes an explicit 64-bit seed
// and derives one of these, so results are reproducible regardless of
// thread scheduling. Derived streams use plain seed arithmetic
// (seed + index), which is safe here because the output hash decorrelates
// neighbouring states.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n). Unbiased via rejection.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) return 0;
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    // Standard normal via Box-Muller (two uniforms per draw, no cached spare,
    // so the stream position is independent of call-site pairing).
    double next_gaussian() {
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::swap(items[i - 1], items[next_below(i)]);
        }
    }

private:
    std::uint64_t state_;
};

// Stream derivation rule used for per-tree and per-file generators.
inline SplitMix64 derive_rng(std::uint64_t seed, std::uint64_t stream_index) {
    return SplitMix64(seed + stream_index);
}

// Deterministic pseudo-random byte stream, used by tests and corpus tooling.
std::vector<std::uint8_t> random_bytes(std::uint64_t seed, std::size_t count);

}  // namespace statleak
