#pragma once

// Seeded randomness with a portable draw sequence.
//
// std::uniform_*_distribution and std::shuffle are implementation-defined, so
// scenes and tasks would differ between standard libraries. Everything here
// is built directly on the raw 64-bit engine output.

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace arlabel {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a over the bytes of a string.
constexpr std::uint64_t hash_string(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char ch : s) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t combine_seed(std::uint64_t seed, std::uint64_t value)
{
    return mix64(seed ^ mix64(value + 0x632be59bd9b4e019ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}
    Rng(std::uint64_t seed, std::string_view stream) : engine_(combine_seed(seed, hash_string(stream))) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n), unbiased. n must be positive.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next();
        while (x >= limit) {
            x = next();
        }
        return x % n;
    }

    /// Uniform integer in [lo, hi].
    int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }

    bool coin() { return (next() >> 63) != 0; }

    template <typename T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace arlabel
