#pragma once

#include <cstdint>
#include <vector>

namespace printra {

// Portable seeded generator (SplitMix64). Every stochastic component of the
// library draws from this so that a (data, config, seed) triple reproduces
// bit-for-bit on any platform.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform integer in [0, n). Rejection sampling, no modulo bias.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = ~0ULL - ~0ULL % n;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    // Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Decorrelated child seed for stream `index` (per-tree RNGs, per-run CV
// shuffles). Pre-deriving streams keeps results independent of scheduling.
inline std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t index) {
    SplitMix64 g(master_seed ^ (0xD1B54A32D192ED03ULL * (index + 1)));
    return g.next();
}

// Fisher-Yates with SplitMix64.
template <typename T>
void seeded_shuffle(std::vector<T>& items, SplitMix64& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace printra
