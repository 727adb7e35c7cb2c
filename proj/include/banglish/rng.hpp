#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace banglish::rng {

// std::uniform_int_distribution and std::shuffle are implementation-defined;
// everything seeded here must reproduce byte-identical output across
// toolchains, so sampling is done directly on the mt19937_64 stream.

inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) {
    return n == 0 ? 0 : gen() % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double unit(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * (1.0 / 9007199254740992.0);
}

// Uniform double in [lo, hi).
inline double uniform(std::mt19937_64& gen, double lo, double hi) {
    return lo + (hi - lo) * unit(gen);
}

// Fisher-Yates.
template <class T>
void shuffle(std::vector<T>& v, std::mt19937_64& gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded(gen, i));
        using std::swap;
        swap(v[i - 1], v[j]);
    }
}

} // namespace banglish::rng
