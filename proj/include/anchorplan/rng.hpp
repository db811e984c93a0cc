#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace anchorplan {

// Stream derivation for per-cell RNGs. Keeping the mixing explicit (rather
// than std::seed_seq) pins the byte-level outputs of the harness.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

// Independent stream per (variant, seed, episode). Execution order of the
// worker pool never touches these, so parallel runs stay byte-identical.
inline std::uint64_t cell_seed(std::string_view variant, std::uint64_t seed, int episode) {
    std::uint64_t h = fnv1a64(variant);
    h = splitmix64(h ^ (seed * 0x9e3779b97f4a7c15ull));
    h = splitmix64(h ^ (static_cast<std::uint64_t>(episode) * 0xd1b54a32d192ed03ull));
    return h;
}

// mt19937_64 with hand-rolled double conversion; both are pinned by the
// standard, so draws are identical across platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

private:
    std::mt19937_64 engine_;
};

} // namespace anchorplan
