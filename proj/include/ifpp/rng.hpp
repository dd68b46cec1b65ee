#pragma once

// Counter-based randomness: every random quantity in the toolkit is a pure
// function of (seed, stream tag, coordinates). Nothing carries state, so an
// infinite lattice can be evaluated lazily, in any order, from any thread.

#include <cstdint>

namespace ifpp::rng {

/// SplitMix64 finalizer (Stafford variant 13).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Order-sensitive combination of a running hash with one more word.
constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) noexcept {
    return mix64(h ^ mix64(v + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t zigzag(std::int64_t v) noexcept {
    return (static_cast<std::uint64_t>(v) << 1) ^ static_cast<std::uint64_t>(v >> 63);
}

/// Stream tags keep edge uniforms, column indicators and replication seeds
/// from ever sharing a counter.
enum class Stream : std::uint64_t {
    Edge = 0x45444745ULL,        // "EDGE"
    Column = 0x434f4c4dULL,      // "COLM"
    Replication = 0x5245504cULL, // "REPL"
};

/// Maps 64 random bits to a double in the open interval (0,1).
constexpr double to_open_unit(std::uint64_t bits) noexcept {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

constexpr std::uint64_t hash(std::uint64_t seed, Stream s, std::int64_t a) noexcept {
    return combine(combine(mix64(seed), static_cast<std::uint64_t>(s)), zigzag(a));
}

constexpr std::uint64_t hash(std::uint64_t seed, Stream s, std::int64_t a, std::int64_t b,
                             std::int64_t c) noexcept {
    return combine(combine(combine(combine(mix64(seed), static_cast<std::uint64_t>(s)), zigzag(a)),
                           zigzag(b)),
                   zigzag(c));
}

/// seed_i = mix(master, i)
constexpr std::uint64_t replication_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return hash(master, Stream::Replication, static_cast<std::int64_t>(index));
}

/// Small sequential generator for test-data and sampling loops where a
/// counter-based stream would be awkward. Deterministic given its seed.
class SplitMix {
public:
    explicit constexpr SplitMix(std::uint64_t seed) noexcept : state_(seed) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    constexpr double uniform() noexcept { return to_open_unit(next()); }

    /// Uniform integer in [lo, hi].
    constexpr std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }

private:
    std::uint64_t state_;
};

}  // namespace ifpp::rng
