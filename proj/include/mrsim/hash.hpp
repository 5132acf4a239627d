#pragma once

#include <cstdint>
#include <random>

namespace mrsim {

// splitmix64 finalizer (Steele/Lea/Flood). Fast, and good enough to stand in
// for the truly random mappings the cost model assumes.
constexpr std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded 64-bit mix of a key. Distinct seeds give independent-looking maps.
constexpr std::uint64_t hash_mix(std::uint64_t key, std::uint64_t seed)
{
    return splitmix64(splitmix64(key) ^ splitmix64(~seed));
}

// Map a 64-bit hash onto 0..range-1 without modulo bias (Lemire reduction).
constexpr std::uint64_t reduce_range(std::uint64_t x, std::uint64_t range)
{
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(range)) >> 64);
}

/// Deterministic hash of `key` into 0..range_size-1.
constexpr std::uint64_t hash_range(std::uint64_t key, std::uint64_t seed, std::uint64_t range_size)
{
    return reduce_range(hash_mix(key, seed), range_size);
}

// Derive an independent sub-seed for a named simulation phase.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt)
{
    return splitmix64(seed ^ splitmix64(salt + 0x5851f42d4c957f2dULL));
}

// Deterministic RNG wrapper. The engine is std::mt19937_64 (its output
// sequence is pinned by the standard); the int/real conversions are our own
// so that regression-pinned values hold across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in 0..n-1 (n >= 1).
    std::uint64_t next_below(std::uint64_t n) { return reduce_range(eng_(), n); }

    /// Uniform in lo..hi inclusive.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(next_below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    /// Uniform in [0,1).
    double next_real()
    {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[next_below(i)]);
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace mrsim
