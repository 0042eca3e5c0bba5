#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace coddlab {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-task stream derived from a master seed; task streams are independent
/// of scheduling order.
inline std::mt19937_64 derive_rng(std::uint64_t master_seed, std::uint64_t index)
{
    return std::mt19937_64(splitmix64(master_seed ^ splitmix64(index)));
}

/// Uniform draw in [0, k) via the raw engine output. Modulo bias is
/// negligible for the small k used here, and unlike uniform_int_distribution
/// the result is identical across standard library implementations.
inline std::uint64_t draw(std::mt19937_64& rng, std::uint64_t k)
{
    return rng() % k;
}

/// Fractional ranks with ties averaged.
std::vector<double> ranks(const std::vector<double>& xs);

/// Pearson correlation; nullopt when either side has zero variance.
std::optional<double> pearson(const std::vector<double>& xs, const std::vector<double>& ys);

/// Spearman rank correlation; nullopt when either side has zero variance.
std::optional<double> spearman(const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace coddlab
