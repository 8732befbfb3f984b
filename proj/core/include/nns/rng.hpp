#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace nns {

/// Seeded generator with a fixed, platform-independent output stream.
///
/// The engine is std::mt19937_64, whose sequence is pinned by the standard.
/// The standard distributions are implementation-defined, so the mapping from
/// raw 64-bit words to doubles and indices is done here:
///   - uniform01: top 53 bits scaled by 2^-53, giving [0, 1).
///   - index(n):  rejection sampling on the full 64-bit word, giving [0, n).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform draw on the closed interval [lo, hi].
    double uniform(double lo, double hi);

    std::size_t index(std::size_t n);

private:
    std::mt19937_64 engine_;
};

/// Fisher-Yates shuffle of 0..n-1. perm[i] is the source index of output row i.
std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed);

/// Derive an independent stream seed from a base seed and a tag (splitmix64).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag);

}  // namespace nns
