#include "nns/rng.hpp"

#include <numeric>
#include <stdexcept>

namespace nns {

double Rng::uniform(double lo, double hi) {
    if (lo == hi) {
        return lo;
    }
    // Scaled by 1/(2^53 - 1) so both endpoints are reachable.
    const double u = static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740991.0);
    return lo + (hi - lo) * u;
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) {
        throw std::invalid_argument("Rng::index: empty range");
    }
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    // Largest multiple of bound that fits; reject draws above it.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    std::uint64_t x = engine_();
    while (x > limit) {
        x = engine_();
    }
    return static_cast<std::size_t>(x % bound);
}

std::vector<std::size_t> random_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = rng.index(i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace nns
