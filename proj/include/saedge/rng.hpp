#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <random>

namespace saedge {

// Seeded generator with fully specified variate conversions so that generated
// corpora and initial weights do not depend on the standard library's
// distribution implementations.
//
//   engine    std::mt19937_64 seeded with the 64-bit seed
//   uniform   (engine() >> 11) * 2^-53, in [0, 1)
//   normal    Box-Muller: sqrt(-2 ln(1 - u1)) * cos(2 pi u2), one draw pair per variate
//   below(n)  floor(uniform() * n)
class Rng {
public:
    static constexpr const char* kAlgorithm = "mt19937_64/u53/box-muller";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(1.0 - u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::size_t below(std::size_t n) {
        auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

private:
    std::mt19937_64 engine_;
};

// Derives independent sub-seeds (one per stage, stream, or role) from a base seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace saedge
