#ifndef TILEPERM_RNG_HPP
#define TILEPERM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

namespace tileperm {

// Every random draw in the pipeline comes from a stream seeded by hashing
// (master_seed, purpose tag, counters). Work items (simulations, permutations)
// own disjoint streams, so results are independent of how items are scheduled
// across workers.

enum class StreamTag : std::uint64_t {
    replicate_assignment = 1,
    permutation = 2,
    synthesis = 3,
};

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, StreamTag tag,
                                    std::uint64_t a = 0, std::uint64_t b = 0) noexcept {
    std::uint64_t h = mix64(master);
    h = mix64(h ^ static_cast<std::uint64_t>(tag));
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    return h;
}

// mt19937_64 wrapped with explicitly specified samplers. std:: distributions
// are implementation-defined, so bounded ints, uniforms and normals are done
// by hand to keep output stable across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform double in [0, 1), 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, bound), unbiased via rejection. bound >= 1.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
        for (;;) {
            const std::uint64_t r = eng_();
            if (r >= threshold) return r % bound;
        }
    }

    // Box-Muller; two uniforms per deviate, no cached spare.
    double normal(double mean = 0.0, double sd = 1.0) {
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
        const double u2 = uniform01();
        constexpr double two_pi = 6.283185307179586476925286766559;
        const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
        return mean + sd * z;
    }

    // In-place Fisher-Yates.
    template <typename T>
    void shuffle(std::span<T> v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // Uniform k-subset of {0..n-1} by partial Fisher-Yates; order of the
    // returned indices is part of the draw.
    std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n, std::uint32_t k);

  private:
    std::mt19937_64 eng_;
};

}  // namespace tileperm

#endif  // TILEPERM_RNG_HPP
