#include "tileperm/rng.hpp"

#include <numeric>

#include "tileperm/errors.hpp"

namespace tileperm {

std::vector<std::uint32_t> Rng::sample_without_replacement(std::uint32_t n, std::uint32_t k) {
    if (k > n) throw ValidationError("sample_without_replacement: k exceeds n");
    std::vector<std::uint32_t> pool(n);
    std::iota(pool.begin(), pool.end(), 0u);
    for (std::uint32_t i = 0; i < k; ++i) {
        const std::uint32_t j = i + static_cast<std::uint32_t>(below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

}  // namespace tileperm
