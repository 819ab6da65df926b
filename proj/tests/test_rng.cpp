#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "tileperm/errors.hpp"
#include "tileperm/rng.hpp"

using namespace tileperm;

TEST_CASE("derive_seed is deterministic and separates streams") {
    const std::uint64_t a = derive_seed(42, StreamTag::permutation, 7);
    CHECK(a == derive_seed(42, StreamTag::permutation, 7));
    CHECK(a != derive_seed(42, StreamTag::replicate_assignment, 7));
    CHECK(a != derive_seed(42, StreamTag::permutation, 8));
    CHECK(a != derive_seed(43, StreamTag::permutation, 7));
    CHECK(a != derive_seed(42, StreamTag::permutation, 7, 1));
}

TEST_CASE("derive_seed spreads counters widely") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i)
        seen.insert(derive_seed(0, StreamTag::permutation, i));
    CHECK(seen.size() == 1000);
}

TEST_CASE("same seed reproduces the stream") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("uniform01 stays in [0,1) with mean near one half") {
    Rng rng(7);
    const int n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("below is unbiased over small bounds") {
    Rng rng(9);
    const int n = 100000;
    std::vector<int> counts(10, 0);
    for (int i = 0; i < n; ++i) {
        const std::uint64_t v = rng.below(10);
        REQUIRE(v < 10);
        ++counts[v];
    }
    for (int c : counts) {
        CHECK(c > 9400);
        CHECK(c < 10600);
    }
}

TEST_CASE("normal moments") {
    Rng rng(21);
    const int n = 100000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal(2.0, 3.0);
        sum += z;
        sq += z * z;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(mean == doctest::Approx(2.0).epsilon(0.02));
    CHECK(std::sqrt(var) == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("normal with zero sd is exactly the mean") {
    Rng rng(4);
    for (int i = 0; i < 10; ++i) CHECK(rng.normal(1.5, 0.0) == 1.5);
}

TEST_CASE("shuffle preserves the multiset and is seed-stable") {
    std::vector<int> v(50);
    for (int i = 0; i < 50; ++i) v[i] = i;
    std::vector<int> w = v;

    Rng a(5);
    a.shuffle(std::span<int>(v));
    std::vector<int> sorted_v = v;
    std::sort(sorted_v.begin(), sorted_v.end());
    CHECK(sorted_v == w);

    std::vector<int> v2 = w;
    Rng b(5);
    b.shuffle(std::span<int>(v2));
    CHECK(v == v2);

    CHECK(v != w);  // 50! permutations, identity would be astonishing
}

TEST_CASE("sample_without_replacement basics") {
    Rng rng(11);
    auto s = rng.sample_without_replacement(10, 4);
    REQUIRE(s.size() == 4);
    std::set<std::uint32_t> uniq(s.begin(), s.end());
    CHECK(uniq.size() == 4);
    for (auto v : s) CHECK(v < 10);

    auto full = rng.sample_without_replacement(5, 5);
    std::sort(full.begin(), full.end());
    CHECK(full == std::vector<std::uint32_t>{0, 1, 2, 3, 4});

    CHECK_THROWS_AS((void)rng.sample_without_replacement(3, 4), ValidationError);
}

TEST_CASE("sample_without_replacement is marginally uniform") {
    Rng rng(13);
    const int n = 50000;
    std::vector<int> counts(5, 0);
    for (int i = 0; i < n; ++i) ++counts[rng.sample_without_replacement(5, 1)[0]];
    for (int c : counts) {
        CHECK(c > 9500);
        CHECK(c < 10500);
    }
}
