#include "ensel/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <vector>

using namespace ensel;

TEST(Rng, EngineIsStandardMt19937_64) {
    // The standard fixes the 10000th output of a default-seeded mt19937_64.
    Rng rng(5489);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = rng.next();
    EXPECT_EQ(v, 9981545732273789042ULL);
}

TEST(Rng, KnownHashVectors) {
    EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Rng, DeriveSeedSeparatesComponentsAndIndices) {
    EXPECT_EQ(derive_seed(1, "split", {2}), derive_seed(1, "split", {2}));
    EXPECT_NE(derive_seed(1, "split", {2}), derive_seed(1, "split", {3}));
    EXPECT_NE(derive_seed(1, "split"), derive_seed(1, "mv"));
    EXPECT_NE(derive_seed(1, "split"), derive_seed(2, "split"));
    EXPECT_NE(derive_seed(1, "mv", {0, 1}), derive_seed(1, "mv", {1, 0}));
}

TEST(Rng, BoundedStaysInRangeAndIsRoughlyUniform) {
    Rng rng(7);
    std::vector<int> counts(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto v = rng.bounded(7);
        ASSERT_LT(v, 7U);
        ++counts[v];
    }
    for (int c : counts) EXPECT_NEAR(c, n / 7.0, 5 * std::sqrt(n / 7.0));
    EXPECT_EQ(rng.bounded(1), 0U);
}

TEST(Rng, UniformAndNormalMoments) {
    Rng rng(8);
    const int n = 200000;
    double su = 0, sn = 0, sn2 = 0;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    EXPECT_NEAR(su / n, 0.5, 5 * std::sqrt(1.0 / 12 / n));
    EXPECT_NEAR(sn / n, 0.0, 5 / std::sqrt(n));
    EXPECT_NEAR(sn2 / n, 1.0, 5 * std::sqrt(2.0 / n));
}

TEST(Rng, CoinIsFair) {
    Rng rng(9);
    int heads = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) heads += rng.coin() ? 1 : 0;
    EXPECT_NEAR(heads, n / 2.0, 5 * std::sqrt(n / 4.0));
}

TEST(Rng, SameSeedSameStream) {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.next(), b.next());
        EXPECT_EQ(a.normal(), b.normal());
    }
}
