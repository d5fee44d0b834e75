#include <gtest/gtest.h>

#include "modforms/level_arith.hpp"
#include "oracles.hpp"

using namespace modforms;

TEST(Divisors, SmallCases) {
    EXPECT_EQ(divisors(1), (std::vector<std::int64_t>{1}));
    EXPECT_EQ(divisors(8), (std::vector<std::int64_t>{1, 2, 4, 8}));
    EXPECT_EQ(divisors(36), (std::vector<std::int64_t>{1, 2, 3, 4, 6, 9, 12, 18, 36}));
    EXPECT_THROW(divisors(0), std::invalid_argument);
}

TEST(LevelData, Level8) {
    auto L = level_data(8);
    EXPECT_EQ(L.mu, 12);
    EXPECT_EQ(L.cusps, 4);
    EXPECT_EQ(L.eps2, 0);
    EXPECT_EQ(L.eps3, 0);
    EXPECT_EQ(L.genus, 0);
}

TEST(LevelData, Level36) {
    auto L = level_data(36);
    EXPECT_EQ(L.mu, 72);
    EXPECT_EQ(L.cusps, 12);
    EXPECT_EQ(L.eps2, 0);
    EXPECT_EQ(L.eps3, 0);
    EXPECT_EQ(L.genus, 1);
}

TEST(LevelData, FullModularGroup) {
    auto L = level_data(1);
    EXPECT_EQ(L.mu, 1);
    EXPECT_EQ(L.cusps, 1);
    EXPECT_EQ(L.eps2, 1);
    EXPECT_EQ(L.eps3, 1);
    EXPECT_EQ(L.genus, 0);
}

TEST(LevelData, EllipticCountsAtSmallLevels) {
    // Gamma0(5): two points of order 2, none of order 3. Gamma0(7): none of order 2, two of order 3.
    EXPECT_EQ(level_data(5).eps2, 2);
    EXPECT_EQ(level_data(5).eps3, 0);
    EXPECT_EQ(level_data(7).eps2, 0);
    EXPECT_EQ(level_data(7).eps3, 2);
    EXPECT_EQ(level_data(13).eps2, 2);
    EXPECT_EQ(level_data(13).eps3, 2);
    EXPECT_EQ(level_data(11).genus, 1);
}

TEST(LevelData, CuspClassesCoverEveryDivisorOnce) {
    for (std::int64_t N = 1; N <= 300; ++N) {
        auto L = level_data(N);
        auto divs = divisors(N);
        ASSERT_EQ(L.cusp_classes.size(), divs.size());
        std::int64_t total = 0;
        for (std::size_t i = 0; i < divs.size(); ++i) {
            EXPECT_EQ(L.cusp_classes[i].denominator, divs[i]);
            total += L.cusp_classes[i].multiplicity;
        }
        EXPECT_EQ(total, L.cusps);
        EXPECT_GE(L.cusps, 1);
    }
}

TEST(LevelData, GenusIntegralUpTo500) {
    // level_data throws on a non-integral genus.
    for (std::int64_t N = 1; N <= 500; ++N) {
        auto L = level_data(N);
        EXPECT_GE(L.genus, 0) << N;
        EXPECT_EQ(12 * L.genus, 12 + L.mu - 3 * L.eps2 - 4 * L.eps3 - 6 * L.cusps) << N;
    }
}

TEST(LevelData, IndexMatchesCosetCount) {
    for (std::int64_t N = 1; N <= 30; ++N) EXPECT_EQ(level_data(N).mu, oracle::brute_force_index(N)) << N;
}

TEST(IsGood, Examples) {
    EXPECT_TRUE(is_good(8));
    EXPECT_TRUE(is_good(68));
    EXPECT_TRUE(is_good(9));
    EXPECT_TRUE(is_good(36));
    EXPECT_FALSE(is_good(7));
    EXPECT_FALSE(is_good(5));
    EXPECT_FALSE(is_good(1));
    EXPECT_FALSE(is_good(10));  // 5 = 1 mod 4
    EXPECT_FALSE(is_good(21));  // 7 = 1 mod 3
}

TEST(IsGood, AgreesWithEllipticCounts) {
    for (std::int64_t N = 2; N <= 1000; ++N) {
        auto L = level_data(N);
        bool textual = !is_prime(N) && no_order2_points(N) && no_order3_points(N);
        EXPECT_EQ(is_good(N), textual) << N;
        EXPECT_EQ(is_good(N), !is_prime(N) && L.eps2 == 0 && L.eps3 == 0) << N;
    }
}

TEST(IsGood, SomeSmallMultipleIsGood) {
    for (std::int64_t N = 1; N <= 200; ++N)
        EXPECT_TRUE(is_good(N) || is_good(2 * N) || is_good(3 * N) || is_good(4 * N)) << N;
}

TEST(Dimension, ReportedValues) {
    EXPECT_EQ(dim_Mk(8, 96), 97);
    EXPECT_EQ(dim_Mk(36, 24), 144);
    EXPECT_EQ(dim_Mk(105, 30), 468);
    EXPECT_EQ(dim_Mk(198, 18), 620);
}

TEST(Dimension, LowWeights) {
    EXPECT_EQ(dim_Mk(8, 0), 1);
    EXPECT_EQ(dim_Mk(8, 2), 3);
    EXPECT_EQ(dim_Mk(8, 4), 5);
    EXPECT_EQ(dim_Mk(36, 2), 12);
    EXPECT_EQ(dim_Mk(68, 2), 12);
    EXPECT_EQ(dim_Mk(1, 2), 0);
    EXPECT_EQ(dim_Mk(1, 4), 1);
    EXPECT_EQ(dim_Mk(1, 12), 2);
    EXPECT_EQ(dim_Mk(11, 2), 2);
    EXPECT_THROW(dim_Mk(8, 3), std::invalid_argument);
    EXPECT_THROW(dim_Mk(8, -2), std::invalid_argument);
}

TEST(Dimension, BoundedBySturm) {
    for (std::int64_t N = 1; N <= 200; ++N)
        for (int k = 0; k <= 40; k += 2) EXPECT_LE(Rational(dim_Mk(N, k)), sturm_bound(N, k) + 1) << N << ' ' << k;
}

TEST(SturmBound, Values) {
    EXPECT_EQ(sturm_bound(8, 12), Rational(12));
    EXPECT_EQ(sturm_bound(36, 4), Rational(24));
    EXPECT_EQ(sturm_bound(5, 0), Rational(0));
    EXPECT_EQ(sturm_bound(5, 2), Rational(1));
    EXPECT_EQ(sturm_bound(1, 2), Rational(1, 6));
    EXPECT_EQ(sturm_precision(1, 2), 1u);
    EXPECT_EQ(sturm_precision(8, 96), 97u);
}
