// Sanity of the exact oracles themselves against hand-derived instances.

#include <gtest/gtest.h>

#include "oracle/distance_oracle.hpp"
#include "oracle/rational_oracle.hpp"

using oracle::Rational;
using oracle::Switching;

namespace {

std::vector<Rational> frac(std::initializer_list<int> nums, int den) {
    std::vector<Rational> out;
    for (int n : nums) out.emplace_back(Rational(n) / den);
    return out;
}

const Rational half = Rational(1) / 2;

} // namespace

TEST(RationalOracle, CutThrough2x2) {
    EXPECT_EQ(oracle::solve({1, 2, 1}, half, Switching::cut_through), frac({2, 2, 1}, 7));
}

TEST(RationalOracle, CutThrough2x3ByHand) {
    // a0 = a1 = a, a2 = a/2, a3 = a/4, 1 + 4 + 2 + 1/4 ... -> a = 4/17
    EXPECT_EQ(oracle::solve({1, 2, 2, 1}, half, Switching::cut_through), frac({4, 4, 2, 1}, 17));
}

TEST(RationalOracle, StoreForward2x2) {
    EXPECT_EQ(oracle::solve({1, 2, 1}, half, Switching::store_forward), frac({9, 6, 4}, 25));
}

TEST(RationalOracle, StoreForward2x3ByHand) {
    EXPECT_EQ(oracle::solve({1, 2, 2, 1}, half, Switching::store_forward), frac({27, 18, 12, 8}, 95));
}

TEST(RationalOracle, StoreForwardAtSigmaOneGivesNinth) {
    EXPECT_EQ(oracle::solve({1, 2, 1}, Rational(1), Switching::store_forward)[2], Rational(1) / 9);
}

TEST(RationalOracle, Determinants) {
    // cut-through 2x2 at sigma = 0: |det| = 4 = speedup
    auto m = oracle::equations({1, 2, 1}, Rational(0), Switching::cut_through);
    EXPECT_EQ(abs(oracle::determinant(m)), Rational(4));
    EXPECT_EQ(abs(oracle::determinant(oracle::replace_column(m, 0))), Rational(1));
    // store-forward 2x2: |det| = (sigma + 2)^2, |det A*_0| = (sigma + 1)^2
    auto s = oracle::equations({1, 2, 1}, half, Switching::store_forward);
    EXPECT_EQ(abs(oracle::determinant(s)), Rational(25) / 4);
    EXPECT_EQ(abs(oracle::determinant(oracle::replace_column(s, 0))), Rational(9) / 4);
}

TEST(DistanceOracle, KnownProfiles) {
    using V = std::vector<std::size_t>;
    EXPECT_EQ(oracle::grid_counts(2, 2, 0, 0, false), (V{1, 2, 1}));
    EXPECT_EQ(oracle::grid_counts(5, 5, 0, 0, false), (V{1, 2, 3, 4, 5, 4, 3, 2, 1}));
    EXPECT_EQ(oracle::grid_counts(3, 8, 0, 0, false), (V{1, 2, 3, 3, 3, 3, 3, 3, 2, 1}));
    EXPECT_EQ(oracle::grid_counts(3, 3, 1, 2, true), (V{1, 4, 4}));
    EXPECT_EQ(oracle::cube_counts(3, 5), (V{1, 3, 3, 1}));
}
