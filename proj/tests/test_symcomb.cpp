#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "qfock/symcomb.hpp"

using namespace qfock;

TEST(InversionCount, Examples) {
    EXPECT_EQ(inversion_count(Permutation::identity(4)), 0u);
    EXPECT_EQ(inversion_count(Permutation::transposition(2, 1)), 1u);
    EXPECT_EQ(inversion_count(Permutation({3, 2, 1})), 3u);
}

TEST(Permutation, RejectsNonBijection) {
    EXPECT_THROW(Permutation({1, 1, 2}), ConfigError);
    EXPECT_THROW(Permutation({0, 1}), ConfigError);
    EXPECT_THROW(Permutation({1, 3}), ConfigError);
}

TEST(ReducedWord, Examples) {
    EXPECT_TRUE(reduced_word(Permutation::identity(3)).letters.empty());
    EXPECT_EQ(reduced_word(Permutation::transposition(2, 1)).letters, std::vector<int>{1});
    const auto w = reduced_word(Permutation({3, 2, 1}));
    EXPECT_EQ(w.length(), 3u);
    EXPECT_EQ(compose_word(3, w), Permutation({3, 2, 1}));
}

TEST(ReducedWord, RecomposesEveryPermutationMinimally) {
    for (int n = 1; n <= 5; ++n)
        for (const auto& p : enumerate_permutations(n)) {
            const auto w = reduced_word(p);
            EXPECT_EQ(w.length(), inversion_count(p));
            EXPECT_EQ(compose_word(n, w), p);
            for (int letter : w.letters) {
                EXPECT_GE(letter, 1);
                EXPECT_LE(letter, n - 1);
            }
        }
}

TEST(EnumeratePermutations, CountsAndUniqueness) {
    EXPECT_EQ(enumerate_permutations(1).size(), 1u);
    EXPECT_EQ(enumerate_permutations(1)[0], Permutation::identity(1));
    EXPECT_EQ(enumerate_permutations(3).size(), 6u);
    const auto all = enumerate_permutations(4);
    EXPECT_EQ(all.size(), 24u);
    std::set<std::vector<int>> distinct;
    for (const auto& p : all) distinct.insert(p.images());
    EXPECT_EQ(distinct.size(), 24u);
}

TEST(EnumeratePermutations, CapIsEnforced) {
    EXPECT_EQ(enumerate_permutations(6).size(), 720u);
    EXPECT_THROW(enumerate_permutations(7), ResourceLimitError);
    EXPECT_THROW(enumerate_permutations(0), ConfigError);
}

TEST(EnumeratePairings, Examples) {
    EXPECT_TRUE(enumerate_pairings(3).empty());
    EXPECT_EQ(enumerate_pairings(4).size(), 3u);
    EXPECT_EQ(enumerate_pairings(6).size(), 15u);
    EXPECT_EQ(enumerate_pairings(0).size(), 1u);
    EXPECT_THROW(enumerate_pairings(10), ResourceLimitError);
}

TEST(EnumeratePairings, MatchesBruteForceAndDoubleFactorial) {
    for (int p = 1; p <= 4; ++p) {
        const int n = 2 * p;
        const auto pairings = enumerate_pairings(n);
        EXPECT_EQ(static_cast<long>(pairings.size()), oracle::double_factorial(n - 1));
        std::set<std::vector<std::pair<int, int>>> got;
        for (const auto& v : pairings) got.insert(v.pairs());
        if (n <= 6) {
            EXPECT_EQ(got, oracle::matchings(n));
        }
        EXPECT_EQ(got.size(), pairings.size());
    }
}

TEST(EnumeratePairings, PairsSortedByFirstElement) {
    for (const auto& v : enumerate_pairings(6)) {
        for (std::size_t k = 0; k + 1 < v.size(); ++k) EXPECT_LT(v.pairs()[k].first, v.pairs()[k + 1].first);
        for (auto [a, z] : v.pairs()) EXPECT_LT(a, z);
    }
}

TEST(CrossingSet, Examples) {
    EXPECT_TRUE(crossing_set(Pairing({{1, 2}, {3, 4}})).empty());
    const auto c = crossing_set(Pairing({{1, 3}, {2, 4}}));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_EQ(c[0], (std::pair<std::size_t, std::size_t>{0, 1}));
    EXPECT_TRUE(crossing_set(Pairing({{1, 4}, {2, 3}})).empty());
}

TEST(CrossingSet, NoncrossingCountIsCatalan) {
    for (int p = 1; p <= 4; ++p) {
        long noncrossing = 0;
        for (const auto& v : enumerate_pairings(2 * p))
            if (v.crossings().empty()) ++noncrossing;
        EXPECT_EQ(noncrossing, oracle::catalan(p)) << "p=" << p;
    }
}

TEST(Pairing, RejectsInvalid) {
    EXPECT_THROW(Pairing({{2, 1}}), ConfigError);
    EXPECT_THROW(Pairing({{1, 2}, {2, 3}}), ConfigError);
    EXPECT_THROW(Pairing({{1, 3}}), ConfigError);
}
