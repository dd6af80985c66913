#include <gtest/gtest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "lsf/combinatorics.hpp"
#include "lsf/rng.hpp"

namespace lsf {
namespace {

// All k-subsets of {0..m-1} in lexicographic order, via bitmasks.
std::vector<std::vector<std::uint32_t>> all_subsets(std::uint32_t m, std::uint32_t k) {
    std::vector<std::vector<std::uint32_t>> out;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        if (static_cast<std::uint32_t>(std::popcount(mask)) != k) continue;
        std::vector<std::uint32_t> s;
        for (std::uint32_t i = 0; i < m; ++i) {
            if (mask >> i & 1) s.push_back(i);
        }
        out.push_back(s);
    }
    std::sort(out.begin(), out.end());
    return out;
}

TEST(Combinatorics, Binomial) {
    EXPECT_EQ(binomial(10, 3), 120u);
    EXPECT_EQ(binomial(5, 0), 1u);
    EXPECT_EQ(binomial(3, 5), 0u);
    EXPECT_EQ(binomial(62, 31), 465428353255261088u);
    EXPECT_FALSE(checked_binomial(200, 100).has_value());
    EXPECT_THROW(binomial(200, 100), std::overflow_error);
}

TEST(Combinatorics, BinomialTailExact) {
    // Direct sum of C(10, k) 0.3^k 0.7^(10-k), k >= 3.
    double direct = 0.0;
    for (int k = 3; k <= 10; ++k) direct += binomial(10, k) * std::pow(0.3, k) * std::pow(0.7, 10 - k);
    EXPECT_NEAR(binomial_tail(10, 0.3, 3), direct, 1e-14);
    EXPECT_NEAR(binomial_tail(10, 0.3, 3), 0.6172, 1e-4);
    EXPECT_DOUBLE_EQ(binomial_tail(10, 0.3, 0), 1.0);
    EXPECT_DOUBLE_EQ(binomial_tail(10, 0.3, 11), 0.0);
}

TEST(Combinatorics, MedianRoundedDown) {
    for (std::uint64_t m = 1; m <= 60; ++m) {
        for (int i = 1; i < 50; ++i) {
            const double p = i / 50.0;
            EXPECT_GE(binomial_tail(m, p, static_cast<std::uint64_t>(std::floor(m * p))), 0.5) << m << ' ' << p;
        }
    }
}

TEST(Combinatorics, RankMatchesLexicographicEnumeration) {
    for (std::uint32_t m = 1; m <= 12; ++m) {
        for (std::uint32_t k = 1; k <= std::min<std::uint32_t>(m, 4); ++k) {
            const SubsetRanker ranker(m, k);
            const auto subsets = all_subsets(m, k);
            ASSERT_EQ(ranker.count(), subsets.size());
            for (std::size_t r = 0; r < subsets.size(); ++r) {
                EXPECT_EQ(ranker.rank(subsets[r]), r);
                EXPECT_EQ(ranker.rank_unchecked(subsets[r]), r);
                EXPECT_EQ(subset_rank(subsets[r], m), r);
                EXPECT_EQ(ranker.unrank(r), subsets[r]);
            }
        }
    }
}

TEST(Combinatorics, RankValidation) {
    const SubsetRanker ranker(6, 3);
    const std::vector<std::uint32_t> unsorted{2, 1, 4}, big{1, 2, 6}, short_one{1, 2};
    EXPECT_THROW(ranker.rank(unsorted), std::invalid_argument);
    EXPECT_THROW(ranker.rank(big), std::invalid_argument);
    EXPECT_THROW(ranker.rank(short_one), std::invalid_argument);
    EXPECT_THROW(ranker.unrank(20), std::invalid_argument);
    EXPECT_THROW(SubsetRanker(3, 4), std::invalid_argument);
}

TEST(Combinatorics, EnumeratorListsSubsetsOfActiveIndices) {
    RngStream rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t m = 1 + static_cast<std::uint32_t>(rng.next_u64() % 14);
        std::vector<std::uint32_t> active;
        for (std::uint32_t i = 0; i < m; ++i) {
            if (rng.uniform() < 0.5) active.push_back(i);
        }
        const std::uint32_t tau = 1 + static_cast<std::uint32_t>(rng.next_u64() % 3);
        std::vector<std::vector<std::uint32_t>> expect;
        for (const auto& s : all_subsets(m, std::min(tau, m))) {
            if (s.size() == tau &&
                std::all_of(s.begin(), s.end(), [&](auto v) { return std::binary_search(active.begin(), active.end(), v); })) {
                expect.push_back(s);
            }
        }
        std::vector<std::vector<std::uint32_t>> got;
        TauSubsetEnumerator e(active, tau);
        while (e.next()) got.emplace_back(e.current().begin(), e.current().end());
        EXPECT_EQ(got, expect);
    }
}

TEST(Combinatorics, EnumeratorEdgeCases) {
    const std::vector<std::uint32_t> none;
    TauSubsetEnumerator empty(none, 1);
    EXPECT_FALSE(empty.next());
    const std::vector<std::uint32_t> two{3, 8};
    TauSubsetEnumerator too_big(two, 3);
    EXPECT_FALSE(too_big.next());
    EXPECT_THROW(TauSubsetEnumerator(two, 0), std::invalid_argument);
}

}  // namespace
}  // namespace lsf
