#include <algorithm>

#include <gtest/gtest.h>

#include "psum/counting.hpp"

using namespace psum;

namespace {

// Oracle: walk every subset of {0..n-1} (or {1..n-1}) by bitmask. Independent
// of the DP; only usable for small n.
std::vector<std::uint64_t> brute_counts(std::uint32_t n, std::size_t k, bool include_zero) {
    std::vector<std::uint64_t> counts(n, 0);
    const std::uint32_t lo = include_zero ? 0 : 1;
    const std::uint32_t width = n - lo;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << width); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcountll(mask)) != k) continue;
        std::uint64_t s = 0;
        for (std::uint32_t i = 0; i < width; ++i) {
            if (mask & (std::uint64_t{1} << i)) s += lo + i;
        }
        ++counts[s % n];
    }
    return counts;
}

const std::uint32_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23};

}  // namespace

TEST(Primes, MillerRabin) {
    std::vector<std::uint64_t> found;
    for (std::uint64_t v = 0; v < 60; ++v) {
        if (is_prime(v)) found.push_back(v);
    }
    EXPECT_EQ(found, (std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59}));
    EXPECT_TRUE(is_prime(2147483647ULL));
    EXPECT_TRUE(is_prime(18446744073709551557ULL));
    EXPECT_FALSE(is_prime(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
    EXPECT_FALSE(is_prime(18446744073709551615ULL));
    EXPECT_THROW(PrimeModulus(9), std::invalid_argument);
    EXPECT_THROW(PrimeModulus(1), std::invalid_argument);
}

TEST(Binomial, Values) {
    EXPECT_EQ(binomial(5, 2), 10);
    EXPECT_EQ(binomial(4, 5), 0);
    EXPECT_EQ(binomial(60, 30), BigInt("118264581564861424"));
    EXPECT_EQ(binomial(100, 50), BigInt("100891344545564193334812497256"));
}

TEST(SumCountTable, Examples) {
    const auto full = sum_count_table(5, 2, true);
    for (const auto& c : full.counts) EXPECT_EQ(c, 2);
    const auto star = sum_count_table(5, 2, false);
    EXPECT_EQ(star.counts[0], 2);  // {1,4}, {2,3}
    EXPECT_EQ(star.total(), 6);
    const auto empty = sum_count_table(7, 0, false);
    EXPECT_EQ(empty.counts[0], 1);
    for (std::uint32_t a = 1; a < 7; ++a) EXPECT_EQ(empty.counts[a], 0);
    EXPECT_THROW((void)sum_count_table(5, 5, false), std::invalid_argument);
    EXPECT_NO_THROW((void)sum_count_table(5, 5, true));
}

TEST(SumCountTable, MatchesBruteForce) {
    for (std::uint32_t n = 2; n <= 16; ++n) {
        for (bool z : {false, true}) {
            const std::size_t kmax = z ? n : n - 1;
            for (std::size_t k = 0; k <= kmax; ++k) {
                const auto table = sum_count_table(n, k, z);
                const auto oracle = brute_counts(n, k, z);
                for (std::uint32_t a = 0; a < n; ++a) {
                    ASSERT_EQ(table.counts[a], oracle[a]) << "n=" << n << " k=" << k << " z=" << z;
                }
                ASSERT_EQ(table.total(), binomial(z ? n : n - 1, k));
            }
        }
    }
}

TEST(ClosedForms, Examples) {
    EXPECT_EQ(nk_closed_form(PrimeModulus(7), 2), 3);
    EXPECT_EQ(nk_closed_form(PrimeModulus(5), 1), 1);
    EXPECT_THROW((void)nk_closed_form(PrimeModulus(5), 5), std::invalid_argument);
    EXPECT_THROW((void)nk_closed_form(PrimeModulus(5), 0), std::invalid_argument);

    EXPECT_EQ(nk_star_pair(PrimeModulus(7), 2), (StarPair{3, 2}));
    EXPECT_EQ(nk_star_pair(PrimeModulus(5), 3), (StarPair{0, 1}));
    EXPECT_EQ(nk_star_pair(PrimeModulus(5), 4), (StarPair{1, 0}));
}

// The +-1 variant is off: 7/5 and 16/7 where the true counts are 2 and 3.
TEST(ClosedForms, AlternativeConstantDisagrees) {
    EXPECT_EQ(nk_star_zero_alternative(PrimeModulus(5), 2), Rational(7, 5));
    EXPECT_EQ(nk_star_zero_alternative(PrimeModulus(7), 2), Rational(16, 7));
    EXPECT_EQ(brute_counts(5, 2, false)[0], 2u);
    EXPECT_EQ(brute_counts(7, 2, false)[0], 3u);
}

// Flatness, the +-1 offset, the recurrence and both closed forms, all primes up to 23.
TEST(ClosedForms, IdentitiesAgainstOracle) {
    for (std::uint32_t p : kPrimes) {
        const PrimeModulus pm(p);
        for (std::size_t k = 1; k <= p - 1; ++k) {
            const auto full = brute_counts(p, k, true);
            const auto star = brute_counts(p, k, false);
            const auto prev = brute_counts(p, k - 1, false);
            for (std::uint32_t a = 0; a < p; ++a) {
                ASSERT_EQ(full[a], full[0]);
                if (a > 0) ASSERT_EQ(star[a], star[1]);
                ASSERT_EQ(full[a], prev[a] + star[a]);
                ASSERT_EQ(nk_closed_form(pm, k), full[a]);
            }
            const long long offset = static_cast<long long>(star[0]) - static_cast<long long>(star[1]);
            ASSERT_EQ(offset, k % 2 == 0 ? 1 : -1) << "p=" << p << " k=" << k;
            const StarPair pair = nk_star_pair(pm, k);
            ASSERT_EQ(pair.at_zero, star[0]);
            ASSERT_EQ(pair.at_nonzero, star[1]);
        }
    }
}

TEST(SumProbability, Examples) {
    const auto r = max_sum_probability(8, 2);
    EXPECT_EQ(r.max_observed, Rational(1, 7));
    EXPECT_EQ(r.bound, Rational(1, 4));
    EXPECT_TRUE(r.pass);
    const auto t = max_sum_probability(3, 1);
    EXPECT_EQ(t.max_observed, Rational(1, 2));
    EXPECT_TRUE(t.pass);
    EXPECT_THROW((void)max_sum_probability(8, 7), std::invalid_argument);
    EXPECT_THROW((void)max_sum_probability(8, 0), std::invalid_argument);
}

TEST(SumProbability, MatchesOracle) {
    for (std::uint32_t n = 3; n <= 16; ++n) {
        for (std::size_t l = 1; l <= n - 2; ++l) {
            const auto oracle = brute_counts(n, l, false);
            const std::uint64_t mx = *std::max_element(oracle.begin(), oracle.end());
            const auto r = max_sum_probability(n, l);
            ASSERT_EQ(r.max_observed, Rational(BigInt(mx), binomial(n - 1, l)));
            ASSERT_TRUE(r.pass);
        }
    }
}

TEST(BadSubsets, Examples) {
    const auto a = bad_subset_bound_check(16, 3, 0);
    EXPECT_EQ(a.bound, Rational(6, 16));
    EXPECT_TRUE(a.pass);
    const auto b = bad_subset_bound_check(9, 1, 0);
    EXPECT_EQ(b.bound, 0);
    EXPECT_TRUE(b.pass);
    EXPECT_FALSE(bad_subset_bound_check(9, 1, 1).pass);
    const auto c = bad_subset_bound_check(10, 5, 0);
    EXPECT_EQ(c.bound, 2);
    EXPECT_TRUE(c.pass);
    EXPECT_THROW((void)bad_subset_bound_check(10, 10, 0), std::invalid_argument);
}
