#pragma once

/**
 * @file counting.hpp
 * @brief Exact counts of k-subsets of Z_n by their element sum.
 *
 * For a modulus n and a target alpha, the tables count the k-subsets of Z_n
 * (include_zero) or of Z_n \ {0} whose elements sum to alpha. Over a prime
 * field F_p these are N_k(alpha) and N_k*(alpha), and both have closed forms:
 *
 *   N_k(alpha)  = C(p, k) / p                       for every alpha
 *   N_k*(0)     = (C(p-1, k) + (p-1)) / p           for even k
 *   N_k*(0)     = (C(p-1, k) - (p-1)) / p           for odd k
 *   N_k*(alpha) = N_k*(0) - 1 (even k), + 1 (odd k) for alpha != 0
 *
 * The forms for N_k* follow from N_k*(0) - N_k*(alpha) = +-1 together with
 * N_k*(0) + (p-1) N_k*(alpha) = C(p-1, k). A commonly quoted variant with
 * +-1 in place of +-(p-1) is not an integer in general (p = 5, k = 2 gives 7/5)
 * and is exposed only as `nk_star_zero_alternative` for comparison.
 *
 * Everything here is exact: counts are arbitrary precision integers and
 * probabilities are exact rationals.
 */

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace psum {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

[[nodiscard]] bool is_prime(std::uint64_t v);

class PrimeModulus {
public:
    /// Throws std::invalid_argument unless p is prime.
    explicit PrimeModulus(std::uint32_t p);
    [[nodiscard]] std::uint32_t value() const noexcept { return p_; }

private:
    std::uint32_t p_;
};

struct SumCountTable {
    std::uint32_t n = 0;
    std::size_t k = 0;
    bool include_zero = false;
    std::vector<BigInt> counts;  // counts[alpha], alpha in [0, n)

    [[nodiscard]] BigInt total() const;
};

[[nodiscard]] BigInt binomial(std::uint64_t n, std::uint64_t k);

/// Dynamic program over elements in increasing order with state (chosen, sum).
/// Requires k <= n (include_zero) or k <= n - 1.
[[nodiscard]] SumCountTable sum_count_table(std::uint32_t n, std::size_t k, bool include_zero);

/// C(p, k) / p. Requires 1 <= k <= p - 1.
[[nodiscard]] BigInt nk_closed_form(const PrimeModulus& p, std::size_t k);

struct StarPair {
    BigInt at_zero;
    BigInt at_nonzero;
    friend bool operator==(const StarPair&, const StarPair&) = default;
};

/// (N_k*(0), N_k*(alpha != 0)). Requires 1 <= k <= p - 1.
[[nodiscard]] StarPair nk_star_pair(const PrimeModulus& p, std::size_t k);

/// (C(p-1, k) + 1) / p for even k, (C(p-1, k) - 1) / p for odd k, as an exact
/// rational. Disagrees with the true N_k*(0); kept to document that.
[[nodiscard]] Rational nk_star_zero_alternative(const PrimeModulus& p, std::size_t k);

struct BoundCheckReport {
    std::uint32_t n = 0;
    std::size_t parameter = 0;  // l for the sum-probability bound, k for the bad-subset bound
    Rational max_observed;
    Rational bound;
    bool pass = false;
};

/// max_t #{l-subsets of Z_n \ {0} with sum t} / C(n-1, l) against 2/n.
/// Requires 1 <= l <= n - 2.
[[nodiscard]] BoundCheckReport max_sum_probability(std::uint32_t n, std::size_t l);

/// bad_count / C(n-1, k) against k(k-1)/n. Requires 1 <= k <= n - 1.
[[nodiscard]] BoundCheckReport bad_subset_bound_check(std::uint32_t n, std::size_t k,
                                                      std::uint64_t bad_count);

}  // namespace psum
