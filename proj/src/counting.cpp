#include "psum/counting.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace psum {

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

void check_star_range(const PrimeModulus& p, std::size_t k) {
    if (k < 1 || k > p.value() - 1) {
        throw std::invalid_argument("k must lie in [1, p-1], got " + std::to_string(k));
    }
}

}  // namespace

// Miller-Rabin with the first twelve primes as bases is exact below 3.3e24.
bool is_prime(std::uint64_t v) {
    if (v < 2) return false;
    static constexpr std::uint64_t bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::uint64_t q : bases) {
        if (v % q == 0) return v == q;
    }
    std::uint64_t d = v - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : bases) {
        std::uint64_t x = pow_mod(a, d, v);
        if (x == 1 || x == v - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, v);
            if (x == v - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeModulus::PrimeModulus(std::uint32_t p) : p_(p) {
    if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
}

BigInt SumCountTable::total() const {
    BigInt t = 0;
    for (const auto& c : counts) t += c;
    return t;
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

SumCountTable sum_count_table(std::uint32_t n, std::size_t k, bool include_zero) {
    if (n < 1) throw std::invalid_argument("modulus must be positive");
    const std::uint32_t available = include_zero ? n : n - 1;
    if (k > available) throw std::invalid_argument("k exceeds the number of available elements");

    // ways[c][r]: subsets of the elements seen so far with c elements summing to r.
    std::vector<std::vector<BigInt>> ways(k + 1, std::vector<BigInt>(n, 0));
    ways[0][0] = 1;
    for (std::uint32_t e = include_zero ? 0 : 1; e < n; ++e) {
        for (std::size_t c = std::min<std::size_t>(k, e + 1); c >= 1; --c) {
            const auto& prev = ways[c - 1];
            auto& cur = ways[c];
            for (std::uint32_t r = 0; r < n; ++r) {
                if (prev[r] != 0) cur[(r + e) % n] += prev[r];
            }
        }
    }

    SumCountTable table{n, k, include_zero, std::move(ways[k])};
    if (table.total() != binomial(available, k)) {
        throw std::logic_error("sum count table total disagrees with the binomial coefficient");
    }
    return table;
}

BigInt nk_closed_form(const PrimeModulus& p, std::size_t k) {
    check_star_range(p, k);
    const BigInt c = binomial(p.value(), k);
    if (c % p.value() != 0) throw std::logic_error("C(p, k) is not divisible by p");
    return c / p.value();
}

StarPair nk_star_pair(const PrimeModulus& p, std::size_t k) {
    check_star_range(p, k);
    const BigInt c = binomial(p.value() - 1, k);
    const BigInt q = p.value() - 1;
    const bool even = k % 2 == 0;
    // N*(0) = N*(a) +- 1 and N*(0) + (p-1) N*(a) = C(p-1, k).
    const BigInt zero_num = even ? BigInt(c + q) : BigInt(c - q);
    if (zero_num % p.value() != 0) throw std::logic_error("N_k*(0) is not an integer");
    StarPair out;
    out.at_zero = zero_num / p.value();
    out.at_nonzero = even ? BigInt(out.at_zero - 1) : BigInt(out.at_zero + 1);
    if (out.at_zero < 0 || out.at_nonzero < 0 || out.at_zero + q * out.at_nonzero != c) {
        throw std::logic_error("N_k* pair does not satisfy the total count");
    }
    return out;
}

Rational nk_star_zero_alternative(const PrimeModulus& p, std::size_t k) {
    check_star_range(p, k);
    const BigInt c = binomial(p.value() - 1, k);
    const BigInt num = k % 2 == 0 ? BigInt(c + 1) : BigInt(c - 1);
    return Rational(num, BigInt(p.value()));
}

BoundCheckReport max_sum_probability(std::uint32_t n, std::size_t l) {
    if (n < 3 || l < 1 || l > n - 2) {
        throw std::invalid_argument("l must lie in [1, n-2]");
    }
    const SumCountTable table = sum_count_table(n, l, false);
    const BigInt best = *std::max_element(table.counts.begin(), table.counts.end());
    BoundCheckReport r;
    r.n = n;
    r.parameter = l;
    r.max_observed = Rational(best, binomial(n - 1, l));
    r.bound = Rational(2, n);
    r.pass = r.max_observed <= r.bound;
    return r;
}

BoundCheckReport bad_subset_bound_check(std::uint32_t n, std::size_t k, std::uint64_t bad_count) {
    if (n < 2 || k < 1 || k > n - 1) throw std::invalid_argument("k must lie in [1, n-1]");
    const BigInt subsets = binomial(n - 1, k);
    if (bad_count > subsets) throw std::invalid_argument("bad_count exceeds the number of k-subsets");
    BoundCheckReport r;
    r.n = n;
    r.parameter = k;
    r.max_observed = Rational(BigInt(bad_count), subsets);
    r.bound = Rational(BigInt(k) * (k - 1), BigInt(n));
    r.pass = r.max_observed <= r.bound;
    return r;
}

}  // namespace psum
