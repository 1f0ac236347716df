#pragma once

/**
 * @file modular.hpp
 * @brief Residues of Z_n, subsets of Z_n \ {0}, orderings and their partial sums.
 *
 * An ordering (a_1, ..., a_k) of a subset A has partial sums s_j = a_1 + ... + a_j
 * and runs r_{i,j} = a_i + ... + a_j, all reduced mod n. An ordering is a
 * sequencing when its partial sums are pairwise distinct, and a strong
 * sequencing when they are additionally all nonzero. Since s_i = s_j exactly
 * when r_{i+1,j} = 0, both conditions can also be phrased through runs.
 *
 * All values are immutable after construction. Residues are kept in the
 * canonical range [0, n).
 */

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace psum {

using Residue = std::uint32_t;

class Modulus {
public:
    /// Throws std::invalid_argument when n < 2.
    explicit Modulus(std::uint32_t n);

    [[nodiscard]] std::uint32_t value() const noexcept { return n_; }

    [[nodiscard]] Residue add(Residue a, Residue b) const noexcept {
        std::uint32_t s = a + b;  // a, b < n <= 2^31
        return s >= n_ ? s - n_ : s;
    }
    [[nodiscard]] Residue neg(Residue a) const noexcept { return a == 0 ? 0 : n_ - a; }
    [[nodiscard]] Residue reduce(std::uint64_t v) const noexcept {
        return static_cast<Residue>(v % n_);
    }

    friend bool operator==(const Modulus&, const Modulus&) = default;

private:
    std::uint32_t n_;
};

/// A nonempty set A of nonzero residues, stored strictly increasing.
class Subset {
public:
    /// Elements must already be strictly increasing and lie in [1, n-1].
    Subset(Modulus modulus, std::vector<Residue> elements);

    /// Accepts any order; rejects duplicates, zero and out-of-range values.
    static Subset from_unsorted(Modulus modulus, std::vector<Residue> elements);

    /// Bit i-1 of mask selects element i. Requires n <= 64 and mask != 0.
    static Subset from_mask(Modulus modulus, std::uint64_t mask);

    [[nodiscard]] const Modulus& modulus() const noexcept { return modulus_; }
    [[nodiscard]] std::span<const Residue> elements() const noexcept { return elements_; }
    [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
    [[nodiscard]] bool contains(Residue r) const noexcept;

    /// Inverse of from_mask. Requires n <= 64.
    [[nodiscard]] std::uint64_t mask() const;

    friend bool operator==(const Subset&, const Subset&) = default;

private:
    Modulus modulus_;
    std::vector<Residue> elements_;
};

/// A sequence of distinct nonzero residues (a permutation of some Subset).
class Ordering {
public:
    Ordering(Modulus modulus, std::vector<Residue> sequence);

    [[nodiscard]] const Modulus& modulus() const noexcept { return modulus_; }
    [[nodiscard]] std::span<const Residue> sequence() const noexcept { return sequence_; }
    [[nodiscard]] std::size_t size() const noexcept { return sequence_.size(); }

    /// The set of elements this ordering permutes.
    [[nodiscard]] Subset subset() const;

    friend bool operator==(const Ordering&, const Ordering&) = default;

private:
    Modulus modulus_;
    std::vector<Residue> sequence_;
};

enum class ValidationMode {
    DistinctOnly,     // partial sums pairwise distinct
    DistinctNonzero,  // ... and none equal to 0
};

struct PartialSumProfile {
    std::vector<Residue> sums;
    friend bool operator==(const PartialSumProfile&, const PartialSumProfile&) = default;
};

[[nodiscard]] PartialSumProfile partial_sums(const Ordering& ordering);

/// r_{i,j} with 1-based inclusive indices. Throws std::out_of_range unless 1 <= i <= j <= k.
[[nodiscard]] Residue run(const Ordering& ordering, std::size_t i, std::size_t j);

[[nodiscard]] bool is_sequencing(const Ordering& ordering, ValidationMode mode);

/// Same predicate evaluated through runs: no r_{i,j} = 0 for 2 <= i <= j <= k
/// (DistinctOnly), or for 1 <= i <= j <= k (DistinctNonzero).
[[nodiscard]] bool is_sequencing_via_runs(const Ordering& ordering, ValidationMode mode);

[[nodiscard]] Residue subset_sum(const Subset& subset);

/// Number of pairs {x, n-x} inside the subset with x != n-x.
[[nodiscard]] std::size_t inverse_pair_count(const Subset& subset);

[[nodiscard]] std::string_view to_string(ValidationMode mode) noexcept;
/// Accepts "distinct" and "nonzero". Throws std::invalid_argument otherwise.
[[nodiscard]] ValidationMode parse_mode(std::string_view text);

/// Comma separated decimal list, e.g. "1,6,3".
[[nodiscard]] std::string join_residues(std::span<const Residue> values);

}  // namespace psum
