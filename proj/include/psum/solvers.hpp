#pragma once

// Sequencing strategies over subsets of Z_n \ {0}.
//
// Every solver returns orderings that pass is_sequencing for the mode it was
// asked to satisfy. The exhaustive solver is the ground truth the others are
// checked against.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

#include "psum/modular.hpp"

namespace psum {

enum class SolveMethod { Exhaustive, Random, Constructive, Greedy };

[[nodiscard]] std::string_view to_string(SolveMethod method) noexcept;
/// Accepts the lowercase names used in certificates.
[[nodiscard]] SolveMethod parse_method(std::string_view text);

struct SolveOutcome {
    std::optional<Ordering> ordering;
    std::uint64_t tries = 0;
    SolveMethod method = SolveMethod::Exhaustive;
};

struct GreedyResult {
    Ordering ordering;                 // over some B ⊆ A
    std::size_t guaranteed_floor = 0;  // ceil((|A| + 1) / 2)
};

/// Search node budget was spent before the search space was exhausted.
class BudgetExhausted : public std::runtime_error {
public:
    explicit BudgetExhausted(std::uint64_t budget);
    [[nodiscard]] std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t budget_;
};

/// constructive_small only covers |A| <= 6.
class SizeTooLarge : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The constructive decision tree reached a state its case analysis rules out.
/// This is always an implementation defect.
class InternalCaseViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 200'000'000;

/// Lexicographically smallest valid ordering, found by depth-first search that
/// prunes any prefix with a repeated (or, in DistinctNonzero mode, zero) sum.
/// `tries` is the number of search nodes visited. Throws BudgetExhausted.
[[nodiscard]] SolveOutcome exhaustive_sequencing(const Subset& subset, ValidationMode mode,
                                                 std::uint64_t node_budget = kDefaultNodeBudget);

/// Draws uniform random permutations until one is valid or max_tries is spent.
/// Deterministic in (subset, mode, seed, max_tries); see rng.hpp.
[[nodiscard]] SolveOutcome random_sequencing(const Subset& subset, ValidationMode mode,
                                             std::uint64_t seed, std::uint64_t max_tries);

/// Bounded case analysis for |A| <= 6 (DistinctOnly). `tries` counts the
/// candidate orderings whose partial sums were inspected.
[[nodiscard]] SolveOutcome constructive_sequencing(const Subset& subset);
[[nodiscard]] Ordering constructive_small(const Subset& subset);

/// Extends a prefix with the smallest unused element that keeps the partial
/// sums distinct, until no element does.
[[nodiscard]] GreedyResult greedy_prefix(const Subset& subset);

/// Number of t-subsets B ⊆ A that admit a DistinctOnly sequencing.
/// node_budget applies to each exhaustive call.
[[nodiscard]] std::uint64_t count_orderable_subsets(const Subset& subset, std::size_t t,
                                                    std::uint64_t node_budget = kDefaultNodeBudget);

/// Appends `extra` to a strong sequencing whose sum plus `extra` is 0, giving a
/// sequencing of the larger set. Throws std::invalid_argument on bad input.
[[nodiscard]] Ordering extend_strong_sequencing(const Ordering& strong_ordering, Residue extra);

}  // namespace psum
