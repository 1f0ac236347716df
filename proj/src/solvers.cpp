#include "psum/solvers.hpp"

#include <algorithm>
#include <string>
#include <vector>

#include "psum/rng.hpp"

namespace psum {

std::string_view to_string(SolveMethod method) noexcept {
    switch (method) {
        case SolveMethod::Exhaustive: return "exhaustive";
        case SolveMethod::Random: return "random";
        case SolveMethod::Constructive: return "constructive";
        case SolveMethod::Greedy: return "greedy";
    }
    return "exhaustive";
}

SolveMethod parse_method(std::string_view text) {
    if (text == "exhaustive") return SolveMethod::Exhaustive;
    if (text == "random") return SolveMethod::Random;
    if (text == "constructive") return SolveMethod::Constructive;
    if (text == "greedy") return SolveMethod::Greedy;
    throw std::invalid_argument("unknown method '" + std::string(text) + "'");
}

BudgetExhausted::BudgetExhausted(std::uint64_t budget)
    : std::runtime_error("search node budget of " + std::to_string(budget) + " exhausted"),
      budget_(budget) {}

namespace {

class ExhaustiveSearch {
public:
    ExhaustiveSearch(const Subset& subset, ValidationMode mode, std::uint64_t budget)
        : m_(subset.modulus()),
          elems_(subset.elements().begin(), subset.elements().end()),
          budget_(budget),
          seen_(subset.modulus().value(), 0),
          used_(elems_.size(), 0) {
        if (mode == ValidationMode::DistinctNonzero) seen_[0] = 1;
        seq_.reserve(elems_.size());
    }

    bool search(Residue sum) {
        if (seq_.size() == elems_.size()) return true;
        for (std::size_t i = 0; i < elems_.size(); ++i) {
            if (used_[i]) continue;
            const Residue s = m_.add(sum, elems_[i]);
            if (seen_[s]) continue;
            if (++nodes_ > budget_) throw BudgetExhausted(budget_);
            used_[i] = 1;
            seen_[s] = 1;
            seq_.push_back(elems_[i]);
            if (search(s)) return true;
            seq_.pop_back();
            seen_[s] = 0;
            used_[i] = 0;
        }
        return false;
    }

    std::vector<Residue> take_sequence() { return std::move(seq_); }
    [[nodiscard]] std::uint64_t nodes() const { return nodes_; }

private:
    Modulus m_;
    std::vector<Residue> elems_;
    std::uint64_t budget_;
    std::uint64_t nodes_ = 0;
    std::vector<char> seen_;
    std::vector<char> used_;
    std::vector<Residue> seq_;
};

}  // namespace

SolveOutcome exhaustive_sequencing(const Subset& subset, ValidationMode mode,
                                   std::uint64_t node_budget) {
    ExhaustiveSearch search(subset, mode, node_budget);
    SolveOutcome out;
    out.method = SolveMethod::Exhaustive;
    if (search.search(0)) out.ordering.emplace(subset.modulus(), search.take_sequence());
    out.tries = search.nodes();
    return out;
}

SolveOutcome random_sequencing(const Subset& subset, ValidationMode mode, std::uint64_t seed,
                               std::uint64_t max_tries) {
    if (max_tries == 0) throw std::invalid_argument("max_tries must be at least 1");
    const Modulus& m = subset.modulus();
    const bool forbid_zero = mode == ValidationMode::DistinctNonzero;
    std::vector<Residue> pool(subset.elements().begin(), subset.elements().end());
    const std::size_t k = pool.size();
    std::vector<std::uint32_t> stamp(m.value(), 0);
    std::uint32_t epoch = 0;
    Rng rng(seed);

    SolveOutcome out;
    out.method = SolveMethod::Random;
    for (std::uint64_t attempt = 1; attempt <= max_tries; ++attempt) {
        if (++epoch == 0) {
            std::fill(stamp.begin(), stamp.end(), 0);
            epoch = 1;
        }
        // Fisher-Yates, drawn lazily: the try is abandoned at the first clash.
        // Whatever arrangement the pool is left in, the next shuffle is uniform.
        Residue sum = 0;
        std::size_t i = 0;
        for (; i < k; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.below(k - i));
            std::swap(pool[i], pool[j]);
            sum = m.add(sum, pool[i]);
            if ((forbid_zero && sum == 0) || stamp[sum] == epoch) break;
            stamp[sum] = epoch;
        }
        if (i == k) {
            out.ordering.emplace(m, pool);
            out.tries = attempt;
            return out;
        }
    }
    out.tries = max_tries;
    return out;
}

GreedyResult greedy_prefix(const Subset& subset) {
    const Modulus& m = subset.modulus();
    auto elems = subset.elements();
    std::vector<char> seen(m.value(), 0);
    std::vector<char> used(elems.size(), 0);
    std::vector<Residue> seq;
    Residue sum = 0;
    for (bool extended = true; extended;) {
        extended = false;
        for (std::size_t i = 0; i < elems.size(); ++i) {
            if (used[i]) continue;
            const Residue s = m.add(sum, elems[i]);
            if (seen[s]) continue;
            used[i] = 1;
            seen[s] = 1;
            seq.push_back(elems[i]);
            sum = s;
            extended = true;
            break;
        }
    }
    const std::size_t floor = (elems.size() + 2) / 2;  // ceil((k + 1) / 2)
    if (seq.size() < floor) {
        throw std::logic_error("greedy prefix of length " + std::to_string(seq.size()) +
                               " is below its guaranteed floor");
    }
    return GreedyResult{Ordering(m, std::move(seq)), floor};
}

std::uint64_t count_orderable_subsets(const Subset& subset, std::size_t t,
                                      std::uint64_t node_budget) {
    const std::size_t k = subset.size();
    if (t > k) throw std::invalid_argument("t exceeds the subset size");
    if (t == 0) return 1;
    auto elems = subset.elements();
    std::vector<std::size_t> idx(t);
    for (std::size_t i = 0; i < t; ++i) idx[i] = i;
    std::vector<Residue> pick(t);
    std::uint64_t count = 0;
    while (true) {
        for (std::size_t i = 0; i < t; ++i) pick[i] = elems[idx[i]];
        const Subset b(subset.modulus(), pick);
        if (exhaustive_sequencing(b, ValidationMode::DistinctOnly, node_budget).ordering) ++count;
        // Next combination in lexicographic order.
        std::size_t i = t;
        while (i > 0 && idx[i - 1] == k - t + (i - 1)) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (std::size_t j = i; j < t; ++j) idx[j] = idx[j - 1] + 1;
    }
    return count;
}

Ordering extend_strong_sequencing(const Ordering& strong_ordering, Residue extra) {
    const Modulus& m = strong_ordering.modulus();
    if (!is_sequencing(strong_ordering, ValidationMode::DistinctNonzero)) {
        throw std::invalid_argument("ordering is not a strong sequencing");
    }
    if (extra == 0 || extra >= m.value()) throw std::invalid_argument("extra must be a nonzero residue");
    auto seq = strong_ordering.sequence();
    std::vector<Residue> out(seq.begin(), seq.end());
    Residue sum = 0;
    for (Residue a : out) {
        if (a == extra) throw std::invalid_argument("extra is already in the ordering");
        sum = m.add(sum, a);
    }
    if (m.add(sum, extra) != 0) throw std::invalid_argument("sum with extra is not 0 mod n");
    out.push_back(extra);
    return Ordering(m, std::move(out));
}

}  // namespace psum
