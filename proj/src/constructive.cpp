// Bounded case analysis that sequences any subset with at most six elements.
//
// The subset is split into inverse pairs {x, -x} and unpaired elements. Each
// (size, pair count) combination starts from a fixed pattern of roles, checks
// which partial sums coincide, and applies the reordering prescribed for that
// exact combination of coincidences. Combinations outside the enumerated list
// are impossible; reaching one raises InternalCaseViolation.
//
// Roles are assigned by scanning permutations of the sorted elements in
// lexicographic order and taking the first one whose pair roles really are
// inverse pairs and that satisfies the entry condition of its case.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

#include "psum/solvers.hpp"

namespace psum {
namespace {

using Seq = std::vector<Residue>;

/// Bit for the coincidence s_i = s_j (1-based, i < j <= 6).
constexpr std::uint64_t eq_bit(unsigned i, unsigned j) {
    return std::uint64_t{1} << ((i - 1) * 6 + (j - 1));
}

constexpr std::uint64_t bits(std::initializer_list<std::pair<unsigned, unsigned>> pairs) {
    std::uint64_t b = 0;
    for (auto [i, j] : pairs) b |= eq_bit(i, j);
    return b;
}

struct Candidate {
    Seq seq;
    Seq sums;

    [[nodiscard]] bool eq(unsigned i, unsigned j) const { return sums[i - 1] == sums[j - 1]; }

    /// All coincidences s_i = s_j with i < j.
    [[nodiscard]] std::uint64_t coincidences() const {
        std::uint64_t f = 0;
        for (unsigned i = 1; i <= sums.size(); ++i) {
            for (unsigned j = i + 1; j <= sums.size(); ++j) {
                if (eq(i, j)) f |= eq_bit(i, j);
            }
        }
        return f;
    }
};

class DecisionTree {
public:
    explicit DecisionTree(const Subset& subset)
        : m_(subset.modulus()), elems_(subset.elements().begin(), subset.elements().end()) {}

    Candidate inspect(Seq seq) {
        ++tries_;
        Candidate c{std::move(seq), {}};
        Residue s = 0;
        for (Residue a : c.seq) {
            s = m_.add(s, a);
            c.sums.push_back(s);
        }
        return c;
    }

    /// First role assignment (lexicographic over element permutations) in which
    /// every listed role pair sums to 0 and `entry` accepts the inspected ordering.
    Candidate assign(std::initializer_list<std::pair<unsigned, unsigned>> inverse_roles,
                     const std::function<bool(const Candidate&)>& entry = nullptr) {
        Seq perm = elems_;
        do {
            bool fits = true;
            for (auto [a, b] : inverse_roles) {
                if (m_.add(perm[a], perm[b]) != 0) {
                    fits = false;
                    break;
                }
            }
            if (!fits) continue;
            Candidate c = inspect(perm);
            if (!entry || entry(c)) return c;
        } while (std::next_permutation(perm.begin(), perm.end()));
        violation("no role assignment satisfies the entry condition");
    }

    [[noreturn]] void violation(const std::string& what) const {
        throw InternalCaseViolation("constructive k=" + std::to_string(elems_.size()) + " mod " +
                                    std::to_string(m_.value()) + " {" + join_residues(elems_) +
                                    "}: " + what);
    }

    /// Fails unless the coincidences of `c` are a subset of `allowed`.
    void expect_within(const Candidate& c, std::uint64_t allowed) const {
        if ((c.coincidences() & ~allowed) != 0) violation("unexpected coincidence in " + join_residues(c.seq));
    }

    /// Index of the single case predicate that holds; -1 when none does.
    int dispatch(std::initializer_list<bool> cases) const {
        int hit = -1;
        int i = 0;
        for (bool c : cases) {
            if (c) {
                if (hit != -1) violation("case conditions are not mutually exclusive");
                hit = i;
            }
            ++i;
        }
        return hit;
    }

    [[nodiscard]] std::size_t size() const { return elems_.size(); }
    [[nodiscard]] const Seq& elements() const { return elems_; }
    [[nodiscard]] std::uint64_t tries() const { return tries_; }

private:
    Modulus m_;
    Seq elems_;
    std::uint64_t tries_ = 0;
};

bool distinct_prefix(const Candidate& c, unsigned len) {
    for (unsigned i = 1; i <= len; ++i) {
        for (unsigned j = i + 1; j <= len; ++j) {
            if (c.eq(i, j)) return false;
        }
    }
    return true;
}

Candidate small_k(DecisionTree& t, std::size_t p) {
    if (t.size() == 3 && p == 1) {
        const Candidate r = t.assign({{0, 1}});
        const Residue x = r.seq[0], nx = r.seq[1], z = r.seq[2];
        return t.inspect({x, z, nx});
    }
    // k <= 2, or k = 3 without an inverse pair: any order works.
    return t.inspect(t.elements());
}

Candidate k4(DecisionTree& t, std::size_t p) {
    if (p == 0) {
        Candidate a = t.assign({}, [](const Candidate& c) { return distinct_prefix(c, 3); });
        t.expect_within(a, bits({{1, 4}}));
        if (!a.eq(1, 4)) return a;
        const auto& s = a.seq;
        return t.inspect({s[1], s[0], s[2], s[3]});
    }
    if (p == 1) {
        const Candidate r = t.assign({{0, 1}});
        const Residue x = r.seq[0], nx = r.seq[1], y = r.seq[2], z = r.seq[3];
        return t.inspect({z, x, y, nx});
    }
    const Candidate r = t.assign({{0, 1}, {2, 3}});
    const Residue x = r.seq[0], nx = r.seq[1], y = r.seq[2], ny = r.seq[3];
    return t.inspect({x, y, nx, ny});
}

Candidate k5(DecisionTree& t, std::size_t p) {
    if (p == 0) {
        Candidate a = t.assign({}, [](const Candidate& c) { return distinct_prefix(c, 3); });
        t.expect_within(a, bits({{1, 4}, {2, 5}, {1, 5}}));
        const Residue a1 = a.seq[0], a2 = a.seq[1], a3 = a.seq[2], a4 = a.seq[3], a5 = a.seq[4];
        switch (t.dispatch({a.eq(1, 4), a.eq(2, 5), a.eq(1, 5)})) {
            case -1: return a;
            case 0: return t.inspect({a1, a2, a3, a5, a4});
            case 1: return t.inspect({a1, a3, a2, a4, a5});
            default: {
                Candidate b = t.inspect({a2, a1, a3, a4, a5});
                if (!b.eq(1, 4)) return b;
                return t.inspect({a3, a2, a1, a4, a5});
            }
        }
    }
    if (p == 1) {
        const Candidate r = t.assign({{0, 1}});
        const Residue x = r.seq[0], nx = r.seq[1], y = r.seq[2], z = r.seq[3], w = r.seq[4];
        Candidate a = t.inspect({z, x, y, nx, w});
        t.expect_within(a, bits({{2, 5}}));
        if (!a.eq(2, 5)) return a;
        return t.inspect({z, nx, y, x, w});
    }
    const Candidate r = t.assign({{0, 1}, {2, 3}});
    const Residue x = r.seq[0], nx = r.seq[1], y = r.seq[2], ny = r.seq[3], z = r.seq[4];
    Candidate a = t.inspect({x, y, z, ny, nx});
    t.expect_within(a, bits({{2, 5}}));
    if (!a.eq(2, 5)) return a;
    Candidate b = t.inspect({nx, y, z, ny, x});
    t.expect_within(b, 0);
    return b;
}

Candidate k6_no_pairs(DecisionTree& t) {
    Candidate a = t.assign({}, [](const Candidate& c) { return distinct_prefix(c, 4); });
    const Residue u = a.seq[0], v = a.seq[1], w = a.seq[2], x = a.seq[3], y = a.seq[4], z = a.seq[5];
    const std::uint64_t f = a.coincidences();
    t.expect_within(a, bits({{1, 5}, {3, 6}, {1, 6}, {2, 5}, {2, 6}}));
    switch (t.dispatch({f == bits({{1, 5}, {3, 6}}), f == bits({{1, 5}}), f == bits({{3, 6}}),
                        f == bits({{1, 6}}), f == bits({{2, 5}}), f == bits({{2, 6}})})) {
        case -1:
            if (f != 0) t.violation("unlisted combination of coincidences");
            return a;
        case 0: return t.inspect({u, v, x, w, z, y});
        case 1: {
            Candidate b = t.inspect({u, v, w, x, z, y});
            if (!b.eq(2, 5)) return b;
            return t.inspect({u, w, v, x, z, y});
        }
        case 2: return t.inspect({u, v, x, w, y, z});
        case 3: {
            Candidate b = t.inspect({v, u, w, x, y, z});
            switch (t.dispatch({b.eq(1, 4), b.eq(1, 5)})) {
                case -1: return b;
                case 0: return t.inspect({v, u, w, y, x, z});
                default: return t.inspect({v, u, w, y, z, x});
            }
        }
        case 4: {
            Candidate b = t.inspect({u, v, w, x, z, y});
            if (!b.eq(1, 5)) return b;
            return t.inspect({u, v, w, z, y, x});
        }
        default: {
            Candidate b = t.inspect({u, w, v, x, y, z});
            if (!b.eq(2, 5)) return b;
            return t.inspect({u, w, v, x, z, y});
        }
    }
}

Candidate k6_one_pair(DecisionTree& t) {
    const Candidate r = t.assign({{0, 1}});
    const Residue x = r.seq[0], nx = r.seq[1], v = r.seq[2], w = r.seq[3], y = r.seq[4], z = r.seq[5];
    Candidate a = t.inspect({x, v, nx, w, y, z});
    t.expect_within(a, bits({{1, 4}, {1, 5}, {1, 6}, {2, 5}, {2, 6}, {3, 6}}));
    if (a.coincidences() == 0) return a;
    const bool e14 = a.eq(1, 4), e15 = a.eq(1, 5), e16 = a.eq(1, 6);
    const bool e25 = a.eq(2, 5), e26 = a.eq(2, 6), e36 = a.eq(3, 6);
    switch (t.dispatch({e14 && e26, e14 && e36, e14 && !e26 && !e36, !e14 && e26,
                        !e14 && !e15 && e36, e15 && e36, e15 && !e36, e16, e25})) {
        case -1: t.violation("unlisted combination of coincidences");
        case 0: return t.inspect({x, w, y, v, nx, z});
        case 1: return t.inspect({x, v, w, y, nx, z});
        case 2: {
            Candidate b = t.inspect({x, v, w, y, nx, z});
            if (!b.eq(3, 6)) return b;
            return t.inspect({x, w, y, v, nx, z});
        }
        case 3: {
            Candidate b = t.inspect({x, w, v, nx, y, z});
            if (!b.eq(2, 5)) return b;
            return t.inspect({x, w, v, nx, z, y});
        }
        case 4: return t.inspect({x, v, w, nx, y, z});
        case 5: return t.inspect({x, v, w, nx, z, y});
        case 6: {
            Candidate b = t.inspect({x, v, nx, w, z, y});
            if (!b.eq(2, 5)) return b;
            return t.inspect({x, v, z, nx, y, w});
        }
        case 7: return t.inspect({v, x, w, nx, y, z});
        default: {
            Candidate b = t.inspect({x, v, nx, w, z, y});
            if (!b.eq(1, 5)) return b;
            return t.inspect({v, x, w, nx, z, y});
        }
    }
}

Candidate k6_two_pairs(DecisionTree& t) {
    const Candidate r = t.assign({{0, 1}, {2, 3}});
    const Residue x = r.seq[0], nx = r.seq[1], y = r.seq[2], ny = r.seq[3], w = r.seq[4], z = r.seq[5];
    Candidate a = t.inspect({x, y, nx, ny, w, z});
    const std::uint64_t f = a.coincidences();
    t.expect_within(a, bits({{1, 6}, {2, 5}, {2, 6}, {3, 6}}));
    switch (t.dispatch({f == bits({{1, 6}}), f == bits({{2, 5}}), f == bits({{2, 6}}),
                        f == bits({{3, 6}})})) {
        case -1:
            if (f != 0) t.violation("unlisted combination of coincidences");
            return a;
        case 0: return t.inspect({w, x, y, nx, z, ny});
        case 1: return t.inspect({x, y, nx, ny, z, w});
        case 2: {
            Candidate b = t.inspect({x, z, ny, w, y, nx});
            if (!b.eq(3, 6)) return b;
            return t.inspect({x, w, y, z, nx, ny});
        }
        default: {
            Candidate b = t.inspect({w, x, y, nx, z, ny});
            if (!b.eq(2, 5)) return b;
            return t.inspect({x, y, w, nx, z, ny});
        }
    }
}

Candidate k6_three_pairs(DecisionTree& t) {
    const Candidate r = t.assign({{0, 1}, {2, 3}, {4, 5}});
    const Residue x = r.seq[0], nx = r.seq[1], y = r.seq[2], ny = r.seq[3], z = r.seq[4], nz = r.seq[5];
    Candidate a = t.inspect({x, y, z, nx, ny, nz});
    const std::uint64_t f = a.coincidences();
    t.expect_within(a, bits({{1, 4}, {2, 5}, {3, 6}}));
    switch (t.dispatch({f == bits({{1, 4}}), f == bits({{2, 5}}), f == bits({{3, 6}})})) {
        case -1:
            if (f != 0) t.violation("unlisted combination of coincidences");
            return a;
        case 0: return t.inspect({x, y, z, ny, nx, nz});
        case 1: return t.inspect({x, ny, z, y, nx, nz});
        default: return t.inspect({x, y, nz, nx, z, ny});
    }
}

}  // namespace

SolveOutcome constructive_sequencing(const Subset& subset) {
    const std::size_t k = subset.size();
    if (k > 6) throw SizeTooLarge("constructive sequencing covers at most 6 elements, got " + std::to_string(k));
    const std::size_t p = inverse_pair_count(subset);
    DecisionTree tree(subset);

    Candidate result = [&] {
        switch (k) {
            case 4: return k4(tree, p);
            case 5: return k5(tree, p);
            case 6:
                switch (p) {
                    case 0: return k6_no_pairs(tree);
                    case 1: return k6_one_pair(tree);
                    case 2: return k6_two_pairs(tree);
                    default: return k6_three_pairs(tree);
                }
            default: return small_k(tree, p);
        }
    }();
    if (result.coincidences() != 0) tree.violation("final ordering " + join_residues(result.seq) + " repeats a partial sum");

    SolveOutcome out;
    out.ordering.emplace(subset.modulus(), std::move(result.seq));
    out.tries = tree.tries();
    out.method = SolveMethod::Constructive;
    return out;
}

Ordering constructive_small(const Subset& subset) {
    return *constructive_sequencing(subset).ordering;
}

}  // namespace psum
