// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Run with criterion numbers as arguments to select a subset, e.g. `acceptance 3 9`.

#include <algorithm>
#include <bit>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "cli.hpp"
#include "psum/counting.hpp"
#include "psum/harness.hpp"
#include "psum/rng.hpp"

using namespace psum;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects the first few problems; everything else is just counted.
class Tally {
public:
    void fail(const std::string& what) {
        if (++failures_ <= 5) notes_ << (failures_ > 1 ? "; " : "") << what;
    }
    void check(bool ok, const std::string& what) {
        ++checks_;
        if (!ok) fail(what);
    }
    [[nodiscard]] Outcome done(const std::string& summary) const {
        std::ostringstream s;
        s << summary << " (" << checks_ << " checks";
        if (failures_) s << ", " << failures_ << " violations: " << notes_.str();
        s << ")";
        return {failures_ == 0, s.str()};
    }

private:
    std::uint64_t checks_ = 0;
    std::uint64_t failures_ = 0;
    std::ostringstream notes_;
};

fs::path workdir() {
    fs::path d = fs::temp_directory_path() / ("psum_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
}

std::string set_str(const Subset& s) { return "{" + join_residues(s.elements()) + "} mod " + std::to_string(s.modulus().value()); }

// 1. Every subset for every n <= 18 is sequenced in distinct mode.
Outcome distinct_sweeps(const fs::path& dir) {
    Tally t;
    std::uint64_t subsets = 0;
    for (std::uint32_t n = 2; n <= 18; ++n) {
        SweepConfig c;
        c.n = n;
        const SweepReport r = sweep(c);
        subsets += r.total;
        t.check(r.total == c.universe_end() - 1, "n=" + std::to_string(n) + " visited " + std::to_string(r.total));
        t.check(r.failures.empty() && r.solved == r.total,
                "n=" + std::to_string(n) + " has " + std::to_string(r.failures.size()) + " failures");
        std::ofstream(dir / ("distinct_" + std::to_string(n) + ".json")) << r.to_json().dump() << '\n';
    }
    return t.done(std::to_string(subsets) + " subsets over n=2..18, zero failures required");
}

// 2. The constructive decision tree covers every k <= 6 subset for n <= 18.
Outcome constructive_complete() {
    Tally t;
    std::uint64_t violations = 0, subsets = 0;
    for (std::uint32_t n = 2; n <= 18; ++n) {
        const Modulus m(n);
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
            if (std::popcount(mask) > 6) continue;
            const Subset s = Subset::from_mask(m, mask);
            ++subsets;
            try {
                const Ordering o = constructive_small(s);
                t.check(o.subset() == s && is_sequencing(o, ValidationMode::DistinctOnly),
                        "invalid ordering for " + set_str(s));
            } catch (const InternalCaseViolation& e) {
                ++violations;
                t.fail(set_str(s) + ": " + e.what());
            }
        }
    }
    return t.done(std::to_string(subsets) + " subsets, " + std::to_string(violations) + " internal case violations");
}

// 3. Counting identities over primes p <= 23 against a bitmask enumeration.
Outcome counting_identities() {
    Tally t;
    for (std::uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u}) {
        const PrimeModulus pm(p);
        // star[k][a]: k-subsets of {1..p-1} with sum a; zero-including table derived by adding 0 or not.
        std::vector<std::vector<std::uint64_t>> star(p, std::vector<std::uint64_t>(p, 0));
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (p - 1)); ++mask) {
            std::uint64_t sum = 0;
            for (std::uint64_t b = mask; b; b &= b - 1) sum += static_cast<std::uint64_t>(std::countr_zero(b)) + 1;
            ++star[std::popcount(mask)][sum % p];
        }
        for (std::size_t k = 1; k <= p - 1; ++k) {
            const std::string at = "p=" + std::to_string(p) + " k=" + std::to_string(k);
            std::vector<std::uint64_t> full(p);
            for (std::uint32_t a = 0; a < p; ++a) full[a] = star[k][a] + star[k - 1][a];  // with or without 0
            const auto dp_full = sum_count_table(p, k, true);
            const auto dp_star = sum_count_table(p, k, false);
            const StarPair pair = nk_star_pair(pm, k);
            for (std::uint32_t a = 0; a < p; ++a) {
                t.check(dp_full.counts[a] == full[a] && dp_star.counts[a] == star[k][a], at + " table mismatch");
                t.check(full[a] == full[0], at + " N_k not flat");
                if (a > 0) t.check(star[k][a] == star[k][1], at + " N_k* not flat off zero");
                t.check(nk_closed_form(pm, k) == full[a], at + " N_k closed form");
            }
            const long long offset = static_cast<long long>(star[k][0]) - static_cast<long long>(star[k][1]);
            t.check(offset == (k % 2 == 0 ? 1 : -1), at + " offset " + std::to_string(offset));
            t.check(pair.at_zero == star[k][0] && pair.at_nonzero == star[k][1], at + " N_k* closed form");
        }
    }
    // The +-1 constant is not even an integer here; the oracle says 2 and 3.
    const Rational alt5 = nk_star_zero_alternative(PrimeModulus(5), 2);
    const Rational alt7 = nk_star_zero_alternative(PrimeModulus(7), 2);
    t.check(alt5 == Rational(7, 5) && nk_star_pair(PrimeModulus(5), 2).at_zero == 2, "p=5 k=2 discrepancy");
    t.check(alt7 == Rational(16, 7) && nk_star_pair(PrimeModulus(7), 2).at_zero == 3, "p=7 k=2 discrepancy");
    std::ostringstream s;
    s << "primes <= 23, all k; +-1 variant gives " << alt5 << " at p=5,k=2 (true 2) and " << alt7
      << " at p=7,k=2 (true 3); the (p-1) constant matches everywhere";
    return t.done(s.str());
}

// 4. Largest sum class of l-subsets is at most 2/n.
Outcome sum_probability() {
    Tally t;
    Rational worst = 0;
    for (std::uint32_t n = 3; n <= 24; ++n) {
        for (std::size_t l = 1; l <= n - 2; ++l) {
            const auto r = max_sum_probability(n, l);
            t.check(r.pass, "n=" + std::to_string(n) + " l=" + std::to_string(l));
            worst = std::max(worst, Rational(r.max_observed * n));
        }
    }
    std::ostringstream s;
    s << "n=3..24, all l; max of n*P = " << worst << " <= 2";
    return t.done(s.str());
}

// 5. Bad-subset fraction against k(k-1)/n, through the CLI bound-check path.
Outcome bad_subset_bound(const fs::path& dir) {
    Tally t;
    for (std::uint32_t n = 2; n <= 18; ++n) {
        const fs::path report = dir / ("distinct_" + std::to_string(n) + ".json");
        if (!fs::exists(report)) {
            SweepConfig c;
            c.n = n;
            std::ofstream(report) << sweep(c).to_json().dump() << '\n';
        }
        for (std::size_t k = 1; k <= n - 1; ++k) {
            std::ostringstream out, err;
            const int code = cli::run({"bound-check", "--n", std::to_string(n), "--k", std::to_string(k), "--report",
                                       report.string()},
                                      out, err);
            t.check(code == cli::kExitOk && out.str().find("bad fraction 0 <=") != std::string::npos,
                    "n=" + std::to_string(n) + " k=" + std::to_string(k) + ": " + out.str() + err.str());
        }
    }
    return t.done("n=2..18, all k, bad fraction 0");
}

// 6. Greedy prefix reaches ceil((k+1)/2).
Outcome greedy_floor() {
    Tally t;
    auto check = [&](const Subset& s) {
        const GreedyResult g = greedy_prefix(s);
        t.check(g.ordering.size() >= (s.size() + 2) / 2 && is_sequencing(g.ordering, ValidationMode::DistinctOnly),
                set_str(s) + " got " + std::to_string(g.ordering.size()));
    };
    std::uint64_t exhaustive = 0;
    for (std::uint32_t n = 2; n <= 14; ++n) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
            check(Subset::from_mask(Modulus(n), mask));
            ++exhaustive;
        }
    }
    Rng rng(20240601);
    for (int i = 0; i < 10'000; ++i) {
        const auto n = static_cast<std::uint32_t>(2 + rng.below(199));
        std::vector<Residue> pool(n - 1);
        std::iota(pool.begin(), pool.end(), 1u);
        const std::size_t k = 1 + rng.below(n - 1);
        for (std::size_t j = 0; j < k; ++j) std::swap(pool[j], pool[j + rng.below(pool.size() - j)]);
        pool.resize(k);
        check(Subset::from_unsorted(Modulus(n), pool));
    }
    return t.done(std::to_string(exhaustive) + " subsets with n <= 14 plus 10000 random with n <= 200");
}

// 7. Any 2t-set has at least 2^t orderable t-subsets.
Outcome orderable_subsets() {
    Tally t;
    std::uint64_t sets = 0;
    for (std::uint32_t n = 3; n <= 14; ++n) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
            const int size = std::popcount(mask);
            if (size % 2 != 0 || size > 10) continue;
            const Subset a = Subset::from_mask(Modulus(n), mask);
            const std::size_t half = a.size() / 2;
            const std::uint64_t count = count_orderable_subsets(a, half);
            ++sets;
            t.check(count >= (std::uint64_t{1} << half), set_str(a) + " has " + std::to_string(count));
        }
    }
    return t.done(std::to_string(sets) + " sets with |A| = 2t, t <= 5, n <= 14");
}

// 8. Nonzero-mode sweeps: no failures, exempt exactly the zero-sum subsets.
Outcome nonzero_sweeps() {
    Tally t;
    std::uint64_t solved = 0, exempt = 0;
    for (std::uint32_t n = 2; n <= 14; ++n) {
        SweepConfig c;
        c.n = n;
        c.mode = ValidationMode::DistinctNonzero;
        const SweepReport r = sweep(c);
        BigInt zero_sum = 0;
        for (std::size_t k = 1; k <= n - 1; ++k) zero_sum += sum_count_table(n, k, false).counts[0];
        t.check(r.failures.empty(), "n=" + std::to_string(n) + " has " + std::to_string(r.failures.size()) + " failures");
        t.check(BigInt(r.exempt) == zero_sum, "n=" + std::to_string(n) + " exempt " + std::to_string(r.exempt));
        t.check(r.total == r.solved + r.exempt, "n=" + std::to_string(n) + " totals");
        solved += r.solved;
        exempt += r.exempt;
    }
    return t.done(std::to_string(solved) + " solved, " + std::to_string(exempt) + " zero-sum exempt over n=2..14");
}

// 9. Partial-sum and run formulations of both validators agree.
Outcome run_equivalence() {
    Tally t;
    std::uint64_t orderings = 0;
    auto check = [&](const Ordering& o) {
        for (auto mode : {ValidationMode::DistinctOnly, ValidationMode::DistinctNonzero}) {
            t.check(is_sequencing(o, mode) == is_sequencing_via_runs(o, mode),
                    join_residues(o.sequence()) + " mod " + std::to_string(o.modulus().value()));
        }
        ++orderings;
    };
    for (std::uint32_t n = 2; n <= 8; ++n) {
        for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
            const Subset s = Subset::from_mask(Modulus(n), mask);
            std::vector<Residue> perm(s.elements().begin(), s.elements().end());
            do check(Ordering(Modulus(n), perm));
            while (std::next_permutation(perm.begin(), perm.end()));
        }
    }
    const std::uint64_t exhaustive = orderings;
    Rng rng(99);
    for (int i = 0; i < 100'000; ++i) {
        const auto n = static_cast<std::uint32_t>(2 + rng.below(99));
        std::vector<Residue> pool(n - 1);
        std::iota(pool.begin(), pool.end(), 1u);
        const std::size_t k = 1 + rng.below(n - 1);
        for (std::size_t j = 0; j < k; ++j) std::swap(pool[j], pool[j + rng.below(pool.size() - j)]);
        pool.resize(k);
        check(Ordering(Modulus(n), pool));
    }
    return t.done(std::to_string(exhaustive) + " orderings with n <= 8 plus 100000 random with n <= 100");
}

// 10. Digests do not depend on worker count or on interruption.
Outcome determinism(const fs::path& dir) {
    Tally t;
    SweepConfig c;
    c.n = 12;
    c.seed = 77;
    c.chunk_size = 64;
    c.worker_count = 1;
    const SweepReport one = sweep(c);
    c.worker_count = 8;
    const SweepReport eight = sweep(c);
    t.check(one.digest == eight.digest, "workers 1 vs 8: " + one.digest + " vs " + eight.digest);

    // Interrupted sweep: stop at an arbitrary rank, then resume over the full window.
    SweepConfig part = c;
    part.checkpoint_path = dir / "determinism.ckpt";
    part.certificate_path = dir / "determinism_certs.txt";
    fs::remove(*part.checkpoint_path);
    part.rank_end = 1337;
    part.worker_count = 3;
    (void)sweep(part);
    SweepConfig rest = part;
    rest.rank_end.reset();
    rest.resume = true;
    const SweepReport resumed = sweep(rest);
    t.check(resumed.digest == one.digest, "resumed: " + resumed.digest + " vs " + one.digest);
    const auto v = verify_certificates(*part.certificate_path);
    t.check(v.ok() && v.records == one.solved, "resumed certificate file");

    c.n = 14;
    c.mode = ValidationMode::DistinctNonzero;
    c.worker_count = 1;
    const SweepReport a = sweep(c);
    c.worker_count = 8;
    t.check(a.digest == sweep(c).digest, "nonzero n=14 workers 1 vs 8");
    return t.done("n=12 digest " + one.digest.substr(0, 16) + "...");
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path dir = workdir();
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"distinct-mode sweeps, n <= 18", [&] { return distinct_sweeps(dir); }},
        {"constructive solver, k <= 6, n <= 18", constructive_complete},
        {"counting identities and closed forms, p <= 23", counting_identities},
        {"sum-probability bound 2/n, n <= 24", sum_probability},
        {"bad-subset bound k(k-1)/n via bound-check, n <= 18", [&] { return bad_subset_bound(dir); }},
        {"greedy prefix floor", greedy_floor},
        {"2^t orderable t-subsets, n <= 14", orderable_subsets},
        {"nonzero-mode sweeps, n <= 14", nonzero_sweeps},
        {"partial sums vs runs equivalence", run_equivalence},
        {"sweep determinism (workers, resume)", [&] { return determinism(dir); }},
    };

    std::set<std::size_t> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoul(argv[i]));

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!selected.empty() && !selected.count(i + 1)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << (i + 1) << ": " << criteria[i].first << " -- "
                  << o.detail << " [" << ms.count() << " ms]" << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    std::cout << (failed ? "FAILED " : "ALL PASSED ") << "(" << failed << " failing criteria)" << std::endl;
    return failed ? 1 : 0;
}
