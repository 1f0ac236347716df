#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "psum/counting.hpp"
#include "psum/harness.hpp"
#include "psum/modular.hpp"
#include "psum/solvers.hpp"

namespace psum::cli {

namespace {

/// Bad invocation detected after CLI11 parsing succeeded.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

std::vector<Residue> parse_elements(const std::string& text, std::uint32_t n) {
    std::vector<Residue> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string item = text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
            throw UsageError("--set expects comma-separated decimal residues, got '" + text + "'");
        }
        if (v == 0 || v >= n) {
            throw UsageError("element " + item + " is not a nonzero residue mod " + std::to_string(n));
        }
        out.push_back(static_cast<Residue>(v));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

ValidationMode mode_arg(const std::string& text) {
    try {
        return parse_mode(text);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

void print_json(std::ostream& out, const nlohmann::ordered_json& j) { out << j.dump() << '\n'; }

// ---------------------------------------------------------------------------
// order

struct OrderArgs {
    std::uint32_t n = 0;
    std::string set;
    std::string mode = "distinct";
    std::string strategy = "auto";
    std::uint64_t seed = 0;
    std::uint64_t max_tries = 500'000;
    std::uint64_t budget = kDefaultNodeBudget;
    bool json = false;
};

int cmd_order(const OrderArgs& a, std::ostream& out, std::ostream& err) {
    const Modulus m(a.n);
    const ValidationMode mode = mode_arg(a.mode);
    std::vector<Residue> elems = parse_elements(a.set, a.n);
    Subset subset = [&] {
        try {
            return Subset::from_unsorted(m, elems);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }();

    SolveOutcome outcome;
    std::string diagnostic;
    if (a.strategy == "constructive") {
        if (mode != ValidationMode::DistinctOnly) throw UsageError("constructive strategy only supports --mode distinct");
        if (subset.size() > 6) throw UsageError("constructive strategy covers at most 6 elements");
        outcome = constructive_sequencing(subset);
    } else if (a.strategy == "random") {
        outcome = random_sequencing(subset, mode, a.seed, a.max_tries);
        if (!outcome.ordering) diagnostic = "no valid ordering within " + std::to_string(a.max_tries) + " random tries";
    } else if (a.strategy == "exhaustive") {
        try {
            outcome = exhaustive_sequencing(subset, mode, a.budget);
            if (!outcome.ordering) diagnostic = "no valid ordering exists";
        } catch (const BudgetExhausted& e) {
            diagnostic = e.what();
            outcome.tries = e.budget();
        }
    } else if (a.strategy == "greedy") {
        if (mode != ValidationMode::DistinctOnly) throw UsageError("greedy strategy only supports --mode distinct");
        GreedyResult g = greedy_prefix(subset);
        outcome.method = SolveMethod::Greedy;
        outcome.tries = 1;
        if (g.ordering.size() == subset.size()) {
            outcome.ordering = std::move(g.ordering);
        } else {
            diagnostic = "greedy prefix " + join_residues(g.ordering.sequence()) + " covers " +
                         std::to_string(g.ordering.size()) + " of " + std::to_string(subset.size()) +
                         " elements (guaranteed " + std::to_string(g.guaranteed_floor) + ")";
        }
    } else if (a.strategy == "auto") {
        Strategy s;
        s.max_tries = a.max_tries;
        s.node_budget = a.budget;
        SubsetVerdict v = solve_subset(subset, mode, s, a.seed);
        outcome.tries = v.tries;
        outcome.method = v.method;
        if (v.status == SubsetVerdict::Status::Solved) {
            outcome.ordering = std::move(v.ordering);
        } else if (v.status == SubsetVerdict::Status::Exempt) {
            SolveOutcome ex = exhaustive_sequencing(subset, mode, a.budget);
            outcome = std::move(ex);
            if (!outcome.ordering) diagnostic = "no valid ordering exists (the elements sum to 0)";
        } else {
            diagnostic = "unsolved: " + v.failure_reason;
        }
    } else {
        throw UsageError("unknown strategy '" + a.strategy + "'");
    }

    if (a.json) {
        nlohmann::ordered_json j;
        j["n"] = a.n;
        j["mode"] = std::string(to_string(mode));
        j["set"] = std::vector<Residue>(subset.elements().begin(), subset.elements().end());
        if (outcome.ordering) {
            j["ordering"] = std::vector<Residue>(outcome.ordering->sequence().begin(), outcome.ordering->sequence().end());
            j["sums"] = partial_sums(*outcome.ordering).sums;
        } else {
            j["ordering"] = nullptr;
            j["sums"] = nullptr;
        }
        j["method"] = std::string(to_string(outcome.method));
        j["tries"] = outcome.tries;
        print_json(out, j);
    } else if (outcome.ordering) {
        out << "ordering: " << join_residues(outcome.ordering->sequence()) << '\n';
        out << "sums: " << join_residues(partial_sums(*outcome.ordering).sums) << '\n';
        out << "method: " << to_string(outcome.method) << '\n';
        out << "tries: " << outcome.tries << '\n';
    }
    if (!outcome.ordering) {
        err << "order: " << diagnostic << '\n';
        return kExitDomainFailure;
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
    std::uint32_t n = 0;
    std::string mode = "distinct";
    std::optional<std::size_t> k_min, k_max;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    std::uint64_t max_tries = 500'000;
    std::uint64_t budget = kDefaultNodeBudget;
    bool no_exhaustive = false;
    std::string certificates, checkpoint, report;
    bool resume = false;
    bool json = false;
};

SweepConfig make_sweep_config(const SweepArgs& a) {
    SweepConfig c;
    c.n = a.n;
    c.mode = mode_arg(a.mode);
    if (a.k_min || a.k_max) c.k_range = {a.k_min.value_or(1), a.k_max.value_or(a.n - 1)};
    c.seed = a.seed;
    c.worker_count = a.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : a.workers;
    c.strategy.max_tries = a.max_tries;
    c.strategy.node_budget = a.budget;
    c.strategy.exhaustive_fallback = !a.no_exhaustive;
    if (!a.certificates.empty()) c.certificate_path = a.certificates;
    if (!a.checkpoint.empty()) c.checkpoint_path = a.checkpoint;
    c.resume = a.resume;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return c;
}

void print_report_summary(const SweepReport& r, std::ostream& out) {
    out << "n=" << r.n << " mode=" << to_string(r.mode) << " seed=" << r.seed << '\n';
    out << "total=" << r.total << " solved=" << r.solved << " exempt=" << r.exempt
        << " failures=" << r.failures.size() << '\n';
    for (const auto& f : r.failures) {
        out << "  failed {" << join_residues(f.set) << "}: " << f.reason << " after " << f.tries << " tries\n";
    }
    out << "duration_ms=" << r.duration_ms << '\n';
    out << "digest=" << r.digest << '\n';
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    const SweepConfig config = make_sweep_config(a);
    SweepReport report;
    try {
        report = sweep(config);
    } catch (const SweepAborted& e) {
        err << "sweep aborted: " << e.what() << " (completed through rank " << e.completed_rank() << ")\n";
        return kExitDomainFailure;
    }
    if (!a.report.empty()) {
        std::ofstream f(a.report, std::ios::trunc);
        f << report.to_json().dump(2) << '\n';
        if (!f) {
            err << "sweep: cannot write report " << a.report << '\n';
            return kExitDomainFailure;
        }
    }
    if (a.json) {
        print_json(out, report.to_json());
    } else {
        print_report_summary(report, out);
    }
    return report.failures.empty() ? kExitOk : kExitDomainFailure;
}

// ---------------------------------------------------------------------------
// verify

int cmd_verify(const std::string& path, bool json, std::ostream& out, std::ostream& err) {
    VerificationReport r;
    try {
        r = verify_certificates(std::filesystem::path(path));
    } catch (const std::runtime_error& e) {
        err << "verify: " << e.what() << '\n';
        return kExitDomainFailure;
    }
    if (json) {
        nlohmann::ordered_json j;
        j["records"] = r.records;
        j["valid"] = r.valid;
        auto issues = nlohmann::ordered_json::array();
        for (const auto& i : r.issues) issues.push_back({{"line", i.line}, {"reason", i.reason}});
        j["issues"] = std::move(issues);
        print_json(out, j);
    } else {
        out << "records=" << r.records << " valid=" << r.valid << " invalid=" << r.issues.size() << '\n';
        for (const auto& i : r.issues) out << "line " << i.line << ": " << i.reason << '\n';
    }
    return r.ok() ? kExitOk : kExitDomainFailure;
}

// ---------------------------------------------------------------------------
// count

int cmd_count(std::optional<std::uint32_t> p_arg, std::optional<std::uint32_t> n_arg, std::size_t k, bool json,
              std::ostream& out) {
    if (p_arg.has_value() == n_arg.has_value()) throw UsageError("count needs exactly one of --p or --n");
    std::optional<PrimeModulus> prime;
    std::uint32_t n = 0;
    if (p_arg) {
        try {
            prime.emplace(*p_arg);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        n = *p_arg;
        if (k < 1 || k > n - 1) throw UsageError("--k must lie in [1, p-1]");
    } else {
        n = *n_arg;
        if (n < 2 || k > n - 1) throw UsageError("--k must lie in [0, n-1]");
    }

    const SumCountTable with_zero = sum_count_table(n, k, true);
    const SumCountTable without_zero = sum_count_table(n, k, false);
    bool agree = true;
    std::optional<BigInt> nk;
    std::optional<StarPair> star;
    if (prime) {
        nk = nk_closed_form(*prime, k);
        star = nk_star_pair(*prime, k);
        for (std::uint32_t a = 0; a < n; ++a) {
            agree &= with_zero.counts[a] == *nk;
            agree &= without_zero.counts[a] == (a == 0 ? star->at_zero : star->at_nonzero);
        }
    }

    if (json) {
        nlohmann::ordered_json j;
        j["n"] = n;
        j["k"] = k;
        j["prime"] = prime.has_value();
        auto rows = nlohmann::ordered_json::array();
        for (std::uint32_t a = 0; a < n; ++a) {
            nlohmann::ordered_json row;
            row["alpha"] = a;
            row["n_k"] = with_zero.counts[a].str();
            row["n_k_star"] = without_zero.counts[a].str();
            if (prime) {
                row["n_k_closed"] = nk->str();
                row["n_k_star_closed"] = (a == 0 ? star->at_zero : star->at_nonzero).str();
            }
            rows.push_back(std::move(row));
        }
        j["rows"] = std::move(rows);
        if (prime) {
            j["n_k_star_zero_alternative"] = nk_star_zero_alternative(*prime, k).str();
            j["agree"] = agree;
        }
        print_json(out, j);
    } else {
        out << (prime ? "p=" : "n=") << n << " k=" << k << '\n';
        out << "alpha\tN_k\tN_k*";
        if (prime) out << "\tN_k(closed)\tN_k*(closed)";
        out << '\n';
        for (std::uint32_t a = 0; a < n; ++a) {
            out << a << '\t' << with_zero.counts[a] << '\t' << without_zero.counts[a];
            if (prime) out << '\t' << *nk << '\t' << (a == 0 ? star->at_zero : star->at_nonzero);
            out << '\n';
        }
        if (prime) {
            out << "N_k*(0)=" << star->at_zero << " N_k*(alpha!=0)=" << star->at_nonzero << '\n';
            out << "(C(p-1,k)+-1)/p variant for N_k*(0): " << nk_star_zero_alternative(*prime, k) << '\n';
            out << "table/closed-form agreement: " << (agree ? "yes" : "NO") << '\n';
        }
    }
    return agree ? kExitOk : kExitDomainFailure;
}

// ---------------------------------------------------------------------------
// bound-check

struct BoundArgs {
    std::uint32_t n = 0;
    std::optional<std::size_t> l, k;
    bool all_l = false;
    std::optional<std::uint64_t> bad;
    std::string report;
    std::uint64_t seed = 0;
    bool json = false;
};

nlohmann::ordered_json bound_json(const char* kind, const BoundCheckReport& r) {
    nlohmann::ordered_json j;
    j["check"] = kind;
    j["n"] = r.n;
    j["parameter"] = r.parameter;
    j["max_observed"] = r.max_observed.str();
    j["bound"] = r.bound.str();
    j["pass"] = r.pass;
    return j;
}

int cmd_bound(const BoundArgs& a, std::ostream& out) {
    if (static_cast<int>(a.l.has_value()) + static_cast<int>(a.k.has_value()) + static_cast<int>(a.all_l) != 1) {
        throw UsageError("bound-check needs exactly one of --l, --all-l or --k");
    }
    std::vector<std::pair<const char*, BoundCheckReport>> reports;
    try {
        if (a.l || a.all_l) {
            const std::size_t lo = a.l.value_or(1);
            const std::size_t hi = a.l.value_or(a.n >= 3 ? a.n - 2 : 0);
            if (a.all_l && a.n < 3) throw std::invalid_argument("--all-l needs n >= 3");
            for (std::size_t l = lo; l <= hi; ++l) reports.emplace_back("sum_probability", max_sum_probability(a.n, l));
        } else {
            std::uint64_t bad = 0;
            if (a.bad) {
                bad = *a.bad;
            } else {
                SweepReport sr;
                if (!a.report.empty()) {
                    std::ifstream f(a.report);
                    if (!f) throw std::invalid_argument("cannot read report " + a.report);
                    sr = SweepReport::from_json(nlohmann::json::parse(f));
                    if (sr.n != a.n || sr.mode != ValidationMode::DistinctOnly) {
                        throw std::invalid_argument("report does not describe a distinct-mode sweep of n=" + std::to_string(a.n));
                    }
                } else {
                    SweepConfig c;
                    c.n = a.n;
                    c.k_range = {*a.k, *a.k};
                    c.seed = a.seed;
                    c.validate();
                    sr = sweep(c);
                }
                for (const auto& f : sr.failures) bad += f.set.size() == *a.k ? 1 : 0;
            }
            reports.emplace_back("bad_subsets", bad_subset_bound_check(a.n, *a.k, bad));
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    bool pass = true;
    for (const auto& [kind, r] : reports) {
        pass &= r.pass;
        if (a.json) {
            print_json(out, bound_json(kind, r));
        } else if (std::string_view(kind) == "sum_probability") {
            out << "n=" << r.n << " l=" << r.parameter << ": max probability " << r.max_observed
                << " <= " << r.bound << ": " << (r.pass ? "PASS" : "FAIL") << '\n';
        } else {
            out << "n=" << r.n << " k=" << r.parameter << ": bad fraction " << r.max_observed
                << " <= " << r.bound << ": " << (r.pass ? "PASS" : "FAIL") << '\n';
        }
    }
    return pass ? kExitOk : kExitDomainFailure;
}

// ---------------------------------------------------------------------------
// stats

int cmd_stats(const std::string& path, bool json, std::ostream& out, std::ostream& err) {
    std::ifstream f(path);
    if (!f) {
        err << "stats: cannot read " << path << '\n';
        return kExitDomainFailure;
    }
    SweepReport r;
    try {
        r = SweepReport::from_json(nlohmann::json::parse(f));
    } catch (const std::exception& e) {
        err << "stats: " << e.what() << '\n';
        return kExitDomainFailure;
    }
    const bool digest_ok = r.compute_digest() == r.digest;
    if (json) {
        print_json(out, r.to_json());
    } else {
        print_report_summary(r, out);
        out << "k\tcount\tmax_tries\tmean_tries\tconstructive\trandom\texhaustive\tbuckets(1,2-3,4-7,...)\n";
        for (const auto& [k, s] : r.histogram) {
            const double mean = s.count ? static_cast<double>(s.total_tries) / static_cast<double>(s.count) : 0.0;
            out << k << '\t' << s.count << '\t' << s.max_tries << '\t' << mean << '\t' << s.constructive << '\t'
                << s.random << '\t' << s.exhaustive << '\t';
            for (std::size_t b = 1; b < s.buckets.size(); ++b) out << (b > 1 ? "," : "") << s.buckets[b];
            out << '\n';
        }
        out << "digest check: " << (digest_ok ? "ok" : "MISMATCH") << '\n';
    }
    if (!digest_ok) err << "stats: report digest does not match its contents\n";
    return digest_ok ? kExitOk : kExitDomainFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Partial-sum sequencings of subsets of Z_n", "psum"};
    app.require_subcommand(1);

    OrderArgs order;
    auto* order_cmd = app.add_subcommand("order", "Find an ordering with distinct partial sums");
    order_cmd->add_option("--n", order.n, "Modulus")->required()->check(CLI::Range(2u, 1u << 31));
    order_cmd->add_option("--set", order.set, "Comma-separated nonzero residues")->required();
    order_cmd->add_option("--mode", order.mode, "distinct or nonzero");
    order_cmd->add_option("--strategy", order.strategy, "auto, constructive, random, exhaustive or greedy");
    order_cmd->add_option("--seed", order.seed, "Seed for the random strategy");
    order_cmd->add_option("--max-tries", order.max_tries, "Random permutations to try")->check(CLI::PositiveNumber);
    order_cmd->add_option("--budget", order.budget, "Node budget for exhaustive search");
    order_cmd->add_flag("--json", order.json, "Emit JSON");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Verify every nonempty subset of Z_n \\ {0}");
    sweep_cmd->add_option("--n", sw.n, "Modulus")->required()->check(CLI::Range(2u, 63u));
    sweep_cmd->add_option("--mode", sw.mode, "distinct or nonzero");
    sweep_cmd->add_option("--k-min", sw.k_min, "Smallest subset size");
    sweep_cmd->add_option("--k-max", sw.k_max, "Largest subset size");
    sweep_cmd->add_option("--seed", sw.seed, "Sweep seed");
    sweep_cmd->add_option("--workers", sw.workers, "Worker threads (0 = all cores)");
    sweep_cmd->add_option("--max-tries", sw.max_tries, "Random permutations per subset")->check(CLI::PositiveNumber);
    sweep_cmd->add_option("--budget", sw.budget, "Node budget for the exhaustive fallback");
    sweep_cmd->add_flag("--no-exhaustive", sw.no_exhaustive, "Skip the exhaustive fallback");
    sweep_cmd->add_option("--certificates", sw.certificates, "Write certificates to this file");
    sweep_cmd->add_option("--checkpoint", sw.checkpoint, "Checkpoint file");
    sweep_cmd->add_flag("--resume", sw.resume, "Resume from --checkpoint");
    sweep_cmd->add_option("--report", sw.report, "Write the JSON report to this file");
    sweep_cmd->add_flag("--json", sw.json, "Emit the JSON report on stdout");

    std::string verify_path;
    bool verify_json = false;
    auto* verify_cmd = app.add_subcommand("verify", "Re-validate a certificate file");
    verify_cmd->add_option("path", verify_path, "Certificate file")->required();
    verify_cmd->add_flag("--json", verify_json, "Emit JSON");

    std::optional<std::uint32_t> count_p, count_n;
    std::size_t count_k = 0;
    bool count_json = false;
    auto* count_cmd = app.add_subcommand("count", "Count k-subsets by their sum");
    count_cmd->add_option("--p", count_p, "Prime modulus (adds closed-form columns)");
    count_cmd->add_option("--n", count_n, "Any modulus (table only)");
    count_cmd->add_option("--k", count_k, "Subset size")->required();
    count_cmd->add_flag("--json", count_json, "Emit JSON");

    BoundArgs bound;
    auto* bound_cmd = app.add_subcommand("bound-check", "Check the sum-probability or bad-subset bound");
    bound_cmd->add_option("--n", bound.n, "Modulus")->required()->check(CLI::Range(2u, 1u << 20));
    bound_cmd->add_option("--l", bound.l, "Subset size for the 2/n sum-probability bound");
    bound_cmd->add_flag("--all-l", bound.all_l, "Check every l in [1, n-2]");
    bound_cmd->add_option("--k", bound.k, "Subset size for the k(k-1)/n bad-subset bound");
    bound_cmd->add_option("--bad", bound.bad, "Known number of bad k-subsets");
    bound_cmd->add_option("--report", bound.report, "Take bad counts from this sweep report");
    bound_cmd->add_option("--seed", bound.seed, "Seed when a sweep has to be run");
    bound_cmd->add_flag("--json", bound.json, "Emit JSON");

    std::string stats_path;
    bool stats_json = false;
    auto* stats_cmd = app.add_subcommand("stats", "Print retry histograms from a sweep report");
    stats_cmd->add_option("path", stats_path, "Report file")->required();
    stats_cmd->add_flag("--json", stats_json, "Emit the report JSON");

    std::vector<std::string> argv_store;
    argv_store.reserve(args.size() + 1);
    argv_store.emplace_back("psum");
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_store) argv.push_back(s.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (order_cmd->parsed()) return cmd_order(order, out, err);
        if (sweep_cmd->parsed()) return cmd_sweep(sw, out, err);
        if (verify_cmd->parsed()) return cmd_verify(verify_path, verify_json, out, err);
        if (count_cmd->parsed()) return cmd_count(count_p, count_n, count_k, count_json, out);
        if (bound_cmd->parsed()) return cmd_bound(bound, out);
        if (stats_cmd->parsed()) return cmd_stats(stats_path, stats_json, out, err);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace psum::cli
