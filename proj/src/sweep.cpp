#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include "psum/harness.hpp"
#include "psum/rng.hpp"

namespace psum {

SubsetVerdict solve_subset(const Subset& subset, ValidationMode mode, const Strategy& strategy,
                           std::uint64_t seed) {
    SubsetVerdict v;
    if (mode == ValidationMode::DistinctNonzero && subset_sum(subset) == 0) {
        v.status = SubsetVerdict::Status::Exempt;
        return v;
    }
    auto fail = [&](std::string reason) {
        v.status = SubsetVerdict::Status::Failed;
        v.failure_reason = std::move(reason);
        return v;
    };
    auto solved = [&](SolveOutcome out) {
        if (!is_sequencing(*out.ordering, mode)) {
            throw std::logic_error("solver returned an invalid ordering " + join_residues(out.ordering->sequence()));
        }
        v.status = SubsetVerdict::Status::Solved;
        v.method = out.method;
        v.tries += out.tries;
        v.ordering = std::move(out.ordering);
        return v;
    };

    if (mode == ValidationMode::DistinctOnly && subset.size() <= std::min<std::size_t>(strategy.constructive_max_k, 6)) {
        try {
            return solved(constructive_sequencing(subset));
        } catch (const InternalCaseViolation&) {
            v.tries = 1;
            return fail("internal_case_violation");
        }
    }

    SolveOutcome rnd = random_sequencing(subset, mode, seed, strategy.max_tries);
    if (rnd.ordering) return solved(std::move(rnd));
    v.tries = rnd.tries;
    if (!strategy.exhaustive_fallback) return fail("unsolved");

    try {
        SolveOutcome ex = exhaustive_sequencing(subset, mode, strategy.node_budget);
        if (ex.ordering) return solved(std::move(ex));
        v.tries += ex.tries;
        return fail("no_ordering");
    } catch (const BudgetExhausted& e) {
        v.tries += e.budget();
        return fail("budget_exhausted");
    }
}

void SweepConfig::validate() const {
    const Modulus m(n);
    if (n > 63) throw std::invalid_argument("sweeps support n <= 63");
    if (k_range) {
        auto [lo, hi] = *k_range;
        if (lo < 1 || lo > hi || hi > n - 1) throw std::invalid_argument("k range must lie within [1, n-1]");
    }
    if (strategy.max_tries < 1) throw std::invalid_argument("max_tries must be at least 1");
    if (worker_count < 1) throw std::invalid_argument("worker_count must be positive");
    if (chunk_size < 1) throw std::invalid_argument("chunk_size must be positive");
    const std::uint64_t end = rank_end.value_or(universe_end());
    if (rank_begin < 1 || rank_begin > end || end > universe_end()) {
        throw std::invalid_argument("rank window must lie within [1, 2^(n-1))");
    }
    if (resume && !checkpoint_path) throw std::invalid_argument("resume needs a checkpoint path");
}

namespace {

struct ChunkResult {
    SweepReport report;
    std::vector<std::pair<std::uint64_t, std::string>> certificates;  // (rank, line)
};

ChunkResult run_chunk(const SweepConfig& c, std::uint64_t lo, std::uint64_t hi) {
    ChunkResult out{empty_report(c.n, c.mode, c.seed), {}};
    SweepReport& r = out.report;
    const Modulus m(c.n);
    for (std::uint64_t mask = lo; mask < hi; ++mask) {
        const auto k = static_cast<std::size_t>(std::popcount(mask));
        if (c.k_range && (k < c.k_range->first || k > c.k_range->second)) continue;
        const Subset subset = Subset::from_mask(m, mask);
        const SubsetVerdict v = solve_subset(subset, c.mode, c.strategy, derive_seed(c.seed, mask));
        SizeStats& stats = r.histogram[k];
        stats.record(v.tries);
        ++r.total;
        switch (v.status) {
            case SubsetVerdict::Status::Solved:
                ++r.solved;
                if (v.method == SolveMethod::Constructive) ++stats.constructive;
                else if (v.method == SolveMethod::Random) ++stats.random;
                else ++stats.exhaustive;
                if (c.certificate_path) {
                    Certificate cert{c.n, c.mode,
                                     {subset.elements().begin(), subset.elements().end()},
                                     {v.ordering->sequence().begin(), v.ordering->sequence().end()},
                                     v.method, v.tries};
                    out.certificates.emplace_back(mask, format_certificate(cert));
                }
                break;
            case SubsetVerdict::Status::Exempt:
                ++r.exempt;
                break;
            case SubsetVerdict::Status::Failed:
                r.failures.push_back({{subset.elements().begin(), subset.elements().end()}, v.failure_reason, v.tries});
                break;
        }
    }
    return out;
}

nlohmann::ordered_json fingerprint(const SweepConfig& c) {
    nlohmann::ordered_json j;
    j["n"] = c.n;
    j["mode"] = std::string(to_string(c.mode));
    j["seed"] = c.seed;
    j["k_min"] = c.k_range ? c.k_range->first : 1;
    j["k_max"] = c.k_range ? c.k_range->second : c.n - 1;
    j["constructive_max_k"] = c.strategy.constructive_max_k;
    j["max_tries"] = c.strategy.max_tries;
    j["exhaustive_fallback"] = c.strategy.exhaustive_fallback;
    j["node_budget"] = c.strategy.node_budget;
    return j;
}

struct Checkpoint {
    std::uint64_t next_rank = 0;
    std::uint64_t certificate_bytes = 0;
    SweepReport report;
};

void write_checkpoint(const SweepConfig& c, const Checkpoint& cp) {
    nlohmann::ordered_json j;
    j["config"] = fingerprint(c);
    j["next_rank"] = cp.next_rank;
    j["certificate_bytes"] = cp.certificate_bytes;
    j["report"] = cp.report.to_json();
    const auto tmp = std::filesystem::path(c.checkpoint_path->string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        out << j.dump() << '\n';
        if (!out.flush()) throw SweepAborted("cannot write checkpoint " + tmp.string(), cp.next_rank);
    }
    std::filesystem::rename(tmp, *c.checkpoint_path);
}

std::optional<Checkpoint> read_checkpoint(const SweepConfig& c) {
    std::ifstream in(*c.checkpoint_path);
    if (!in) return std::nullopt;
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("unreadable checkpoint: ") + e.what());
    }
    if (j.at("config") != nlohmann::json::parse(fingerprint(c).dump())) {
        throw std::invalid_argument("checkpoint was written by a sweep with a different configuration");
    }
    Checkpoint cp;
    cp.next_rank = j.at("next_rank").get<std::uint64_t>();
    cp.certificate_bytes = j.at("certificate_bytes").get<std::uint64_t>();
    cp.report = SweepReport::from_json(j.at("report"));
    return cp;
}

/// Adds `part` into `acc` without resealing; failures stay in rank order
/// because chunks arrive in rank order.
void absorb(SweepReport& acc, SweepReport&& part) {
    acc.total += part.total;
    acc.solved += part.solved;
    acc.exempt += part.exempt;
    for (auto& f : part.failures) acc.failures.push_back(std::move(f));
    for (auto& [k, s] : part.histogram) {
        SizeStats& into = acc.histogram[k];
        into.count += s.count;
        into.max_tries = std::max(into.max_tries, s.max_tries);
        into.total_tries += s.total_tries;
        if (into.buckets.size() < s.buckets.size()) into.buckets.resize(s.buckets.size(), 0);
        for (std::size_t b = 0; b < s.buckets.size(); ++b) into.buckets[b] += s.buckets[b];
        into.constructive += s.constructive;
        into.random += s.random;
        into.exhaustive += s.exhaustive;
    }
}

}  // namespace

SweepReport sweep(const SweepConfig& config) {
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    std::uint64_t begin = config.rank_begin;
    const std::uint64_t end = config.rank_end.value_or(config.universe_end());
    SweepReport acc = empty_report(config.n, config.mode, config.seed);
    std::uint64_t cert_bytes = 0;
    bool resumed = false;

    if (config.resume) {
        if (auto cp = read_checkpoint(config)) {
            if (cp->next_rank < begin || cp->next_rank > end) {
                throw std::invalid_argument("checkpoint lies outside the requested rank window");
            }
            begin = cp->next_rank;
            acc = std::move(cp->report);
            cert_bytes = cp->certificate_bytes;
            resumed = true;
        }
    }

    std::ofstream certs;
    if (config.certificate_path) {
        if (resumed) {
            std::error_code ec;
            std::filesystem::resize_file(*config.certificate_path, cert_bytes, ec);
            if (ec) throw SweepAborted("cannot truncate " + config.certificate_path->string() + ": " + ec.message(), begin);
            certs.open(*config.certificate_path, std::ios::app | std::ios::binary);
        } else {
            certs.open(*config.certificate_path, std::ios::trunc | std::ios::binary);
        }
        if (!certs) throw SweepAborted("cannot open " + config.certificate_path->string(), begin);
    }

    const std::uint64_t chunk = config.chunk_size;
    const std::uint64_t chunks = (end - begin + chunk - 1) / chunk;
    std::vector<std::optional<ChunkResult>> results(chunks);
    std::mutex mu;
    std::condition_variable ready;
    std::exception_ptr error;
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};

    auto worker = [&] {
        while (!stop.load()) {
            const std::uint64_t i = next.fetch_add(1);
            if (i >= chunks) return;
            const std::uint64_t lo = begin + i * chunk;
            const std::uint64_t hi = std::min(end, lo + chunk);
            try {
                ChunkResult r = run_chunk(config, lo, hi);
                std::lock_guard lock(mu);
                results[i] = std::move(r);
            } catch (...) {
                std::lock_guard lock(mu);
                if (!error) error = std::current_exception();
                stop = true;
            }
            ready.notify_all();
        }
    };

    const auto threads = static_cast<unsigned>(std::min<std::uint64_t>(config.worker_count, std::max<std::uint64_t>(chunks, 1)));
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

    // Single writer: consumes chunks in rank order.
    try {
        for (std::uint64_t i = 0; i < chunks; ++i) {
            ChunkResult r;
            {
                std::unique_lock lock(mu);
                ready.wait(lock, [&] { return results[i].has_value() || error != nullptr; });
                if (error) break;
                r = std::move(*results[i]);
                results[i].reset();
            }
            const std::uint64_t lo = begin + i * chunk;
            const std::uint64_t hi = std::min(end, lo + chunk);
            for (const auto& [rank, line] : r.certificates) {
                certs << line << '\n';
                if (!certs) {
                    throw SweepAborted("failed writing certificate for subset rank " + std::to_string(rank) +
                                           " to " + config.certificate_path->string(), lo);
                }
            }
            if (config.certificate_path && !certs.flush()) {
                throw SweepAborted("failed flushing " + config.certificate_path->string(), lo);
            }
            absorb(acc, std::move(r.report));
            if (config.checkpoint_path) {
                Checkpoint cp;
                cp.next_rank = hi;
                cp.certificate_bytes = config.certificate_path ? static_cast<std::uint64_t>(certs.tellp()) : 0;
                cp.report = acc;
                cp.report.duration_ms += static_cast<std::uint64_t>(
                    std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count());
                cp.report.seal();
                write_checkpoint(config, cp);
            }
        }
    } catch (...) {
        stop = true;
        pool.clear();
        throw;
    }
    pool.clear();
    if (error) std::rethrow_exception(error);

    acc.duration_ms += static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started).count());
    acc.seal();
    return acc;
}

}  // namespace psum
