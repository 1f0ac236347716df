#pragma once

// Batch verification over every nonempty subset of Z_n \ {0}.
//
// Subsets are identified by their bitmask (bit i-1 set when element i is
// present) and the bitmask value doubles as the subset's rank in the
// canonical enumeration. A sweep visits a contiguous rank window, solves each
// subset with a strategy cascade and aggregates a SweepReport. Reports for
// disjoint windows merge into the report of their union.
//
// Certificate line format:
//   n=<int>;mode=<distinct|nonzero>;set=<c1,...>;ord=<o1,...>;method=<name>;tries=<int>
//
// Report JSON keys, in order: n, mode, seed, total, solved, exempt, failures,
// histogram, duration_ms, digest. The digest is the lowercase hex SHA-256 of
// the compact JSON serialization with duration_ms and digest removed.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "psum/modular.hpp"
#include "psum/solvers.hpp"

namespace psum {

// ---------------------------------------------------------------------------
// Certificates

struct Certificate {
    std::uint32_t n = 0;
    ValidationMode mode = ValidationMode::DistinctOnly;
    std::vector<Residue> set;
    std::vector<Residue> ordering;
    SolveMethod method = SolveMethod::Exhaustive;
    std::uint64_t tries = 0;

    friend bool operator==(const Certificate&, const Certificate&) = default;
};

[[nodiscard]] std::string format_certificate(const Certificate& cert);

/// Parses one line (without its newline). Throws std::invalid_argument on any
/// syntax problem, unknown or missing key.
[[nodiscard]] Certificate parse_certificate(std::string_view line);

/// Empty when the certificate proves its claim; otherwise the reason it does not.
[[nodiscard]] std::optional<std::string> certificate_problem(const Certificate& cert);

struct CertificateIssue {
    std::size_t line = 0;  // 1-based
    std::string reason;
};

struct VerificationReport {
    std::size_t records = 0;
    std::size_t valid = 0;
    std::vector<CertificateIssue> issues;

    [[nodiscard]] bool ok() const noexcept { return issues.empty(); }
};

[[nodiscard]] VerificationReport verify_certificates(std::istream& in);
/// Throws std::runtime_error when the file cannot be opened.
[[nodiscard]] VerificationReport verify_certificates(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Reports

struct SizeStats {
    std::uint64_t count = 0;
    std::uint64_t max_tries = 0;
    std::uint64_t total_tries = 0;
    // buckets[b] counts subsets with bit_width(tries) == b: 0, 1, 2-3, 4-7, ...
    std::vector<std::uint64_t> buckets;
    std::uint64_t constructive = 0;
    std::uint64_t random = 0;
    std::uint64_t exhaustive = 0;

    void record(std::uint64_t tries);
    friend bool operator==(const SizeStats&, const SizeStats&) = default;
};

struct Failure {
    std::vector<Residue> set;
    std::string reason;  // no_ordering, unsolved, budget_exhausted, internal_case_violation
    std::uint64_t tries = 0;

    friend bool operator==(const Failure&, const Failure&) = default;
};

struct SweepReport {
    std::uint32_t n = 2;
    ValidationMode mode = ValidationMode::DistinctOnly;
    std::uint64_t seed = 0;
    std::uint64_t total = 0;
    std::uint64_t solved = 0;
    std::uint64_t exempt = 0;
    std::vector<Failure> failures;          // ascending by subset bitmask
    std::map<std::size_t, SizeStats> histogram;  // keyed by subset size
    std::uint64_t duration_ms = 0;
    std::string digest;

    [[nodiscard]] nlohmann::ordered_json to_json() const;
    [[nodiscard]] static SweepReport from_json(const nlohmann::json& j);

    /// SHA-256 over the canonical serialization without duration_ms and digest.
    [[nodiscard]] std::string compute_digest() const;
    void seal() { digest = compute_digest(); }

    /// Equal in every field except duration_ms.
    [[nodiscard]] bool same_content(const SweepReport& other) const;
};

[[nodiscard]] SweepReport empty_report(std::uint32_t n, ValidationMode mode, std::uint64_t seed);

/// Combines reports over disjoint rank windows of the same (n, mode, seed).
/// Throws std::invalid_argument on mismatched parameters.
[[nodiscard]] SweepReport merge_reports(const SweepReport& a, const SweepReport& b);

// ---------------------------------------------------------------------------
// Sweeps

struct Strategy {
    std::size_t constructive_max_k = 6;   // DistinctOnly only
    std::uint64_t max_tries = 500'000;    // randomized stage
    bool exhaustive_fallback = true;
    std::uint64_t node_budget = kDefaultNodeBudget;
};

struct SweepConfig {
    std::uint32_t n = 2;
    ValidationMode mode = ValidationMode::DistinctOnly;
    std::optional<std::pair<std::size_t, std::size_t>> k_range;  // inclusive
    Strategy strategy;
    std::uint64_t seed = 0;
    unsigned worker_count = 1;
    std::optional<std::filesystem::path> certificate_path;
    std::optional<std::filesystem::path> checkpoint_path;
    bool resume = false;  // continue from checkpoint_path when it exists
    // Rank window [rank_begin, rank_end); defaults to every nonempty subset.
    std::uint64_t rank_begin = 1;
    std::optional<std::uint64_t> rank_end;
    std::uint64_t chunk_size = 2048;

    /// Throws std::invalid_argument when inconsistent.
    void validate() const;
    [[nodiscard]] std::uint64_t universe_end() const { return std::uint64_t{1} << (n - 1); }
};

/// Certificate output failed. Everything before `completed_rank` is on disk and
/// recorded in the checkpoint (when one is configured).
class SweepAborted : public std::runtime_error {
public:
    SweepAborted(const std::string& what, std::uint64_t completed_rank)
        : std::runtime_error(what), completed_rank_(completed_rank) {}
    [[nodiscard]] std::uint64_t completed_rank() const noexcept { return completed_rank_; }

private:
    std::uint64_t completed_rank_;
};

struct SubsetVerdict {
    enum class Status { Solved, Exempt, Failed };
    Status status = Status::Failed;
    std::optional<Ordering> ordering;
    SolveMethod method = SolveMethod::Exhaustive;
    std::uint64_t tries = 0;
    std::string failure_reason;
};

/// The strategy cascade for one subset: constructive (DistinctOnly, small k),
/// then randomized, then exhaustive. Zero-sum subsets are exempt in
/// DistinctNonzero mode.
[[nodiscard]] SubsetVerdict solve_subset(const Subset& subset, ValidationMode mode,
                                         const Strategy& strategy, std::uint64_t seed);

[[nodiscard]] SweepReport sweep(const SweepConfig& config);

}  // namespace psum
