#include <algorithm>
#include <bit>
#include <cstdio>

#include <openssl/evp.h>

#include "psum/harness.hpp"

namespace psum {

namespace {

std::uint64_t set_mask(const std::vector<Residue>& set) {
    std::uint64_t m = 0;
    for (Residue e : set) m |= std::uint64_t{1} << (e - 1);
    return m;
}

std::string sha256_hex(std::string_view data) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 computation failed");
    }
    std::string hex;
    hex.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

void add_into(SizeStats& into, const SizeStats& from) {
    into.count += from.count;
    into.max_tries = std::max(into.max_tries, from.max_tries);
    into.total_tries += from.total_tries;
    if (into.buckets.size() < from.buckets.size()) into.buckets.resize(from.buckets.size(), 0);
    for (std::size_t b = 0; b < from.buckets.size(); ++b) into.buckets[b] += from.buckets[b];
    into.constructive += from.constructive;
    into.random += from.random;
    into.exhaustive += from.exhaustive;
}

}  // namespace

void SizeStats::record(std::uint64_t tries) {
    ++count;
    max_tries = std::max(max_tries, tries);
    total_tries += tries;
    const auto b = static_cast<std::size_t>(std::bit_width(tries));
    if (buckets.size() <= b) buckets.resize(b + 1, 0);
    ++buckets[b];
}

nlohmann::ordered_json SweepReport::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["mode"] = std::string(to_string(mode));
    j["seed"] = seed;
    j["total"] = total;
    j["solved"] = solved;
    j["exempt"] = exempt;
    auto fails = nlohmann::ordered_json::array();
    for (const auto& f : failures) {
        nlohmann::ordered_json e;
        e["set"] = f.set;
        e["reason"] = f.reason;
        e["tries"] = f.tries;
        fails.push_back(std::move(e));
    }
    j["failures"] = std::move(fails);
    auto hist = nlohmann::ordered_json::array();
    for (const auto& [k, s] : histogram) {
        nlohmann::ordered_json e;
        e["k"] = k;
        e["count"] = s.count;
        e["max_tries"] = s.max_tries;
        e["total_tries"] = s.total_tries;
        e["buckets"] = s.buckets;
        e["constructive"] = s.constructive;
        e["random"] = s.random;
        e["exhaustive"] = s.exhaustive;
        hist.push_back(std::move(e));
    }
    j["histogram"] = std::move(hist);
    j["duration_ms"] = duration_ms;
    j["digest"] = digest;
    return j;
}

SweepReport SweepReport::from_json(const nlohmann::json& j) {
    SweepReport r;
    try {
        r.n = j.at("n").get<std::uint32_t>();
        r.mode = parse_mode(j.at("mode").get<std::string>());
        r.seed = j.at("seed").get<std::uint64_t>();
        r.total = j.at("total").get<std::uint64_t>();
        r.solved = j.at("solved").get<std::uint64_t>();
        r.exempt = j.at("exempt").get<std::uint64_t>();
        for (const auto& f : j.at("failures")) {
            r.failures.push_back({f.at("set").get<std::vector<Residue>>(), f.at("reason").get<std::string>(),
                                  f.at("tries").get<std::uint64_t>()});
        }
        for (const auto& h : j.at("histogram")) {
            SizeStats s;
            s.count = h.at("count").get<std::uint64_t>();
            s.max_tries = h.at("max_tries").get<std::uint64_t>();
            s.total_tries = h.at("total_tries").get<std::uint64_t>();
            s.buckets = h.at("buckets").get<std::vector<std::uint64_t>>();
            s.constructive = h.at("constructive").get<std::uint64_t>();
            s.random = h.at("random").get<std::uint64_t>();
            s.exhaustive = h.at("exhaustive").get<std::uint64_t>();
            r.histogram[h.at("k").get<std::size_t>()] = std::move(s);
        }
        r.duration_ms = j.at("duration_ms").get<std::uint64_t>();
        r.digest = j.at("digest").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed sweep report: ") + e.what());
    }
    return r;
}

std::string SweepReport::compute_digest() const {
    auto j = to_json();
    j.erase("duration_ms");
    j.erase("digest");
    return sha256_hex(j.dump());
}

bool SweepReport::same_content(const SweepReport& o) const {
    return n == o.n && mode == o.mode && seed == o.seed && total == o.total && solved == o.solved &&
           exempt == o.exempt && failures == o.failures && histogram == o.histogram && digest == o.digest;
}

SweepReport empty_report(std::uint32_t n, ValidationMode mode, std::uint64_t seed) {
    SweepReport r;
    r.n = n;
    r.mode = mode;
    r.seed = seed;
    r.seal();
    return r;
}

SweepReport merge_reports(const SweepReport& a, const SweepReport& b) {
    if (a.n != b.n || a.mode != b.mode || a.seed != b.seed) {
        throw std::invalid_argument("cannot merge reports with different (n, mode, seed)");
    }
    SweepReport r = empty_report(a.n, a.mode, a.seed);
    r.total = a.total + b.total;
    r.solved = a.solved + b.solved;
    r.exempt = a.exempt + b.exempt;
    r.failures = a.failures;
    r.failures.insert(r.failures.end(), b.failures.begin(), b.failures.end());
    std::sort(r.failures.begin(), r.failures.end(),
              [](const Failure& x, const Failure& y) { return set_mask(x.set) < set_mask(y.set); });
    r.histogram = a.histogram;
    for (const auto& [k, s] : b.histogram) add_into(r.histogram[k], s);
    r.duration_ms = a.duration_ms + b.duration_ms;
    r.seal();
    return r;
}

}  // namespace psum
