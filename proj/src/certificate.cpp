#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>

#include "psum/harness.hpp"

namespace psum {

namespace {

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
        throw std::invalid_argument("bad " + std::string(what) + " value '" + std::string(text) + "'");
    }
    return v;
}

std::vector<Residue> parse_list(std::string_view text, std::string_view what) {
    std::vector<Residue> out;
    if (text.empty()) throw std::invalid_argument("empty " + std::string(what) + " list");
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = text.find(',', start);
        const std::string_view item = text.substr(start, comma == std::string_view::npos ? comma : comma - start);
        const std::uint64_t v = parse_uint(item, what);
        if (v > UINT32_MAX) throw std::invalid_argument(std::string(what) + " element out of range");
        out.push_back(static_cast<Residue>(v));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string format_certificate(const Certificate& cert) {
    std::string line = "n=" + std::to_string(cert.n);
    line += ";mode=";
    line += to_string(cert.mode);
    line += ";set=" + join_residues(cert.set);
    line += ";ord=" + join_residues(cert.ordering);
    line += ";method=";
    line += to_string(cert.method);
    line += ";tries=" + std::to_string(cert.tries);
    return line;
}

Certificate parse_certificate(std::string_view line) {
    static constexpr std::string_view keys[] = {"n", "mode", "set", "ord", "method", "tries"};
    bool seen[std::size(keys)] = {};
    Certificate cert;
    std::size_t start = 0;
    while (start <= line.size()) {
        const std::size_t semi = line.find(';', start);
        const std::string_view field =
            line.substr(start, semi == std::string_view::npos ? semi : semi - start);
        const std::size_t eq = field.find('=');
        if (eq == std::string_view::npos) throw std::invalid_argument("field without '=': '" + std::string(field) + "'");
        const std::string_view key = field.substr(0, eq);
        const std::string_view value = field.substr(eq + 1);

        const auto it = std::find(std::begin(keys), std::end(keys), key);
        if (it == std::end(keys)) throw std::invalid_argument("unknown key '" + std::string(key) + "'");
        const auto idx = static_cast<std::size_t>(it - std::begin(keys));
        if (seen[idx]) throw std::invalid_argument("duplicate key '" + std::string(key) + "'");
        seen[idx] = true;

        switch (idx) {
            case 0: {
                const std::uint64_t n = parse_uint(value, "n");
                if (n > UINT32_MAX) throw std::invalid_argument("n out of range");
                cert.n = static_cast<std::uint32_t>(n);
                break;
            }
            case 1: cert.mode = parse_mode(value); break;
            case 2: cert.set = parse_list(value, "set"); break;
            case 3: cert.ordering = parse_list(value, "ord"); break;
            case 4: cert.method = parse_method(value); break;
            default: cert.tries = parse_uint(value, "tries"); break;
        }
        if (semi == std::string_view::npos) break;
        start = semi + 1;
    }
    for (std::size_t i = 0; i < std::size(keys); ++i) {
        if (!seen[i]) throw std::invalid_argument("missing key '" + std::string(keys[i]) + "'");
    }
    return cert;
}

std::optional<std::string> certificate_problem(const Certificate& cert) {
    try {
        const Modulus m(cert.n);
        const Subset set(m, cert.set);  // strictly ascending, nonzero, in range
        const Ordering ord(m, cert.ordering);
        if (ord.subset() != set) return "ord is not a permutation of set";
        if (!is_sequencing(ord, cert.mode)) {
            return cert.mode == ValidationMode::DistinctOnly ? "partial sums repeat"
                                                             : "partial sums repeat or hit 0";
        }
    } catch (const std::invalid_argument& e) {
        return e.what();
    }
    return std::nullopt;
}

VerificationReport verify_certificates(std::istream& in) {
    VerificationReport report;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        ++report.records;
        try {
            const Certificate cert = parse_certificate(line);
            if (auto problem = certificate_problem(cert)) {
                report.issues.push_back({lineno, "invalid: " + *problem});
                continue;
            }
            ++report.valid;
        } catch (const std::invalid_argument& e) {
            report.issues.push_back({lineno, std::string("malformed: ") + e.what()});
        }
    }
    return report;
}

VerificationReport verify_certificates(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open certificate file " + path.string());
    return verify_certificates(in);
}

}  // namespace psum
