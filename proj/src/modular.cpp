#include "psum/modular.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace psum {

namespace {

void check_residue(const Modulus& m, Residue r) {
    if (r == 0 || r >= m.value()) {
        throw std::invalid_argument("residue " + std::to_string(r) + " is not in [1, " +
                                    std::to_string(m.value() - 1) + "]");
    }
}

}  // namespace

Modulus::Modulus(std::uint32_t n) : n_(n) {
    if (n < 2) throw std::invalid_argument("modulus must be at least 2");
    if (n > (1u << 31)) throw std::invalid_argument("modulus must not exceed 2^31");
}

Subset::Subset(Modulus modulus, std::vector<Residue> elements)
    : modulus_(modulus), elements_(std::move(elements)) {
    if (elements_.empty()) throw std::invalid_argument("subset must be nonempty");
    for (std::size_t i = 0; i < elements_.size(); ++i) {
        check_residue(modulus_, elements_[i]);
        if (i > 0 && elements_[i - 1] >= elements_[i]) {
            throw std::invalid_argument("subset elements must be strictly increasing");
        }
    }
}

Subset Subset::from_unsorted(Modulus modulus, std::vector<Residue> elements) {
    std::sort(elements.begin(), elements.end());
    if (std::adjacent_find(elements.begin(), elements.end()) != elements.end()) {
        throw std::invalid_argument("subset elements must be distinct");
    }
    return Subset(modulus, std::move(elements));
}

Subset Subset::from_mask(Modulus modulus, std::uint64_t mask) {
    if (modulus.value() > 64) throw std::invalid_argument("bitmask subsets need n <= 64");
    if ((mask >> (modulus.value() - 1)) != 0) {
        throw std::invalid_argument("bitmask selects residues outside [1, n-1]");
    }
    std::vector<Residue> elems;
    for (Residue e = 1; mask != 0; ++e, mask >>= 1) {
        if (mask & 1u) elems.push_back(e);
    }
    return Subset(modulus, std::move(elems));
}

bool Subset::contains(Residue r) const noexcept {
    return std::binary_search(elements_.begin(), elements_.end(), r);
}

std::uint64_t Subset::mask() const {
    if (modulus_.value() > 64) throw std::invalid_argument("bitmask subsets need n <= 64");
    std::uint64_t m = 0;
    for (Residue e : elements_) m |= std::uint64_t{1} << (e - 1);
    return m;
}

Ordering::Ordering(Modulus modulus, std::vector<Residue> sequence)
    : modulus_(modulus), sequence_(std::move(sequence)) {
    if (sequence_.empty()) throw std::invalid_argument("ordering must be nonempty");
    for (Residue r : sequence_) check_residue(modulus_, r);
    std::vector<Residue> sorted = sequence_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("ordering repeats an element");
    }
}

Subset Ordering::subset() const {
    return Subset::from_unsorted(modulus_, sequence_);
}

PartialSumProfile partial_sums(const Ordering& ordering) {
    const Modulus& m = ordering.modulus();
    PartialSumProfile out;
    out.sums.reserve(ordering.size());
    Residue s = 0;
    for (Residue a : ordering.sequence()) {
        s = m.add(s, a);
        out.sums.push_back(s);
    }
    return out;
}

Residue run(const Ordering& ordering, std::size_t i, std::size_t j) {
    if (i < 1 || i > j || j > ordering.size()) {
        throw std::out_of_range("run indices must satisfy 1 <= i <= j <= k");
    }
    const Modulus& m = ordering.modulus();
    auto seq = ordering.sequence();
    Residue r = 0;
    for (std::size_t h = i - 1; h < j; ++h) r = m.add(r, seq[h]);
    return r;
}

bool is_sequencing(const Ordering& ordering, ValidationMode mode) {
    auto sums = partial_sums(ordering).sums;
    if (mode == ValidationMode::DistinctNonzero &&
        std::find(sums.begin(), sums.end(), Residue{0}) != sums.end()) {
        return false;
    }
    std::sort(sums.begin(), sums.end());
    return std::adjacent_find(sums.begin(), sums.end()) == sums.end();
}

bool is_sequencing_via_runs(const Ordering& ordering, ValidationMode mode) {
    const Modulus& m = ordering.modulus();
    auto seq = ordering.sequence();
    const std::size_t first = mode == ValidationMode::DistinctOnly ? 1 : 0;
    for (std::size_t i = first; i < seq.size(); ++i) {
        Residue r = 0;
        for (std::size_t j = i; j < seq.size(); ++j) {
            r = m.add(r, seq[j]);
            if (r == 0) return false;
        }
    }
    return true;
}

Residue subset_sum(const Subset& subset) {
    const Modulus& m = subset.modulus();
    Residue s = 0;
    for (Residue e : subset.elements()) s = m.add(s, e);
    return s;
}

std::size_t inverse_pair_count(const Subset& subset) {
    const Modulus& m = subset.modulus();
    std::size_t pairs = 0;
    for (Residue e : subset.elements()) {
        Residue inv = m.neg(e);
        if (e < inv && subset.contains(inv)) ++pairs;
    }
    return pairs;
}

std::string_view to_string(ValidationMode mode) noexcept {
    return mode == ValidationMode::DistinctOnly ? "distinct" : "nonzero";
}

ValidationMode parse_mode(std::string_view text) {
    if (text == "distinct") return ValidationMode::DistinctOnly;
    if (text == "nonzero") return ValidationMode::DistinctNonzero;
    throw std::invalid_argument("unknown mode '" + std::string(text) +
                                "' (expected distinct or nonzero)");
}

std::string join_residues(std::span<const Residue> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    return out;
}

}  // namespace psum
