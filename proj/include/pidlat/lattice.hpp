#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "errors.hpp"

namespace pidlat {

// Nonempty source subset as a bitmask: bit i-1 set means source i is in.
using SourceMask = uint32_t;

inline int mask_popcount(SourceMask m) { return std::popcount(m); }

// Canonical key for ordering subsets: smaller subsets first, ties by value.
inline std::pair<int, SourceMask> mask_key(SourceMask m) { return {mask_popcount(m), m}; }

inline bool mask_subset(SourceMask a, SourceMask b) { return (a & ~b) == 0; } // a <= b

// An antichain of nonempty source subsets: no element contains another.
// Elements are stored sorted by (popcount, value).
class Antichain {
  public:
    static Antichain make(std::vector<SourceMask> elements) {
        if (elements.empty()) throw input_error("antichain must be nonempty");
        for (SourceMask m : elements)
            if (m == 0) throw input_error("antichain elements must be nonempty subsets");
        std::sort(elements.begin(), elements.end(),
                  [](SourceMask a, SourceMask b) { return mask_key(a) < mask_key(b); });
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
        for (size_t i = 0; i < elements.size(); ++i)
            for (size_t j = 0; j < elements.size(); ++j)
                if (i != j && mask_subset(elements[i], elements[j]))
                    throw input_error("not an antichain: element " + std::to_string(elements[i]) +
                                      " is contained in " + std::to_string(elements[j]));
        Antichain a;
        a.elements_ = std::move(elements);
        return a;
    }

    const std::vector<SourceMask>& elements() const { return elements_; }

    SourceMask union_mask() const {
        SourceMask u = 0;
        for (SourceMask m : elements_) u |= m;
        return u;
    }

    bool has_singleton() const {
        for (SourceMask m : elements_)
            if (mask_popcount(m) == 1) return true;
        return false;
    }

    // Canonical order: elementwise by (popcount, value); on a proper prefix
    // the longer antichain sorts first, so finer antichains come earlier.
    bool operator<(const Antichain& other) const {
        const auto& a = elements_;
        const auto& b = other.elements_;
        size_t n = std::min(a.size(), b.size());
        for (size_t i = 0; i < n; ++i) {
            auto ka = mask_key(a[i]);
            auto kb = mask_key(b[i]);
            if (ka != kb) return ka < kb;
        }
        return a.size() > b.size();
    }
    bool operator==(const Antichain& other) const { return elements_ == other.elements_; }
    bool operator!=(const Antichain& other) const { return !(*this == other); }

    // Text form, e.g. "{1}{23}". Source indices are 1-based.
    std::string render() const {
        std::string out;
        for (SourceMask m : elements_) {
            out += '{';
            for (int i = 0; i < 32; ++i)
                if (m & (1u << i)) out += static_cast<char>('1' + i);
            out += '}';
        }
        return out;
    }

    static Antichain parse(const std::string& text) {
        std::vector<SourceMask> elements;
        size_t i = 0;
        while (i < text.size()) {
            if (text[i] != '{') throw input_error("bad antichain literal: '" + text + "'");
            SourceMask m = 0;
            ++i;
            while (i < text.size() && text[i] != '}') {
                if (text[i] < '1' || text[i] > '9')
                    throw input_error("bad source index in antichain literal: '" + text + "'");
                m |= 1u << (text[i] - '1');
                ++i;
            }
            if (i == text.size()) throw input_error("unterminated antichain literal: '" + text + "'");
            ++i;
            elements.push_back(m);
        }
        return make(std::move(elements));
    }

  private:
    Antichain() = default;
    std::vector<SourceMask> elements_;
};

// beta <= alpha in the redundancy order: every element of alpha contains
// some element of beta.
inline bool leq(const Antichain& beta, const Antichain& alpha) {
    for (SourceMask a : alpha.elements()) {
        bool covered = false;
        for (SourceMask b : beta.elements())
            if (mask_subset(b, a)) {
                covered = true;
                break;
            }
        if (!covered) return false;
    }
    return true;
}

struct Lattice {
    int n_sources = 0;
    bool half = false;
    std::vector<Antichain> antichains; // canonical order

    bool contains(const Antichain& a) const {
        return std::binary_search(antichains.begin(), antichains.end(), a);
    }
};

constexpr int kMaxSources = 5;

namespace detail {

inline void extend_antichains(const std::vector<SourceMask>& masks, size_t next,
                              std::vector<SourceMask>& current, std::vector<Antichain>& out) {
    for (size_t i = next; i < masks.size(); ++i) {
        bool comparable = false;
        for (SourceMask c : current)
            if (mask_subset(c, masks[i]) || mask_subset(masks[i], c)) {
                comparable = true;
                break;
            }
        if (comparable) continue;
        current.push_back(masks[i]);
        out.push_back(Antichain::make(current));
        extend_antichains(masks, i + 1, current, out);
        current.pop_back();
    }
}

} // namespace detail

// All antichains of nonempty subsets of {1..n}; with `half`, only those
// containing at least one singleton.
inline Lattice enumerate_antichains(int n, bool half = false) {
    if (n < 1 || n > kMaxSources)
        throw capability_error("source count " + std::to_string(n) + " out of supported range [1, " +
                               std::to_string(kMaxSources) + "]");
    std::vector<SourceMask> masks;
    for (SourceMask m = 1; m < (1u << n); ++m) masks.push_back(m);
    std::sort(masks.begin(), masks.end(),
              [](SourceMask a, SourceMask b) { return mask_key(a) < mask_key(b); });
    std::vector<Antichain> all;
    std::vector<SourceMask> current;
    detail::extend_antichains(masks, 0, current, all);
    if (half) {
        std::vector<Antichain> kept;
        for (auto& a : all)
            if (a.has_singleton()) kept.push_back(std::move(a));
        all = std::move(kept);
    }
    std::sort(all.begin(), all.end());
    Lattice lat;
    lat.n_sources = n;
    lat.half = half;
    lat.antichains = std::move(all);
    return lat;
}

// Inclusive down-set of alpha within the lattice, in canonical order.
inline std::vector<Antichain> downset(const Lattice& lattice, const Antichain& alpha) {
    if (!lattice.contains(alpha))
        throw input_error("antichain " + alpha.render() + " is not a member of the lattice");
    std::vector<Antichain> out;
    for (const auto& beta : lattice.antichains)
        if (leq(beta, alpha)) out.push_back(beta);
    return out;
}

// Atom assignment over a lattice. The default constructor makes the table
// total with all-zero entries; entries for non-member antichains are refused.
class AtomTable {
  public:
    explicit AtomTable(Lattice lattice) : lattice_(std::move(lattice)) {
        for (const auto& a : lattice_.antichains) values_[a] = 0.0;
    }
    AtomTable(Lattice lattice, std::map<Antichain, double> values)
        : lattice_(std::move(lattice)), values_(std::move(values)) {
        for (const auto& [a, v] : values_)
            if (!lattice_.contains(a))
                throw input_error("atom entry " + a.render() + " is not a member of the lattice");
    }

    const Lattice& lattice() const { return lattice_; }
    const std::map<Antichain, double>& entries() const { return values_; }

    bool has(const Antichain& a) const { return values_.count(a) != 0; }

    double at(const Antichain& a) const {
        auto it = values_.find(a);
        if (it == values_.end()) throw input_error("missing atom entry for " + a.render());
        return it->second;
    }

    void set(const Antichain& a, double v) {
        if (!lattice_.contains(a))
            throw input_error("atom entry " + a.render() + " is not a member of the lattice");
        values_[a] = v;
    }

  private:
    Lattice lattice_;
    std::map<Antichain, double> values_;
};

// Sum of atoms over the down-set of {b}: the total information the sources
// in b are accountable for under the inclusion-exclusion reading.
inline double wesp_sum(const AtomTable& atoms, const Lattice& lattice, SourceMask b) {
    if (lattice.n_sources != atoms.lattice().n_sources || lattice.half != atoms.lattice().half)
        throw input_error("atom table does not match the given lattice");
    if (b == 0 || b >= (1u << lattice.n_sources))
        throw input_error("source set out of range");
    Antichain top = Antichain::make({b});
    double sum = 0.0;
    for (const auto& beta : downset(lattice, top)) sum += atoms.at(beta);
    return sum;
}

} // namespace pidlat
