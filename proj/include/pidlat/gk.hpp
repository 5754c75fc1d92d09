#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "dist.hpp"
#include "errors.hpp"
#include "rational.hpp"

namespace pidlat {

// Partition of the support into the finest blocks readable off every group:
// the join of the groups' value partitions.
struct PartitionJoin {
    std::vector<std::vector<size_t>> blocks; // support row indices, each sorted; blocks sorted by first index
    std::vector<Rational> block_masses;
    double entropy_bits = 0.0;
};

struct GkResult {
    double bits = 0.0;
    PartitionJoin partition;
};

namespace detail {

inline size_t uf_find(std::vector<size_t>& parent, size_t x) {
    while (parent[x] != x) {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    return x;
}

inline void uf_union(std::vector<size_t>& parent, size_t a, size_t b) {
    a = uf_find(parent, a);
    b = uf_find(parent, b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
}

} // namespace detail

// Common information shared by all groups: entropy of the maximal random
// variable that is a deterministic function of each group's value.
// Outcomes in the same block cannot be told apart by any single group.
inline GkResult gk_common_info(const JointDistribution& dist, const std::vector<VarSet>& groups) {
    if (groups.size() < 2) throw input_error("common information needs at least two groups");
    std::vector<std::vector<int>> gidx;
    for (const auto& g : groups) {
        auto idx = dist.resolve(g);
        if (idx.empty()) throw input_error("common information groups must be nonempty");
        gidx.push_back(std::move(idx));
    }

    const auto& rows = dist.rows();
    std::vector<size_t> parent(rows.size());
    std::iota(parent.begin(), parent.end(), size_t{0});
    for (const auto& idx : gidx) {
        std::map<std::vector<int>, size_t> first_row;
        for (size_t r = 0; r < rows.size(); ++r) {
            auto key = JointDistribution::project(rows[r], idx);
            auto [it, inserted] = first_row.emplace(std::move(key), r);
            if (!inserted) detail::uf_union(parent, it->second, r);
        }
    }

    std::map<size_t, std::vector<size_t>> by_root;
    for (size_t r = 0; r < rows.size(); ++r) by_root[detail::uf_find(parent, r)].push_back(r);

    PartitionJoin part;
    for (auto& [root, members] : by_root) {
        Rational mass = 0;
        for (size_t r : members) mass += rows[r].p;
        part.blocks.push_back(std::move(members)); // map order = smallest row first
        part.block_masses.push_back(std::move(mass));
    }
    for (const auto& m : part.block_masses) part.entropy_bits += entropy_term(m);
    return GkResult{part.entropy_bits, std::move(part)};
}

// Three-way redundancy of a three-variable system: the common information
// of the three singleton groups.
inline GkResult red3(const JointDistribution& dist) {
    if (dist.variables().size() != 3)
        throw input_error("red3 requires exactly three variables, got " +
                          std::to_string(dist.variables().size()));
    std::vector<VarSet> groups;
    for (const auto& v : dist.variables()) groups.push_back(VarSet{v});
    return gk_common_info(dist, groups);
}

// Appends a variable carrying the block index of `partition`; useful for
// certifying that the extracted common variable is a function of each group.
inline JointDistribution with_block_variable(const JointDistribution& dist, const PartitionJoin& partition,
                                             const std::string& name) {
    std::vector<size_t> block_of(dist.rows().size());
    for (size_t b = 0; b < partition.blocks.size(); ++b)
        for (size_t r : partition.blocks[b]) block_of[r] = b;
    std::vector<std::string> variables = dist.variables();
    variables.push_back(name);
    std::vector<std::vector<std::string>> alphabets = dist.alphabets();
    std::vector<std::string> block_symbols;
    for (size_t b = 0; b < partition.blocks.size(); ++b) block_symbols.push_back("q" + std::to_string(b));
    alphabets.push_back(block_symbols);
    std::vector<JointDistribution::Row> rows;
    for (size_t r = 0; r < dist.rows().size(); ++r) {
        JointDistribution::Row row = dist.rows()[r];
        row.outcome.push_back(static_cast<int>(block_of[r]));
        rows.push_back(std::move(row));
    }
    return JointDistribution(std::move(variables), std::move(alphabets), std::move(rows));
}

} // namespace pidlat
