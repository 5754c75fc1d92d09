#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dist.hpp"
#include "errors.hpp"
#include "lattice.hpp"

namespace pidlat {

// A system of binary latents: free bits are uniform and independent, derived
// bits are parities of earlier latents. Sources and the target are tuples of
// latents; the target draws only from latents that appear in some source.
struct LatentSystemSpec {
    struct Latent {
        std::string name;
        std::vector<int> xor_of; // indices of earlier latents; empty = free bit
        bool is_free() const { return xor_of.empty(); }
    };

    static constexpr int kMaxFreeBits = 20;

    std::vector<Latent> latents;
    std::vector<std::string> source_names;
    std::vector<std::vector<int>> sources; // latent indices per source, in listed order
    std::vector<int> target;               // latent indices, in listed order

    int free_bits() const {
        int f = 0;
        for (const auto& l : latents) f += l.is_free() ? 1 : 0;
        return f;
    }

    void validate() const {
        if (latents.empty()) throw input_error("latent system needs at least one latent");
        std::set<std::string> names;
        for (size_t j = 0; j < latents.size(); ++j) {
            if (latents[j].name.empty()) throw input_error("latent with empty name");
            if (!names.insert(latents[j].name).second)
                throw input_error("duplicate latent name '" + latents[j].name + "'");
            for (int ref : latents[j].xor_of)
                if (ref < 0 || static_cast<size_t>(ref) >= j)
                    throw input_error("latent '" + latents[j].name + "' refers to a latent not defined before it");
        }
        if (free_bits() > kMaxFreeBits)
            throw capability_error("more than " + std::to_string(kMaxFreeBits) + " free bits");
        if (sources.empty()) throw input_error("latent system needs at least one source");
        if (sources.size() != source_names.size()) throw input_error("source name count mismatch");
        std::set<std::string> snames(source_names.begin(), source_names.end());
        if (snames.size() != source_names.size() || snames.count("T"))
            throw input_error("source names must be unique and distinct from 'T'");
        std::set<int> in_sources;
        for (const auto& J : sources) {
            if (J.empty()) throw input_error("empty source index set");
            std::set<int> seen;
            for (int j : J) {
                if (j < 0 || static_cast<size_t>(j) >= latents.size())
                    throw input_error("source refers to unknown latent index");
                if (!seen.insert(j).second) throw input_error("duplicate latent within a source");
                in_sources.insert(j);
            }
        }
        if (target.empty()) throw input_error("empty target index set");
        std::set<int> tseen;
        for (int j : target) {
            if (j < 0 || static_cast<size_t>(j) >= latents.size())
                throw input_error("target refers to unknown latent index");
            if (!tseen.insert(j).second) throw input_error("duplicate latent within the target");
            if (!in_sources.count(j))
                throw input_error("target latent '" + latents[static_cast<size_t>(j)].name +
                                  "' does not appear in any source");
        }
    }

    std::vector<std::string> latent_names(const std::vector<int>& idx) const {
        std::vector<std::string> out;
        for (int j : idx) out.push_back(latents[static_cast<size_t>(j)].name);
        return out;
    }

    // Latent names underlying the sources selected by `mask`.
    std::vector<std::string> source_union_names(SourceMask mask) const {
        std::set<int> idx;
        for (size_t i = 0; i < sources.size(); ++i)
            if (mask & (1u << i)) idx.insert(sources[i].begin(), sources[i].end());
        std::vector<std::string> out;
        for (int j : idx) out.push_back(latents[static_cast<size_t>(j)].name);
        return out;
    }
};

// Uniform joint over all latent variables: one support row per assignment of
// the free bits.
inline JointDistribution build_master_joint(const LatentSystemSpec& spec) {
    spec.validate();
    const size_t m = spec.latents.size();
    const int f = spec.free_bits();
    std::vector<std::string> variables;
    std::vector<std::vector<std::string>> alphabets(m, std::vector<std::string>{"0", "1"});
    for (const auto& l : spec.latents) variables.push_back(l.name);

    std::vector<JointDistribution::Row> rows;
    const Rational p = Rational(1) / (BigInt(1) << f);
    for (uint64_t assign = 0; assign < (uint64_t{1} << f); ++assign) {
        std::vector<int> value(m, 0);
        int next_free = 0;
        for (size_t j = 0; j < m; ++j) {
            if (spec.latents[j].is_free()) {
                value[j] = static_cast<int>((assign >> next_free) & 1u);
                ++next_free;
            } else {
                int v = 0;
                for (int ref : spec.latents[j].xor_of) v ^= value[static_cast<size_t>(ref)];
                value[j] = v;
            }
        }
        rows.push_back({std::move(value), p});
    }
    return JointDistribution(std::move(variables), std::move(alphabets), std::move(rows));
}

namespace detail {

inline std::string bits_to_symbol(const std::vector<int>& bits) {
    std::string s;
    for (int b : bits) s += static_cast<char>('0' + b);
    return s;
}

inline std::vector<std::string> full_bitstring_alphabet(size_t width) {
    std::vector<std::string> out;
    for (uint64_t v = 0; v < (uint64_t{1} << width); ++v) {
        std::string s;
        for (size_t i = 0; i < width; ++i) s += ((v >> (width - 1 - i)) & 1u) ? '1' : '0';
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace detail

// Observable joint over the sources and the target, each a bit string read
// off the listed latents. Coinciding outcomes are merged.
inline JointDistribution build_joint(const LatentSystemSpec& spec) {
    JointDistribution master = build_master_joint(spec);
    std::vector<std::string> variables = spec.source_names;
    variables.push_back("T");
    std::vector<std::vector<int>> index_sets = spec.sources;
    index_sets.push_back(spec.target);

    std::map<std::vector<std::string>, Rational> merged;
    for (const auto& row : master.rows()) {
        std::vector<std::string> outcome;
        for (const auto& J : index_sets) {
            std::vector<int> bits;
            for (int j : J) bits.push_back(row.outcome[static_cast<size_t>(j)]);
            outcome.push_back(detail::bits_to_symbol(bits));
        }
        merged[std::move(outcome)] += row.p;
    }

    std::vector<std::vector<std::string>> alphabets;
    for (const auto& J : index_sets) alphabets.push_back(detail::full_bitstring_alphabet(J.size()));
    std::vector<std::pair<std::vector<std::string>, Rational>> rows(merged.begin(), merged.end());
    return JointDistribution::from_rows(std::move(variables), std::move(alphabets), rows);
}

// Verdict for one (target latent, source set) pair: either the sources pin
// the latent exactly or they carry no information about it at all.
struct RecoverabilityEntry {
    int latent = 0;
    std::string latent_name;
    SourceMask sources = 0;
    enum class Kind { recoverable, independent, violating } kind = Kind::violating;
};

struct ModelReport {
    bool admitted = false;
    // Latents determined by the target but not listed in it.
    std::vector<int> target_closure_violations;
    struct SourceIndependence {
        int source = 0;
        bool pass = true;
        std::vector<std::vector<int>> dependent_subsets;
    };
    std::vector<SourceIndependence> source_independence;
    std::vector<RecoverabilityEntry> recoverability;

    bool target_closure_pass() const { return target_closure_violations.empty(); }
    bool source_independence_pass() const {
        for (const auto& s : source_independence)
            if (!s.pass) return false;
        return true;
    }
    bool recoverability_pass() const {
        for (const auto& e : recoverability)
            if (e.kind == RecoverabilityEntry::Kind::violating) return false;
        return true;
    }
};

// Admission test: (a) every latent the target determines is listed in the
// target, (b) the latents inside each source are mutually independent,
// (c) each target latent is either exactly recoverable from, or exactly
// independent of, every source subset. All tests are exact.
inline ModelReport check_model(const LatentSystemSpec& spec) {
    JointDistribution master = build_master_joint(spec);
    ModelReport report;

    std::set<int> target_set(spec.target.begin(), spec.target.end());
    auto target_names = spec.latent_names(spec.target);
    for (size_t j = 0; j < spec.latents.size(); ++j) {
        if (target_set.count(static_cast<int>(j))) continue;
        if (master.is_deterministic({spec.latents[j].name}, target_names))
            report.target_closure_violations.push_back(static_cast<int>(j));
    }

    for (size_t i = 0; i < spec.sources.size(); ++i) {
        ModelReport::SourceIndependence entry;
        entry.source = static_cast<int>(i);
        const auto& J = spec.sources[i];
        if (J.size() >= 2) {
            for (uint32_t sub = 1; sub < (1u << J.size()); ++sub) {
                if (std::popcount(sub) < 2) continue;
                std::vector<VarSet> groups;
                std::vector<int> members;
                for (size_t k = 0; k < J.size(); ++k)
                    if (sub & (1u << k)) {
                        groups.push_back({spec.latents[static_cast<size_t>(J[k])].name});
                        members.push_back(J[k]);
                    }
                if (!master.is_product(groups)) {
                    entry.pass = false;
                    entry.dependent_subsets.push_back(std::move(members));
                }
            }
        }
        report.source_independence.push_back(std::move(entry));
    }

    const SourceMask full = (1u << spec.sources.size()) - 1u;
    for (int j : spec.target) {
        const std::string& name = spec.latents[static_cast<size_t>(j)].name;
        for (SourceMask b = 1; b <= full; ++b) {
            RecoverabilityEntry entry;
            entry.latent = j;
            entry.latent_name = name;
            entry.sources = b;
            auto cond = spec.source_union_names(b);
            if (master.is_deterministic({name}, cond)) {
                entry.kind = RecoverabilityEntry::Kind::recoverable;
            } else {
                std::vector<std::string> others;
                for (const auto& c : cond)
                    if (c != name) others.push_back(c);
                entry.kind = master.is_independent({name}, others)
                                 ? RecoverabilityEntry::Kind::independent
                                 : RecoverabilityEntry::Kind::violating;
            }
            report.recoverability.push_back(std::move(entry));
        }
    }

    report.admitted = report.target_closure_pass() && report.source_independence_pass() &&
                      report.recoverability_pass();
    return report;
}

struct model_rejected : std::runtime_error {
    explicit model_rejected(ModelReport r)
        : std::runtime_error("latent system fails the admission checks"), report(std::move(r)) {}
    ModelReport report;
};

// Source subsets that pin down target latent `j` exactly. Requires a
// non-constant latent listed in the target.
inline std::vector<SourceMask> recovering_sets(const LatentSystemSpec& spec, int j) {
    spec.validate();
    if (std::find(spec.target.begin(), spec.target.end(), j) == spec.target.end())
        throw input_error("latent index " + std::to_string(j) + " is not a target latent");
    JointDistribution master = build_master_joint(spec);
    const std::string& name = spec.latents[static_cast<size_t>(j)].name;
    if (master.is_deterministic({name}, {}))
        throw input_error("latent '" + name + "' is constant; recovering sets are undefined");
    std::vector<SourceMask> rec;
    const SourceMask full = (1u << spec.sources.size()) - 1u;
    for (SourceMask b = 1; b <= full; ++b)
        if (master.is_deterministic({name}, spec.source_union_names(b))) rec.push_back(b);
    return rec;
}

// Minimal recovering sets form an antichain; it indexes the atom the latent
// contributes to.
inline Antichain principal_antichain(const LatentSystemSpec& spec, int j) {
    auto rec = recovering_sets(spec, j);
    std::vector<SourceMask> minimal;
    for (SourceMask b : rec) {
        bool is_min = true;
        for (SourceMask other : rec)
            if (other != b && mask_subset(other, b)) {
                is_min = false;
                break;
            }
        if (is_min) minimal.push_back(b);
    }
    return Antichain::make(std::move(minimal));
}

struct CanonicalAtomsResult {
    AtomTable table;
    std::map<int, Antichain> assignment; // target latent -> its atom
    std::vector<std::string> warnings;
};

// Atom table of an admitted system: target latents grouped by principal
// antichain, each atom the joint entropy of its group.
inline CanonicalAtomsResult canonical_atoms(const LatentSystemSpec& spec) {
    ModelReport report = check_model(spec);
    if (!report.admitted) throw model_rejected(std::move(report));

    JointDistribution master = build_master_joint(spec);
    AtomTable table(enumerate_antichains(static_cast<int>(spec.sources.size()), false));
    std::map<int, Antichain> assignment;
    std::vector<std::string> warnings;
    std::map<Antichain, std::vector<int>> groups;
    for (int j : spec.target) {
        const std::string& name = spec.latents[static_cast<size_t>(j)].name;
        if (master.is_deterministic({name}, {})) {
            warnings.push_back("target latent '" + name + "' is constant and contributes no atom");
            continue;
        }
        Antichain alpha = principal_antichain(spec, j);
        groups[alpha].push_back(j);
        assignment.emplace(j, alpha);
    }
    for (const auto& [alpha, members] : groups)
        table.set(alpha, master.entropy(spec.latent_names(members)));
    return CanonicalAtomsResult{std::move(table), std::move(assignment), std::move(warnings)};
}

} // namespace pidlat
