#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "canonical.hpp"
#include "constructions.hpp"
#include "dist.hpp"
#include "errors.hpp"
#include "gk.hpp"
#include "lattice.hpp"
#include "rational.hpp"
#include "sid.hpp"

namespace pidlat {

using Json = nlohmann::ordered_json;

// All serialized floats are fixed to nine decimal places.
inline double round9(double v) {
    double r = std::round(v * 1e9) / 1e9;
    return r == 0.0 ? 0.0 : r;
}

inline std::string format9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", round9(v));
    return std::string(buf);
}

inline Json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw input_error("invalid JSON in " + what + ": " + e.what());
    }
}

inline Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_json_text(text, path);
}

// ---- distributions ----

inline JointDistribution distribution_from_json(const Json& doc) {
    if (!doc.is_object() || !doc.contains("variables") || !doc.contains("pmf"))
        throw input_error("distribution JSON needs 'variables' and 'pmf'");
    std::vector<std::string> variables;
    for (const auto& v : doc.at("variables")) {
        if (!v.is_string()) throw input_error("variable names must be strings");
        variables.push_back(v.get<std::string>());
    }
    std::vector<std::vector<std::string>> alphabets;
    if (doc.contains("alphabets")) {
        for (const auto& a : doc.at("alphabets")) {
            std::vector<std::string> symbols;
            for (const auto& s : a) {
                if (!s.is_string()) throw input_error("alphabet symbols must be strings");
                symbols.push_back(s.get<std::string>());
            }
            alphabets.push_back(std::move(symbols));
        }
    }
    std::vector<std::pair<std::vector<std::string>, Rational>> rows;
    for (const auto& entry : doc.at("pmf")) {
        if (!entry.is_object() || !entry.contains("outcome") || !entry.contains("p"))
            throw input_error("each pmf entry needs 'outcome' and 'p'");
        std::vector<std::string> outcome;
        for (const auto& s : entry.at("outcome")) {
            if (!s.is_string()) throw input_error("outcome symbols must be strings");
            outcome.push_back(s.get<std::string>());
        }
        const auto& p = entry.at("p");
        Rational mass;
        if (p.is_string())
            mass = parse_rational(p.get<std::string>());
        else if (p.is_number_integer())
            mass = Rational(p.get<long long>());
        else
            throw input_error("probabilities must be rational strings like \"1/4\" or \"0.25\"");
        rows.emplace_back(std::move(outcome), std::move(mass));
    }
    return JointDistribution::from_rows(std::move(variables), std::move(alphabets), rows);
}

inline Json distribution_to_json(const JointDistribution& dist) {
    Json doc;
    doc["variables"] = dist.variables();
    Json pmf = Json::array();
    for (const auto& row : dist.rows()) {
        Json entry;
        entry["outcome"] = dist.outcome_symbols(row);
        entry["p"] = format_rational(row.p);
        pmf.push_back(std::move(entry));
    }
    doc["pmf"] = std::move(pmf);
    return doc;
}

inline JointDistribution load_distribution(const std::string& path) {
    return distribution_from_json(load_json_file(path));
}

// ---- latent system specs ----

inline LatentSystemSpec latent_spec_from_json(const Json& doc) {
    if (!doc.is_object() || !doc.contains("latents") || !doc.contains("sources") || !doc.contains("target"))
        throw input_error("latent spec JSON needs 'latents', 'sources' and 'target'");
    LatentSystemSpec spec;
    std::map<std::string, int> index;
    for (const auto& entry : doc.at("latents")) {
        if (!entry.is_object() || !entry.contains("name") || !entry.contains("kind"))
            throw input_error("each latent needs 'name' and 'kind'");
        LatentSystemSpec::Latent latent;
        latent.name = entry.at("name").get<std::string>();
        std::string kind = entry.at("kind").get<std::string>();
        if (kind == "free") {
            if (entry.contains("of")) throw input_error("free latent '" + latent.name + "' cannot list inputs");
        } else if (kind == "xor") {
            if (!entry.contains("of")) throw input_error("xor latent '" + latent.name + "' needs 'of'");
            for (const auto& ref : entry.at("of")) {
                auto it = index.find(ref.get<std::string>());
                if (it == index.end())
                    throw input_error("latent '" + latent.name + "' refers to undefined latent '" +
                                      ref.get<std::string>() + "'");
                latent.xor_of.push_back(it->second);
            }
            if (latent.xor_of.empty()) throw input_error("xor latent '" + latent.name + "' has no inputs");
        } else {
            throw input_error("unknown latent kind '" + kind + "'");
        }
        index[latent.name] = static_cast<int>(spec.latents.size());
        spec.latents.push_back(std::move(latent));
    }
    auto resolve = [&](const Json& names) {
        std::vector<int> out;
        for (const auto& n : names) {
            auto it = index.find(n.get<std::string>());
            if (it == index.end()) throw input_error("reference to undefined latent '" + n.get<std::string>() + "'");
            out.push_back(it->second);
        }
        return out;
    };
    if (!doc.at("sources").is_object()) throw input_error("'sources' must map source names to latent lists");
    for (const auto& [name, members] : doc.at("sources").items()) {
        spec.source_names.push_back(name);
        spec.sources.push_back(resolve(members));
    }
    spec.target = resolve(doc.at("target"));
    spec.validate();
    return spec;
}

inline Json latent_spec_to_json(const LatentSystemSpec& spec) {
    Json doc;
    Json latents = Json::array();
    for (const auto& l : spec.latents) {
        Json entry;
        entry["name"] = l.name;
        entry["kind"] = l.is_free() ? "free" : "xor";
        if (!l.is_free()) entry["of"] = spec.latent_names(l.xor_of);
        latents.push_back(std::move(entry));
    }
    doc["latents"] = std::move(latents);
    Json sources = Json::object();
    for (size_t i = 0; i < spec.sources.size(); ++i)
        sources[spec.source_names[i]] = spec.latent_names(spec.sources[i]);
    doc["sources"] = std::move(sources);
    doc["target"] = spec.latent_names(spec.target);
    return doc;
}

inline LatentSystemSpec load_latent_spec(const std::string& path) {
    return latent_spec_from_json(load_json_file(path));
}

// ---- lattice and atoms ----

inline Json antichain_to_json(const Antichain& a) {
    Json out = Json::array();
    for (SourceMask m : a.elements()) {
        Json element = Json::array();
        for (int i = 0; i < 32; ++i)
            if (m & (1u << i)) element.push_back(i + 1);
        out.push_back(std::move(element));
    }
    return out;
}

inline Antichain antichain_from_json(const Json& doc) {
    std::vector<SourceMask> elements;
    for (const auto& element : doc) {
        SourceMask m = 0;
        for (const auto& idx : element) {
            int i = idx.get<int>();
            if (i < 1 || i > 32) throw input_error("source index out of range in antichain");
            m |= 1u << (i - 1);
        }
        elements.push_back(m);
    }
    return Antichain::make(std::move(elements));
}

inline Json lattice_to_json(const Lattice& lattice) {
    Json doc;
    doc["sources"] = lattice.n_sources;
    doc["half"] = lattice.half;
    doc["count"] = lattice.antichains.size();
    Json list = Json::array();
    for (const auto& a : lattice.antichains) list.push_back(antichain_to_json(a));
    doc["antichains"] = std::move(list);
    return doc;
}

inline Json atom_table_to_json(const AtomTable& table) {
    Json atoms = Json::object();
    for (const auto& a : table.lattice().antichains)
        if (table.has(a)) atoms[a.render()] = round9(table.at(a));
    Json doc;
    doc["sources"] = table.lattice().n_sources;
    doc["atoms"] = std::move(atoms);
    return doc;
}

inline Json sid_atoms_to_json(const SidAtoms& atoms) {
    Json entries = Json::object();
    const auto& names = sid_atom_names();
    for (size_t i = 0; i < names.size(); ++i) entries[names[i]] = round9(atoms.psi[i]);
    Json doc;
    doc["atoms"] = std::move(entries);
    doc["red_source"] = red_source_name(atoms.red_source);
    if (!atoms.warnings.empty()) doc["warnings"] = atoms.warnings;
    return doc;
}

inline Json sid_check_to_json(const SidCheck& c) {
    Json doc;
    doc["name"] = c.name;
    doc["passed"] = c.passed;
    doc["lhs"] = round9(c.lhs);
    doc["rhs"] = round9(c.rhs);
    doc["tolerance"] = c.tolerance;
    return doc;
}

inline Json sid_report_to_json(const SidAxiomReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks) checks.push_back(sid_check_to_json(c));
    Json doc;
    doc["all_passed"] = report.all_passed();
    doc["checks"] = std::move(checks);
    return doc;
}

inline Json cross_scale_report_to_json(const CrossScaleReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks) checks.push_back(sid_check_to_json(c));
    Json doc;
    doc["all_passed"] = report.all_passed();
    doc["checks"] = std::move(checks);
    return doc;
}

// ---- common information ----

inline Json partition_to_json(const JointDistribution& dist, const PartitionJoin& partition) {
    Json blocks = Json::array();
    for (size_t b = 0; b < partition.blocks.size(); ++b) {
        Json block;
        Json members = Json::array();
        for (size_t r : partition.blocks[b]) members.push_back(dist.outcome_symbols(dist.rows()[r]));
        block["outcomes"] = std::move(members);
        block["mass"] = format_rational(partition.block_masses[b]);
        blocks.push_back(std::move(block));
    }
    return blocks;
}

inline Json gk_result_to_json(const JointDistribution& dist, const GkResult& result) {
    Json doc;
    doc["bits"] = round9(result.bits);
    doc["blocks"] = partition_to_json(dist, result.partition);
    return doc;
}

// ---- model reports ----

inline Json model_report_to_json(const LatentSystemSpec& spec, const ModelReport& report) {
    Json doc;
    doc["admitted"] = report.admitted;

    Json closure;
    closure["pass"] = report.target_closure_pass();
    closure["determined_outside_target"] = spec.latent_names(report.target_closure_violations);
    doc["target_closure"] = std::move(closure);

    Json indep = Json::array();
    for (const auto& s : report.source_independence) {
        Json entry;
        entry["source"] = spec.source_names[static_cast<size_t>(s.source)];
        entry["pass"] = s.pass;
        Json bad = Json::array();
        for (const auto& subset : s.dependent_subsets) bad.push_back(spec.latent_names(subset));
        entry["dependent_subsets"] = std::move(bad);
        indep.push_back(std::move(entry));
    }
    doc["source_independence"] = std::move(indep);

    Json rec = Json::array();
    for (const auto& e : report.recoverability) {
        Json entry;
        entry["latent"] = e.latent_name;
        Json srcs = Json::array();
        for (int i = 0; i < 32; ++i)
            if (e.sources & (1u << i)) srcs.push_back(spec.source_names[static_cast<size_t>(i)]);
        entry["sources"] = std::move(srcs);
        entry["kind"] = e.kind == RecoverabilityEntry::Kind::recoverable  ? "recoverable"
                        : e.kind == RecoverabilityEntry::Kind::independent ? "independent"
                                                                           : "violating";
        rec.push_back(std::move(entry));
    }
    doc["recoverability"] = std::move(rec);
    return doc;
}

inline Json paradox_report_to_json(const ParadoxReport& report) {
    Json doc;
    doc["mi_total"] = round9(report.mi_total);
    doc["downset_sum"] = round9(report.downset_sum);
    doc["violation"] = report.violation;
    doc["forced_atoms"] = atom_table_to_json(report.forced_atoms);
    return doc;
}

inline Json witness_report_to_json(const WitnessReport& report) {
    Json doc;
    doc["mi_hat"] = round9(report.mi_a);
    doc["mi_tilde"] = round9(report.mi_b);
    doc["atoms_equal"] = report.atoms_equal;
    doc["mi_differs"] = report.mi_differs;
    doc["theorem_reproduced"] = report.theorem_reproduced;
    doc["atoms_hat"] = atom_table_to_json(report.atoms_a);
    doc["atoms_tilde"] = atom_table_to_json(report.atoms_b);
    return doc;
}

} // namespace pidlat
