#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "canonical.hpp"
#include "dist.hpp"
#include "gk.hpp"
#include "lattice.hpp"
#include "sid.hpp"

namespace pidlat {

// Two independent fair bits and their parity, each its own source; the
// target sees all three.
inline LatentSystemSpec xor_triple() {
    LatentSystemSpec spec;
    spec.latents = {{"x1", {}}, {"x2", {}}, {"x3", {0, 1}}};
    spec.source_names = {"S1", "S2", "S3"};
    spec.sources = {{0}, {1}, {2}};
    spec.target = {0, 1, 2};
    spec.validate();
    return spec;
}

// Nine latents in three groups of (bit, bit, parity); source i reads the
// i-th position of each group; the target reads x1, x5, x9. All nine
// latents are parities of six free bits.
inline LatentSystemSpec witness_hat() {
    LatentSystemSpec spec;
    spec.latents = {
        {"x1", {}}, {"x2", {}}, {"x3", {0, 1}},
        {"x4", {}}, {"x5", {}}, {"x6", {3, 4}},
        {"x7", {}}, {"x8", {}}, {"x9", {6, 7}},
    };
    spec.source_names = {"S1", "S2", "S3"};
    spec.sources = {{0, 3, 6}, {1, 4, 7}, {2, 5, 8}};
    spec.target = {0, 4, 8};
    spec.validate();
    return spec;
}

// Same observable shape from five free bits: x9 is the parity of x1 and x5,
// and x8 is chosen so that source 2 still looks like three independent bits.
inline LatentSystemSpec witness_tilde() {
    LatentSystemSpec spec;
    spec.latents = {
        {"x1", {}}, {"x2", {}}, {"x3", {0, 1}},
        {"x4", {}}, {"x5", {}}, {"x6", {3, 4}},
        {"x7", {}}, {"x8", {6, 0, 4}}, {"x9", {0, 4}},
    };
    spec.source_names = {"S1", "S2", "S3"};
    spec.sources = {{0, 3, 6}, {1, 4, 7}, {2, 5, 8}};
    spec.target = {0, 4, 8};
    spec.validate();
    return spec;
}

// Adds one fresh free bit as a new source of its own; the target is
// untouched, so every report about the original system should survive.
inline LatentSystemSpec adjoin_independent_source(LatentSystemSpec spec) {
    std::string name = "x" + std::to_string(spec.latents.size() + 1);
    spec.latents.push_back({name, {}});
    spec.source_names.push_back("S" + std::to_string(spec.sources.size() + 1));
    spec.sources.push_back({static_cast<int>(spec.latents.size()) - 1});
    spec.validate();
    return spec;
}

// The sum rule stress test: the three forced unit atoms of the parity system
// add up to more than the information the target actually carries.
struct ParadoxReport {
    AtomTable forced_atoms;
    double mi_total = 0.0;
    double downset_sum = 0.0;
    bool violation = false;
};

inline ParadoxReport xor_paradox_report() {
    LatentSystemSpec spec = xor_triple();
    CanonicalAtomsResult atoms = canonical_atoms(spec);
    JointDistribution joint = build_joint(spec);
    double mi = joint.mutual_info({"S1", "S2", "S3"}, {"T"});
    const Lattice& lattice = atoms.table.lattice();
    double sum = wesp_sum(atoms.table, lattice, (1u << lattice.n_sources) - 1u);
    return ParadoxReport{std::move(atoms.table), mi, sum, sum > mi + 1e-9};
}

// Two systems with identical atom tables whose targets carry different
// amounts of information: atoms alone cannot determine mutual information.
struct WitnessReport {
    AtomTable atoms_a;
    AtomTable atoms_b;
    double mi_a = 0.0;
    double mi_b = 0.0;
    bool atoms_equal = false;
    bool mi_differs = false;
    bool theorem_reproduced = false;
};

inline WitnessReport witness_report(const LatentSystemSpec& a, const LatentSystemSpec& b) {
    CanonicalAtomsResult ca = canonical_atoms(a);
    CanonicalAtomsResult cb = canonical_atoms(b);
    JointDistribution ja = build_joint(a);
    JointDistribution jb = build_joint(b);
    VarSet sa = a.source_names;
    VarSet sb = b.source_names;
    double mi_a = ja.mutual_info(sa, {"T"});
    double mi_b = jb.mutual_info(sb, {"T"});

    bool equal = ca.table.lattice().n_sources == cb.table.lattice().n_sources;
    if (equal)
        for (const auto& alpha : ca.table.lattice().antichains)
            if (std::abs(ca.table.at(alpha) - cb.table.at(alpha)) > 1e-12) {
                equal = false;
                break;
            }
    bool differs = std::abs(mi_a - mi_b) > 1e-9;
    return WitnessReport{std::move(ca.table), std::move(cb.table), mi_a, mi_b,
                         equal,  differs, equal && differs};
}

inline WitnessReport impossibility_witness() { return witness_report(witness_hat(), witness_tilde()); }

// Three-variable decomposition of the parity system's sources, with the
// axiom report alongside.
struct SidOnXorResult {
    SidAtoms atoms;
    SidAxiomReport report;
    double red = 0.0;
    double entropy_reconstructed = 0.0;
    double entropy_direct = 0.0;
};

inline SidOnXorResult sid_on_xor() {
    JointDistribution joint = build_joint(xor_triple());
    JointDistribution sources = joint.marginalize({"S1", "S2", "S3"});
    SidAtoms atoms = sid_decompose(sources);
    SidAxiomReport report = check_sid_axioms(sources, atoms);
    double total = 0.0;
    for (double v : atoms.psi) total += v;
    SidOnXorResult out;
    out.atoms = atoms;
    out.report = std::move(report);
    out.red = atoms.psi[0];
    out.entropy_reconstructed = total - atoms.psi[6]; // drop one mixed atom
    out.entropy_direct = sources.entropy_all();
    return out;
}

// The atom tables the parity system forces at one, two and three visible
// sources; the cross-scale identities hold exactly on them.
struct ForcedXorTables {
    AtomTable pi1;
    AtomTable pi12;
    AtomTable pi123;
};

inline ForcedXorTables xor_forced_tables() {
    AtomTable pi1(enumerate_antichains(1));
    pi1.set(Antichain::parse("{1}"), 1.0);
    AtomTable pi12(enumerate_antichains(2));
    pi12.set(Antichain::parse("{1}"), 1.0);
    pi12.set(Antichain::parse("{2}"), 1.0);
    AtomTable pi123(enumerate_antichains(3));
    pi123.set(Antichain::parse("{1}{23}"), 1.0);
    pi123.set(Antichain::parse("{2}{13}"), 1.0);
    pi123.set(Antichain::parse("{3}{12}"), 1.0);
    return ForcedXorTables{std::move(pi1), std::move(pi12), std::move(pi123)};
}

} // namespace pidlat
