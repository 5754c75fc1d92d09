#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dist.hpp"
#include "errors.hpp"
#include "gk.hpp"
#include "lattice.hpp"

namespace pidlat {

// Atom listing order for the three-variable half lattice; all tables and
// serialized output follow it.
inline const std::array<std::string, 10>& sid_atom_names() {
    static const std::array<std::string, 10> names = {
        "{1}{2}{3}", "{1}{2}", "{1}{3}", "{2}{3}", "{1}{23}",
        "{2}{13}",   "{3}{12}", "{1}",   "{2}",   "{3}",
    };
    return names;
}

inline const std::array<Antichain, 10>& sid_atom_order() {
    static const std::array<Antichain, 10> order = [] {
        const auto& names = sid_atom_names();
        return std::array<Antichain, 10>{
            Antichain::parse(names[0]), Antichain::parse(names[1]), Antichain::parse(names[2]),
            Antichain::parse(names[3]), Antichain::parse(names[4]), Antichain::parse(names[5]),
            Antichain::parse(names[6]), Antichain::parse(names[7]), Antichain::parse(names[8]),
            Antichain::parse(names[9]),
        };
    }();
    return order;
}

// Which atoms feed each entropy identity: rows 0-2 give H(Si), rows 3-5 give
// H(Si,Sj), rows 6-8 give H(S1,S2,S3) with one synergy-style atom left out.
inline const std::array<std::array<int, 10>, 9>& sid_constraint_matrix() {
    static const std::array<std::array<int, 10>, 9> m = {{
        {1, 1, 1, 0, 1, 0, 0, 1, 0, 0},
        {1, 1, 0, 1, 0, 1, 0, 0, 1, 0},
        {1, 0, 1, 1, 0, 0, 1, 0, 0, 1},
        {1, 1, 1, 1, 1, 1, 0, 1, 1, 0},
        {1, 1, 1, 1, 1, 0, 1, 1, 0, 1},
        {1, 1, 1, 1, 0, 1, 1, 0, 1, 1},
        {1, 1, 1, 1, 1, 1, 0, 1, 1, 1},
        {1, 1, 1, 1, 1, 0, 1, 1, 1, 1},
        {1, 1, 1, 1, 0, 1, 1, 1, 1, 1},
    }};
    return m;
}

enum class RedSource { gacs_korner, user };

inline const char* red_source_name(RedSource s) {
    return s == RedSource::gacs_korner ? "gacs-korner" : "user";
}

struct SidAtoms {
    std::array<double, 10> psi{}; // sid_atom_order() indexing
    RedSource red_source = RedSource::user;
    std::vector<std::string> warnings;

    double operator[](size_t i) const { return psi[i]; }
    double at(const Antichain& a) const {
        const auto& order = sid_atom_order();
        for (size_t i = 0; i < order.size(); ++i)
            if (order[i] == a) return psi[i];
        throw input_error("antichain " + a.render() + " is not a half-lattice atom");
    }
};

namespace detail {

struct SubsetEntropies {
    double h1, h2, h3, h12, h13, h23, h123;
};

inline SubsetEntropies subset_entropies(const JointDistribution& d) {
    const auto& v = d.variables();
    if (v.size() != 3)
        throw input_error("three-variable decomposition requires exactly three variables, got " +
                          std::to_string(v.size()));
    SubsetEntropies e;
    e.h1 = d.entropy({v[0]});
    e.h2 = d.entropy({v[1]});
    e.h3 = d.entropy({v[2]});
    e.h12 = d.entropy({v[0], v[1]});
    e.h13 = d.entropy({v[0], v[2]});
    e.h23 = d.entropy({v[1], v[2]});
    e.h123 = d.entropy({v[0], v[1], v[2]});
    return e;
}

inline double min_pairwise_mi(const SubsetEntropies& e) {
    double i12 = e.h1 + e.h2 - e.h12;
    double i13 = e.h1 + e.h3 - e.h13;
    double i23 = e.h2 + e.h3 - e.h23;
    return std::min(i12, std::min(i13, i23));
}

inline void warn_red_range(SidAtoms& atoms, double red, const SubsetEntropies& e) {
    double hi = min_pairwise_mi(e);
    if (red < -1e-9 || red > hi + 1e-9)
        atoms.warnings.push_back("redundancy " + std::to_string(red) +
                                 " outside the admissible interval [0, " + std::to_string(hi) + "]");
}

// Exact determinant by fraction-free elimination.
inline int64_t bareiss_determinant(std::array<std::array<int64_t, 10>, 10> m) {
    int64_t prev = 1;
    int sign = 1;
    for (int k = 0; k < 9; ++k) {
        if (m[k][k] == 0) {
            int pivot = -1;
            for (int r = k + 1; r < 10; ++r)
                if (m[r][k] != 0) {
                    pivot = r;
                    break;
                }
            if (pivot < 0) return 0;
            std::swap(m[k], m[pivot]);
            sign = -sign;
        }
        for (int i = k + 1; i < 10; ++i)
            for (int j = k + 1; j < 10; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[9][9];
}

inline std::array<double, 10> solve10(std::array<std::array<double, 10>, 10> a, std::array<double, 10> y) {
    for (int col = 0; col < 10; ++col) {
        int pivot = col;
        for (int r = col + 1; r < 10; ++r)
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if (std::abs(a[pivot][col]) < 1e-12) throw internal_error("singular constraint system");
        std::swap(a[col], a[pivot]);
        std::swap(y[col], y[pivot]);
        for (int r = 0; r < 10; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < 10; ++c) a[r][c] -= f * a[col][c];
            y[r] -= f * y[col];
        }
    }
    std::array<double, 10> x;
    for (int i = 0; i < 10; ++i) x[i] = y[i] / a[i][i];
    return x;
}

} // namespace detail

// The nine entropy identities plus a row pinning the redundancy atom.
inline std::array<std::array<int64_t, 10>, 10> sid_augmented_matrix() {
    std::array<std::array<int64_t, 10>, 10> m{};
    const auto& base = sid_constraint_matrix();
    for (int r = 0; r < 9; ++r)
        for (int c = 0; c < 10; ++c) m[r][c] = base[r][c];
    m[9][0] = 1;
    return m;
}

inline int64_t sid_augmented_determinant() { return detail::bareiss_determinant(sid_augmented_matrix()); }

// Direct atom formulas given the redundancy value.
inline SidAtoms sid_closed_form(const JointDistribution& dist, double red,
                                RedSource source = RedSource::user) {
    auto e = detail::subset_entropies(dist);
    SidAtoms atoms;
    atoms.red_source = source;
    atoms.psi[0] = red;
    atoms.psi[1] = e.h1 + e.h2 - e.h12 - red;
    atoms.psi[2] = e.h1 + e.h3 - e.h13 - red;
    atoms.psi[3] = e.h2 + e.h3 - e.h23 - red;
    double syn = -(e.h1 + e.h2 + e.h3) + (e.h12 + e.h13 + e.h23) - e.h123 + red;
    atoms.psi[4] = syn;
    atoms.psi[5] = syn;
    atoms.psi[6] = syn;
    atoms.psi[7] = e.h123 - e.h23;
    atoms.psi[8] = e.h123 - e.h13;
    atoms.psi[9] = e.h123 - e.h12;
    detail::warn_red_range(atoms, red, e);
    return atoms;
}

// Same answer through the linear system: nine entropy identities plus the
// pinned redundancy atom, solved by elimination.
inline SidAtoms sid_linear_solve(const JointDistribution& dist, double red,
                                 RedSource source = RedSource::user) {
    static const bool checked = [] {
        if (sid_augmented_determinant() == 0) throw internal_error("constraint system is singular");
        return true;
    }();
    (void)checked;
    auto e = detail::subset_entropies(dist);
    std::array<std::array<double, 10>, 10> a{};
    auto m = sid_augmented_matrix();
    for (int r = 0; r < 10; ++r)
        for (int c = 0; c < 10; ++c) a[r][c] = static_cast<double>(m[r][c]);
    std::array<double, 10> y = {e.h1, e.h2, e.h3, e.h12, e.h13, e.h23, e.h123, e.h123, e.h123, red};
    SidAtoms atoms;
    atoms.red_source = source;
    atoms.psi = detail::solve10(a, y);
    detail::warn_red_range(atoms, red, e);
    return atoms;
}

// Full decomposition with the redundancy taken from the three-way common
// information of the system itself.
inline SidAtoms sid_decompose(const JointDistribution& dist) {
    if (dist.variables().size() != 3)
        throw input_error("three-variable decomposition requires exactly three variables");
    return sid_closed_form(dist, red3(dist).bits, RedSource::gacs_korner);
}

struct SidCheck {
    std::string name;
    bool passed = false;
    double lhs = 0.0;
    double rhs = 0.0;
    double tolerance = 0.0;
};

struct SidAxiomReport {
    std::vector<SidCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

namespace detail {

// Support rows as variable-name-keyed symbol maps, so partitions can be
// compared across variable reorderings.
inline std::vector<std::map<std::string, std::string>> named_rows(const JointDistribution& d) {
    std::vector<std::map<std::string, std::string>> out;
    for (const auto& r : d.rows()) {
        std::map<std::string, std::string> m;
        auto symbols = d.outcome_symbols(r);
        for (size_t v = 0; v < d.variables().size(); ++v) m[d.variables()[v]] = symbols[v];
        out.push_back(std::move(m));
    }
    return out;
}

using PartitionSignature = std::vector<std::pair<std::vector<std::map<std::string, std::string>>, Rational>>;

inline PartitionSignature partition_signature(const JointDistribution& d, const PartitionJoin& part) {
    auto rows = named_rows(d);
    PartitionSignature sig;
    for (size_t b = 0; b < part.blocks.size(); ++b) {
        std::vector<std::map<std::string, std::string>> block;
        for (size_t r : part.blocks[b]) block.push_back(rows[r]);
        std::sort(block.begin(), block.end());
        sig.emplace_back(std::move(block), part.block_masses[b]);
    }
    std::sort(sig.begin(), sig.end());
    return sig;
}

inline JointDistribution permute_variables(const JointDistribution& d, const std::vector<size_t>& perm) {
    std::vector<std::string> variables;
    std::vector<std::vector<std::string>> alphabets;
    for (size_t i : perm) {
        variables.push_back(d.variables()[i]);
        alphabets.push_back(d.alphabets()[i]);
    }
    std::vector<JointDistribution::Row> rows;
    for (const auto& r : d.rows()) {
        JointDistribution::Row row;
        for (size_t i : perm) row.outcome.push_back(r.outcome[i]);
        row.p = r.p;
        rows.push_back(std::move(row));
    }
    return JointDistribution(std::move(variables), std::move(alphabets), std::move(rows));
}

} // namespace detail

// Verifies the axiom ledger for a three-variable system against a candidate
// atom table: the nine entropy identities, agreement of the three mixed
// atoms, the redundancy bounds, order invariance, and consistency of the
// redundancy atom with the pairwise mutual informations and with the
// operational three-way common information.
inline SidAxiomReport check_sid_axioms(const JointDistribution& dist, const SidAtoms& atoms,
                                       double tol = 1e-9) {
    auto e = detail::subset_entropies(dist);
    const auto& v = dist.variables();
    SidAxiomReport report;

    const std::array<double, 9> targets = {e.h1, e.h2, e.h3, e.h12, e.h13, e.h23, e.h123, e.h123, e.h123};
    const std::array<std::string, 9> labels = {
        "entropy_identity_H(" + v[0] + ")",
        "entropy_identity_H(" + v[1] + ")",
        "entropy_identity_H(" + v[2] + ")",
        "entropy_identity_H(" + v[0] + "," + v[1] + ")",
        "entropy_identity_H(" + v[0] + "," + v[2] + ")",
        "entropy_identity_H(" + v[1] + "," + v[2] + ")",
        "entropy_identity_total_minus_{3}{12}",
        "entropy_identity_total_minus_{2}{13}",
        "entropy_identity_total_minus_{1}{23}",
    };
    const auto& m = sid_constraint_matrix();
    for (int r = 0; r < 9; ++r) {
        double sum = 0.0;
        for (int c = 0; c < 10; ++c) sum += m[r][c] * atoms.psi[c];
        report.checks.push_back({labels[r], std::abs(sum - targets[r]) <= tol, sum, targets[r], tol});
    }

    report.checks.push_back({"mixed_atoms_{1}{23}={2}{13}",
                             std::abs(atoms.psi[4] - atoms.psi[5]) <= tol, atoms.psi[4], atoms.psi[5], tol});
    report.checks.push_back({"mixed_atoms_{1}{23}={3}{12}",
                             std::abs(atoms.psi[4] - atoms.psi[6]) <= tol, atoms.psi[4], atoms.psi[6], tol});

    double min_mi = detail::min_pairwise_mi(e);
    report.checks.push_back({"monotonicity_red_min_pairwise", atoms.psi[0] <= min_mi + tol,
                             atoms.psi[0], min_mi, tol});

    auto base = red3(dist);
    auto base_sig = detail::partition_signature(dist, base.partition);
    bool commute = true;
    double worst = base.bits;
    const std::array<std::array<size_t, 3>, 6> perms = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (const auto& p : perms) {
        auto permuted = detail::permute_variables(dist, {p[0], p[1], p[2]});
        auto r = red3(permuted);
        if (detail::partition_signature(permuted, r.partition) != base_sig) {
            commute = false;
            worst = r.bits;
        }
    }
    report.checks.push_back({"commutativity_red3", commute, base.bits, worst, 0.0});

    const std::array<std::pair<int, double>, 3> pair_mi = {{
        {1, e.h1 + e.h2 - e.h12},
        {2, e.h1 + e.h3 - e.h13},
        {3, e.h2 + e.h3 - e.h23},
    }};
    const std::array<std::string, 3> pair_label = {
        "self_redundancy_I(" + v[0] + ";" + v[1] + ")",
        "self_redundancy_I(" + v[0] + ";" + v[2] + ")",
        "self_redundancy_I(" + v[1] + ";" + v[2] + ")",
    };
    for (int k = 0; k < 3; ++k) {
        double lhs = atoms.psi[0] + atoms.psi[pair_mi[k].first];
        report.checks.push_back({pair_label[k], std::abs(lhs - pair_mi[k].second) <= tol, lhs,
                                 pair_mi[k].second, tol});
    }
    report.checks.push_back({"self_redundancy_red3", std::abs(atoms.psi[0] - base.bits) <= tol,
                             atoms.psi[0], base.bits, tol});
    return report;
}

// Two-source decomposition of information about an external target, fixed by
// the redundancy value: unique shares and synergy follow by inclusion and
// exclusion from I(S1;T), I(S2;T), I(S1,S2;T).
struct Pid2Atoms {
    double red, un1, un2, syn;
};

inline Pid2Atoms pid2_structural(double i1, double i2, double i12, double red) {
    return Pid2Atoms{red, i1 - red, i2 - red, i12 - i1 - i2 + red};
}

struct CrossScaleReport {
    std::vector<SidCheck> checks;
    bool all_passed() const {
        for (const auto& c : checks)
            if (!c.passed) return false;
        return true;
    }
};

// Consistency of atom tables across nested systems of one, two and three
// sources: coarse atoms must equal the sums of the finer atoms they split
// into when one more source becomes visible.
inline CrossScaleReport cross_scale_check(const AtomTable& pi1, const AtomTable& pi12,
                                          const AtomTable& pi123, double tol = 1e-9) {
    if (pi1.lattice().n_sources != 1 || pi1.lattice().half) throw input_error("pi1 must live on the one-source lattice");
    if (pi12.lattice().n_sources != 2 || pi12.lattice().half) throw input_error("pi12 must live on the two-source lattice");
    if (pi123.lattice().n_sources != 3 || pi123.lattice().half) throw input_error("pi123 must live on the three-source lattice");

    auto a = [](const char* s) { return Antichain::parse(s); };
    CrossScaleReport report;
    {
        double lhs = pi1.at(a("{1}"));
        double rhs = pi12.at(a("{1}{2}")) + pi12.at(a("{1}"));
        report.checks.push_back({"scale_1_to_12_{1}", std::abs(lhs - rhs) <= tol, lhs, rhs, tol});
    }
    {
        double lhs = pi12.at(a("{1}{2}"));
        double rhs = pi123.at(a("{1}{2}{3}")) + pi123.at(a("{1}{2}"));
        report.checks.push_back({"scale_12_to_123_{1}{2}", std::abs(lhs - rhs) <= tol, lhs, rhs, tol});
    }
    {
        double lhs = pi12.at(a("{1}"));
        double rhs = pi123.at(a("{1}{3}")) + pi123.at(a("{1}{23}")) + pi123.at(a("{1}"));
        report.checks.push_back({"scale_12_to_123_{1}", std::abs(lhs - rhs) <= tol, lhs, rhs, tol});
    }
    return report;
}

} // namespace pidlat
