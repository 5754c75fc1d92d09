#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace pidlat {

// A set of variable names. Order and duplicates are ignored on resolution.
using VarSet = std::vector<std::string>;

// Finite joint distribution with exact rational masses. The support is kept
// sorted lexicographically by symbol index tuples; masses are positive and
// sum to exactly 1.
class JointDistribution {
  public:
    struct Row {
        std::vector<int> outcome; // symbol index per variable
        Rational p;
    };

    static constexpr size_t kMaxVariables = 64;

    JointDistribution(std::vector<std::string> variables,
                      std::vector<std::vector<std::string>> alphabets,
                      std::vector<Row> rows)
        : variables_(std::move(variables)), alphabets_(std::move(alphabets)), rows_(std::move(rows)) {
        validate();
    }

    // Builds from symbol-string outcomes. When `alphabets` is empty the
    // per-variable alphabets are derived from the observed symbols, sorted.
    static JointDistribution from_rows(std::vector<std::string> variables,
                                       std::vector<std::vector<std::string>> alphabets,
                                       const std::vector<std::pair<std::vector<std::string>, Rational>>& rows) {
        const size_t n = variables.size();
        if (alphabets.empty()) {
            alphabets.resize(n);
            for (size_t v = 0; v < n; ++v) {
                std::vector<std::string> seen;
                for (const auto& [outcome, p] : rows) {
                    if (outcome.size() == n) seen.push_back(outcome[v]);
                }
                std::sort(seen.begin(), seen.end());
                seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
                alphabets[v] = std::move(seen);
            }
        }
        std::vector<std::map<std::string, int>> index(n);
        for (size_t v = 0; v < n; ++v)
            for (size_t i = 0; i < alphabets[v].size(); ++i) index[v][alphabets[v][i]] = static_cast<int>(i);
        std::vector<Row> indexed;
        indexed.reserve(rows.size());
        for (const auto& [outcome, p] : rows) {
            if (outcome.size() != n)
                throw input_error("outcome arity mismatch: expected " + std::to_string(n) + " symbols");
            Row r;
            r.outcome.reserve(n);
            for (size_t v = 0; v < n; ++v) {
                auto it = index[v].find(outcome[v]);
                if (it == index[v].end())
                    throw input_error("symbol '" + outcome[v] + "' not in alphabet of variable '" + variables[v] + "'");
                r.outcome.push_back(it->second);
            }
            r.p = p;
            indexed.push_back(std::move(r));
        }
        return JointDistribution(std::move(variables), std::move(alphabets), std::move(indexed));
    }

    const std::vector<std::string>& variables() const { return variables_; }
    const std::vector<std::vector<std::string>>& alphabets() const { return alphabets_; }
    const std::vector<Row>& rows() const { return rows_; }
    size_t support_size() const { return rows_.size(); }

    size_t var_index(const std::string& name) const {
        for (size_t i = 0; i < variables_.size(); ++i)
            if (variables_[i] == name) return i;
        throw input_error("unknown variable '" + name + "'");
    }

    // Sorted, deduplicated variable indices for a VarSet.
    std::vector<int> resolve(const VarSet& vars) const {
        std::vector<int> idx;
        idx.reserve(vars.size());
        for (const auto& name : vars) idx.push_back(static_cast<int>(var_index(name)));
        std::sort(idx.begin(), idx.end());
        idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
        return idx;
    }

    static std::vector<int> project(const Row& row, const std::vector<int>& idx) {
        std::vector<int> out;
        out.reserve(idx.size());
        for (int v : idx) out.push_back(row.outcome[static_cast<size_t>(v)]);
        return out;
    }

    std::vector<std::string> outcome_symbols(const Row& row) const {
        std::vector<std::string> out;
        out.reserve(row.outcome.size());
        for (size_t v = 0; v < row.outcome.size(); ++v)
            out.push_back(alphabets_[v][static_cast<size_t>(row.outcome[v])]);
        return out;
    }

    // Support as (symbol tuple, mass) pairs in canonical order; convenient for
    // exact cross-checks that must not depend on alphabet index layout.
    std::vector<std::pair<std::vector<std::string>, Rational>> support_symbols() const {
        std::vector<std::pair<std::vector<std::string>, Rational>> out;
        out.reserve(rows_.size());
        for (const auto& r : rows_) out.emplace_back(outcome_symbols(r), r.p);
        std::sort(out.begin(), out.end());
        return out;
    }

    JointDistribution marginalize(const VarSet& vars) const {
        auto idx = resolve(vars);
        if (idx.empty()) throw input_error("marginalize requires a nonempty variable set");
        auto grouped = group_by(idx);
        std::vector<std::string> names;
        std::vector<std::vector<std::string>> alph;
        for (int v : idx) {
            names.push_back(variables_[static_cast<size_t>(v)]);
            alph.push_back(alphabets_[static_cast<size_t>(v)]);
        }
        std::vector<Row> rows;
        rows.reserve(grouped.size());
        for (auto& [key, mass] : grouped) rows.push_back(Row{key, mass});
        return JointDistribution(std::move(names), std::move(alph), std::move(rows));
    }

    // H(vars) in bits. Empty set has zero entropy by convention.
    double entropy(const VarSet& vars) const {
        auto idx = resolve(vars);
        if (idx.empty()) return 0.0;
        double h = 0.0;
        for (const auto& [key, mass] : group_by(idx)) h += entropy_term(mass);
        return h;
    }

    double entropy_all() const { return entropy(variables_); }

    // H(vars | given), computed slice by slice from exact conditional masses.
    // A slice whose vars-value is unique contributes exactly zero.
    double conditional_entropy(const VarSet& vars, const VarSet& given) const {
        auto vi = resolve(vars);
        auto gi = resolve(given);
        if (vi.empty()) return 0.0;
        if (gi.empty()) return entropy(vars);
        std::map<std::vector<int>, std::map<std::vector<int>, Rational>> slices;
        std::map<std::vector<int>, Rational> slice_mass;
        for (const auto& r : rows_) {
            auto g = project(r, gi);
            slices[g][project(r, vi)] += r.p;
            slice_mass[g] += r.p;
        }
        double h = 0.0;
        for (const auto& [g, byval] : slices) {
            const Rational& mg = slice_mass[g];
            double inner = 0.0;
            for (const auto& [v, mvg] : byval) inner += entropy_term(mvg / mg);
            h += to_double(mg) * inner;
        }
        return h;
    }

    // I(a;b) = H(a) + H(b) - H(a u b). Overlapping sets are permitted.
    double mutual_info(const VarSet& a, const VarSet& b) const {
        VarSet u = a;
        u.insert(u.end(), b.begin(), b.end());
        return entropy(a) + entropy(b) - entropy(u);
    }

    // Exact product test on disjoint sets: p(a,b) = p(a)p(b) for every pair
    // of marginal outcomes, including pairs missing from the joint support.
    bool is_independent(const VarSet& a, const VarSet& b) const {
        std::vector<VarSet> groups{a, b};
        return is_product(groups);
    }

    // Exact k-way independence test over pairwise disjoint groups.
    bool is_product(const std::vector<VarSet>& groups) const {
        if (groups.size() < 2) throw input_error("is_product requires at least two groups");
        std::vector<std::vector<int>> gidx;
        std::vector<int> all;
        for (const auto& g : groups) {
            auto idx = resolve(g);
            if (idx.empty()) throw input_error("independence test requires nonempty groups");
            all.insert(all.end(), idx.begin(), idx.end());
            gidx.push_back(std::move(idx));
        }
        std::sort(all.begin(), all.end());
        if (std::adjacent_find(all.begin(), all.end()) != all.end())
            throw input_error("independence test requires disjoint variable sets");

        std::vector<std::map<std::vector<int>, Rational>> marg(gidx.size());
        std::map<std::vector<int>, Rational> joint;
        for (const auto& r : rows_) {
            for (size_t k = 0; k < gidx.size(); ++k) marg[k][project(r, gidx[k])] += r.p;
            joint[project(r, all)] += r.p;
        }

        // Walk the full product of marginal supports.
        std::vector<std::map<std::vector<int>, Rational>::const_iterator> cursor;
        for (const auto& m : marg) cursor.push_back(m.begin());
        while (true) {
            Rational prod = 1;
            for (size_t k = 0; k < marg.size(); ++k) prod *= cursor[k]->second;
            std::vector<std::pair<int, int>> keyed; // (variable, symbol)
            for (size_t k = 0; k < gidx.size(); ++k)
                for (size_t j = 0; j < gidx[k].size(); ++j)
                    keyed.emplace_back(gidx[k][j], cursor[k]->first[j]);
            std::sort(keyed.begin(), keyed.end());
            std::vector<int> key;
            key.reserve(keyed.size());
            for (auto& [v, s] : keyed) key.push_back(s);
            auto it = joint.find(key);
            Rational actual = it == joint.end() ? Rational(0) : it->second;
            if (actual != prod) return false;

            size_t k = marg.size();
            while (k > 0) {
                --k;
                if (++cursor[k] != marg[k].end()) break;
                cursor[k] = marg[k].begin();
                if (k == 0) return true;
            }
        }
    }

    // Structural zero test for H(target | given): true iff every given-slice
    // carries a single target value. Exact; no floating point involved.
    bool is_deterministic(const VarSet& target, const VarSet& given) const {
        auto ti = resolve(target);
        auto gi = resolve(given);
        if (ti.empty()) return true;
        std::map<std::vector<int>, std::vector<int>> seen;
        for (const auto& r : rows_) {
            auto g = project(r, gi);
            auto t = project(r, ti);
            auto [it, inserted] = seen.emplace(std::move(g), t);
            if (!inserted && it->second != t) return false;
        }
        return true;
    }

  private:
    std::map<std::vector<int>, Rational> group_by(const std::vector<int>& idx) const {
        std::map<std::vector<int>, Rational> grouped;
        for (const auto& r : rows_) grouped[project(r, idx)] += r.p;
        return grouped;
    }

    void validate() {
        if (variables_.empty()) throw input_error("distribution needs at least one variable");
        if (variables_.size() > kMaxVariables) throw capability_error("too many variables");
        {
            auto sorted = variables_;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw input_error("duplicate variable names");
        }
        if (alphabets_.size() != variables_.size())
            throw input_error("alphabet count does not match variable count");
        for (size_t v = 0; v < alphabets_.size(); ++v) {
            if (alphabets_[v].empty())
                throw input_error("empty alphabet for variable '" + variables_[v] + "'");
            auto sorted = alphabets_[v];
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw input_error("duplicate symbols in alphabet of '" + variables_[v] + "'");
        }
        if (rows_.empty()) throw input_error("empty support");
        Rational total = 0;
        for (const auto& r : rows_) {
            if (r.outcome.size() != variables_.size()) throw input_error("outcome arity mismatch");
            for (size_t v = 0; v < r.outcome.size(); ++v)
                if (r.outcome[v] < 0 || static_cast<size_t>(r.outcome[v]) >= alphabets_[v].size())
                    throw input_error("outcome index out of alphabet range");
            if (r.p <= 0) throw input_error("nonpositive probability in support");
            total += r.p;
        }
        if (total != 1)
            throw input_error("probabilities sum to " + format_rational(total) + ", expected 1");
        std::sort(rows_.begin(), rows_.end(), [](const Row& a, const Row& b) { return a.outcome < b.outcome; });
        for (size_t i = 1; i < rows_.size(); ++i)
            if (rows_[i].outcome == rows_[i - 1].outcome) throw input_error("duplicate outcome in support");
    }

    std::vector<std::string> variables_;
    std::vector<std::vector<std::string>> alphabets_;
    std::vector<Row> rows_;
};

} // namespace pidlat
