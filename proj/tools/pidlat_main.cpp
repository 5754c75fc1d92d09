// pidlat: exact information decomposition for finite discrete distributions.
//
// Subcommands expose the library surface one computation at a time; every
// command can emit a machine-readable JSON envelope
//   {"command", "inputs", "results", "status"}
// with status ok / check-failed / input-error mapped to exit codes 0 / 1 / 2.

#include <CLI11.hpp>
#include <pidlat/pidlat.hpp>

#include <bit>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using pidlat::Json;

struct Output {
    std::string command;
    Json inputs = Json::object();
    Json results = Json::object();
    std::string status = "ok";
    std::vector<std::string> lines;
};

int emit(const Output& out, bool as_json) {
    if (as_json) {
        Json envelope;
        envelope["command"] = out.command;
        envelope["inputs"] = out.inputs;
        envelope["results"] = out.results;
        envelope["status"] = out.status;
        std::cout << envelope.dump(2) << "\n";
    } else {
        for (const auto& line : out.lines) std::cout << line << "\n";
        std::cout << "status: " << out.status << "\n";
    }
    if (out.status == "ok") return 0;
    if (out.status == "check-failed") return 1;
    return 2;
}

std::vector<std::string> split_commas(const std::string& joined) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(joined);
    while (std::getline(in, item, ',')) {
        if (item.empty()) throw pidlat::input_error("empty name in list '" + joined + "'");
        out.push_back(item);
    }
    if (out.empty()) throw pidlat::input_error("empty name list");
    return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

Output run_lattice(int sources, bool half) {
    Output out;
    out.command = "lattice";
    out.inputs = {{"sources", sources}, {"half", half}};
    auto lattice = pidlat::enumerate_antichains(sources, half);
    out.results = pidlat::lattice_to_json(lattice);
    out.lines.push_back("antichains: " + std::to_string(lattice.antichains.size()));
    for (const auto& a : lattice.antichains) out.lines.push_back(a.render());
    return out;
}

Output run_measures(const std::string& file) {
    Output out;
    out.command = "measures";
    out.inputs = {{"file", file}};
    auto dist = pidlat::load_distribution(file);
    const auto& vars = dist.variables();
    const size_t n = vars.size();
    if (n > 12) throw pidlat::capability_error("measures enumerates variable subsets; limited to 12 variables");

    Json entropies = Json::object();
    for (size_t size = 1; size <= n; ++size) {
        for (uint32_t mask = 1; mask < (1u << n); ++mask) {
            if (static_cast<size_t>(std::popcount(mask)) != size) continue;
            pidlat::VarSet subset;
            for (size_t v = 0; v < n; ++v)
                if (mask & (1u << v)) subset.push_back(vars[v]);
            double h = dist.entropy(subset);
            std::string key = join(subset, ",");
            entropies[key] = pidlat::round9(h);
            out.lines.push_back("H(" + key + ") = " + pidlat::format9(h));
        }
    }
    Json mis = Json::object();
    for (size_t i = 0; i < n; ++i)
        for (size_t j = i + 1; j < n; ++j) {
            double mi = dist.mutual_info({vars[i]}, {vars[j]});
            std::string key = vars[i] + ";" + vars[j];
            mis[key] = pidlat::round9(mi);
            out.lines.push_back("I(" + key + ") = " + pidlat::format9(mi));
        }
    out.results = {{"variables", vars}, {"entropies", std::move(entropies)},
                   {"mutual_informations", std::move(mis)}};
    return out;
}

Output run_sid(const std::string& file, std::optional<double> red,
               const std::optional<std::string>& vars) {
    Output out;
    out.command = "sid";
    out.inputs = {{"file", file}};
    auto dist = pidlat::load_distribution(file);
    if (vars) {
        out.inputs["vars"] = *vars;
        dist = dist.marginalize(split_commas(*vars));
    }
    if (red) out.inputs["red"] = *red;

    auto atoms = red ? pidlat::sid_closed_form(dist, *red) : pidlat::sid_decompose(dist);
    auto report = pidlat::check_sid_axioms(dist, atoms);
    out.results = {{"atoms", pidlat::sid_atoms_to_json(atoms)},
                   {"axiom_report", pidlat::sid_report_to_json(report)}};
    out.status = report.all_passed() ? "ok" : "check-failed";

    const auto& names = pidlat::sid_atom_names();
    for (size_t i = 0; i < names.size(); ++i)
        out.lines.push_back("Psi(" + names[i] + ") = " + pidlat::format9(atoms.psi[i]));
    out.lines.push_back("red_source: " + std::string(pidlat::red_source_name(atoms.red_source)));
    for (const auto& w : atoms.warnings) out.lines.push_back("warning: " + w);
    for (const auto& c : report.checks)
        out.lines.push_back(std::string(c.passed ? "PASS " : "FAIL ") + c.name +
                            " (lhs=" + pidlat::format9(c.lhs) + " rhs=" + pidlat::format9(c.rhs) + ")");
    return out;
}

Output run_gk(const std::string& file, const std::vector<std::string>& group_args) {
    Output out;
    out.command = "gk";
    out.inputs = {{"file", file}, {"groups", group_args}};
    if (group_args.size() < 2) throw pidlat::input_error("need at least two --group lists");
    auto dist = pidlat::load_distribution(file);
    std::vector<pidlat::VarSet> groups;
    for (const auto& g : group_args) groups.push_back(split_commas(g));
    auto result = pidlat::gk_common_info(dist, groups);
    out.results = pidlat::gk_result_to_json(dist, result);
    out.lines.push_back("bits = " + pidlat::format9(result.bits));
    for (size_t b = 0; b < result.partition.blocks.size(); ++b)
        out.lines.push_back("block " + std::to_string(b) + ": mass " +
                            pidlat::format_rational(result.partition.block_masses[b]) + " (" +
                            std::to_string(result.partition.blocks[b].size()) + " outcomes)");
    return out;
}

Output run_atoms(const std::string& file) {
    Output out;
    out.command = "atoms";
    out.inputs = {{"file", file}};
    auto spec = pidlat::load_latent_spec(file);
    auto report = pidlat::check_model(spec);
    out.results["model_report"] = pidlat::model_report_to_json(spec, report);
    if (!report.admitted) {
        out.status = "check-failed";
        out.lines.push_back("model not admitted");
        if (!report.target_closure_pass())
            out.lines.push_back("  target closure fails: " +
                                join(spec.latent_names(report.target_closure_violations), ", ") +
                                " determined but not listed in the target");
        for (const auto& s : report.source_independence)
            if (!s.pass)
                out.lines.push_back("  source " + spec.source_names[static_cast<size_t>(s.source)] +
                                    " has dependent latents");
        for (const auto& e : report.recoverability)
            if (e.kind == pidlat::RecoverabilityEntry::Kind::violating)
                out.lines.push_back("  latent " + e.latent_name +
                                    " is neither recoverable from nor independent of a source set");
        return out;
    }

    auto atoms = pidlat::canonical_atoms(spec);
    out.results["atoms"] = pidlat::atom_table_to_json(atoms.table);
    Json assignment = Json::object();
    for (const auto& [j, alpha] : atoms.assignment)
        assignment[spec.latents[static_cast<size_t>(j)].name] = alpha.render();
    out.results["assignment"] = std::move(assignment);
    if (!atoms.warnings.empty()) out.results["warnings"] = atoms.warnings;

    out.lines.push_back("model admitted");
    for (const auto& [j, alpha] : atoms.assignment)
        out.lines.push_back("latent " + spec.latents[static_cast<size_t>(j)].name + " -> " + alpha.render());
    for (const auto& alpha : atoms.table.lattice().antichains) {
        double v = atoms.table.at(alpha);
        if (v != 0.0) out.lines.push_back("atom " + alpha.render() + " = " + pidlat::format9(v));
    }
    for (const auto& w : atoms.warnings) out.lines.push_back("warning: " + w);
    return out;
}

Output run_reproduce(const std::string& which) {
    Output out;
    out.command = "reproduce";
    out.inputs = {{"which", which}};
    if (which == "xor-paradox") {
        auto report = pidlat::xor_paradox_report();
        out.results = pidlat::paradox_report_to_json(report);
        out.status = report.violation ? "ok" : "check-failed";
        out.lines.push_back("mutual information I(T;S1,S2,S3) = " + pidlat::format9(report.mi_total));
        out.lines.push_back("down-set sum at the lattice top = " + pidlat::format9(report.downset_sum));
        for (const auto& alpha : report.forced_atoms.lattice().antichains) {
            double v = report.forced_atoms.at(alpha);
            if (v != 0.0) out.lines.push_back("atom " + alpha.render() + " = " + pidlat::format9(v));
        }
        out.lines.push_back(std::string("sum rule violated: ") + (report.violation ? "true" : "false"));
    } else {
        auto report = pidlat::impossibility_witness();
        out.results = pidlat::witness_report_to_json(report);
        out.status = report.theorem_reproduced ? "ok" : "check-failed";
        out.lines.push_back("I_hat(T;S) = " + pidlat::format9(report.mi_a));
        out.lines.push_back("I_tilde(T;S) = " + pidlat::format9(report.mi_b));
        out.lines.push_back(std::string("atom tables identical: ") + (report.atoms_equal ? "true" : "false"));
        out.lines.push_back(std::string("same atoms, different information: ") +
                            (report.theorem_reproduced ? "true" : "false"));
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact information decomposition over finite discrete distributions"};
    app.require_subcommand(1);
    std::string format = "table";
    std::string current = "";
    Output result;

    auto add_format = [&format](CLI::App* sub) {
        sub->add_option("--format", format, "output format")
            ->check(CLI::IsMember({"table", "json"}))
            ->capture_default_str();
    };

    int sources = 0;
    bool half = false;
    auto* lattice_cmd = app.add_subcommand("lattice", "enumerate the antichain lattice");
    lattice_cmd->add_option("--sources", sources, "number of sources")->required();
    lattice_cmd->add_flag("--half", half, "only antichains containing a singleton");
    add_format(lattice_cmd);
    lattice_cmd->callback([&] {
        current = "lattice";
        result = run_lattice(sources, half);
    });

    std::string measures_file;
    auto* measures_cmd = app.add_subcommand("measures", "entropies of all variable subsets");
    measures_cmd->add_option("file", measures_file, "distribution JSON file")->required();
    add_format(measures_cmd);
    measures_cmd->callback([&] {
        current = "measures";
        result = run_measures(measures_file);
    });

    std::string sid_file;
    double red_value = 0.0;
    std::string vars_value;
    auto* sid_cmd = app.add_subcommand("sid", "three-variable system decomposition");
    sid_cmd->add_option("file", sid_file, "distribution JSON file")->required();
    auto* red_opt = sid_cmd->add_option("--red", red_value, "redundancy override in bits");
    auto* vars_opt = sid_cmd->add_option("--vars", vars_value, "comma-separated variables to keep");
    add_format(sid_cmd);
    sid_cmd->callback([&] {
        current = "sid";
        std::optional<double> red;
        if (red_opt->count()) red = red_value;
        std::optional<std::string> vars;
        if (vars_opt->count()) vars = vars_value;
        result = run_sid(sid_file, red, vars);
    });

    std::string gk_file;
    std::vector<std::string> gk_groups;
    auto* gk_cmd = app.add_subcommand("gk", "common information of variable groups");
    gk_cmd->add_option("file", gk_file, "distribution JSON file")->required();
    gk_cmd->add_option("--group", gk_groups, "comma-separated variable group (repeat)");
    add_format(gk_cmd);
    gk_cmd->callback([&] {
        current = "gk";
        result = run_gk(gk_file, gk_groups);
    });

    std::string atoms_file;
    auto* atoms_cmd = app.add_subcommand("atoms", "canonical atoms of a latent parity system");
    atoms_cmd->add_option("file", atoms_file, "latent system JSON file")->required();
    add_format(atoms_cmd);
    atoms_cmd->callback([&] {
        current = "atoms";
        result = run_atoms(atoms_file);
    });

    std::string which;
    auto* repro_cmd = app.add_subcommand("reproduce", "rebuild the headline counterexamples");
    repro_cmd->add_option("which", which, "xor-paradox or witness-pair")
        ->required()
        ->check(CLI::IsMember({"xor-paradox", "witness-pair"}));
    add_format(repro_cmd);
    repro_cmd->callback([&] {
        current = "reproduce";
        result = run_reproduce(which);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e); // --help and friends
    } catch (const std::exception& e) {
        // bad flags, malformed files, and capability limits all land here
        Output err;
        err.command = current;
        err.results = {{"error", e.what()}};
        err.status = "input-error";
        err.lines.push_back(std::string("error: ") + e.what());
        return emit(err, format == "json");
    }
    return emit(result, format == "json");
}
