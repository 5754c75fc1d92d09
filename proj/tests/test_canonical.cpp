#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

using namespace pidlat;
using testutil::make_rng;
using testutil::random_latent_spec;

namespace {

LatentSystemSpec::Latent free_bit(std::string name) { return {std::move(name), {}}; }
LatentSystemSpec::Latent parity(std::string name, std::vector<int> of) {
    return {std::move(name), std::move(of)};
}

// One fair bit copied into two sources.
LatentSystemSpec copy_spec() {
    LatentSystemSpec spec;
    spec.latents = {free_bit("x1")};
    spec.source_names = {"S1", "S2"};
    spec.sources = {{0}, {0}};
    spec.target = {0};
    return spec;
}

// Two free bits and their parity; the parity is the whole target.
LatentSystemSpec parity_target_spec() {
    LatentSystemSpec spec;
    spec.latents = {free_bit("x1"), free_bit("x2"), parity("x3", {0, 1})};
    spec.source_names = {"S1", "S2"};
    spec.sources = {{0}, {1, 2}};
    spec.target = {2};
    return spec;
}

bool group_jointly_independent(const JointDistribution& master, const std::vector<std::string>& names) {
    if (names.size() < 2) return true;
    std::vector<VarSet> groups;
    for (const auto& n : names) groups.push_back({n});
    return master.is_product(groups);
}

} // namespace

TEST_CASE("master joint of a single free bit") {
    LatentSystemSpec spec = copy_spec();
    auto master = build_master_joint(spec);
    REQUIRE(master.rows().size() == 2);
    for (const auto& row : master.rows()) CHECK(row.p == Rational(1, 2));
    CHECK(master.entropy({"x1"}) == Catch::Approx(1.0));
}

TEST_CASE("derived bits follow their parities exactly") {
    LatentSystemSpec spec = parity_target_spec();
    auto master = build_master_joint(spec);
    REQUIRE(master.rows().size() == 4); // one row per free-bit assignment
    CHECK(master.is_deterministic({"x3"}, {"x1", "x2"}));
    CHECK(master.entropy({"x3"}) == Catch::Approx(1.0));
    CHECK(master.entropy({"x1", "x2", "x3"}) == Catch::Approx(2.0));
    for (const auto& row : master.rows())
        CHECK(row.outcome[2] == (row.outcome[0] ^ row.outcome[1]));
}

TEST_CASE("observable joint merges coinciding outcomes") {
    LatentSystemSpec spec;
    spec.latents = {free_bit("x1"), free_bit("x2")}; // x2 hidden from every view
    spec.source_names = {"S1"};
    spec.sources = {{0}};
    spec.target = {0};
    auto joint = build_joint(spec);
    CHECK(joint.variables() == VarSet{"S1", "T"});
    REQUIRE(joint.rows().size() == 2);
    for (const auto& row : joint.rows()) CHECK(row.p == Rational(1, 2));
}

TEST_CASE("observable symbols are fixed-width bit strings over the listed latents") {
    LatentSystemSpec spec = parity_target_spec();
    auto joint = build_joint(spec);
    CHECK(joint.variables() == VarSet{"S1", "S2", "T"});
    CHECK(joint.alphabets()[1] == std::vector<std::string>{"00", "01", "10", "11"});
    CHECK(joint.alphabets()[2] == std::vector<std::string>{"0", "1"});
    REQUIRE(joint.rows().size() == 4);
    for (const auto& row : joint.rows()) {
        auto symbols = joint.outcome_symbols(row);
        REQUIRE(symbols[1].size() == 2);
        CHECK(symbols[2][0] == symbols[1][1]); // T repeats the parity bit listed in S2
    }
}

TEST_CASE("spec validation rejects malformed systems") {
    auto base = parity_target_spec();

    auto forward = base;
    forward.latents[0].xor_of = {2};
    CHECK_THROWS_AS(forward.validate(), input_error);

    auto dup = base;
    dup.latents[1].name = "x1";
    CHECK_THROWS_AS(dup.validate(), input_error);

    auto stray_target = base;
    stray_target.sources = {{0}, {1}};
    CHECK_THROWS_AS(stray_target.validate(), input_error); // target latent in no source

    auto dup_in_source = base;
    dup_in_source.sources[1] = {1, 1};
    CHECK_THROWS_AS(dup_in_source.validate(), input_error);

    auto reserved = base;
    reserved.source_names[0] = "T";
    CHECK_THROWS_AS(reserved.validate(), input_error);

    auto empty_source = base;
    empty_source.sources[0] = {};
    CHECK_THROWS_AS(empty_source.validate(), input_error);

    LatentSystemSpec wide;
    for (int j = 0; j < 21; ++j) wide.latents.push_back(free_bit("x" + std::to_string(j + 1)));
    wide.source_names = {"S1"};
    wide.sources = {{0}};
    wide.target = {0};
    CHECK_THROWS_AS(wide.validate(), capability_error);
}

TEST_CASE("simple systems pass the admission checks") {
    for (const auto& spec : {copy_spec(), parity_target_spec()}) {
        auto report = check_model(spec);
        CHECK(report.admitted);
        CHECK(report.target_closure_pass());
        CHECK(report.source_independence_pass());
        CHECK(report.recoverability_pass());
    }
}

TEST_CASE("a latent determined by the target must be listed in it") {
    LatentSystemSpec spec;
    spec.latents = {free_bit("x1"), free_bit("x2"), parity("x3", {0, 1})};
    spec.source_names = {"S1", "S2"};
    spec.sources = {{0}, {1}};
    spec.target = {0, 1}; // together they pin x3
    auto report = check_model(spec);
    CHECK_FALSE(report.admitted);
    CHECK(report.target_closure_violations == std::vector<int>{2});
    CHECK(report.source_independence_pass());

    try {
        canonical_atoms(spec);
        FAIL("expected rejection");
    } catch (const model_rejected& e) {
        CHECK(e.report.target_closure_violations == std::vector<int>{2});
    }
}

TEST_CASE("latents inside one source must be mutually independent") {
    LatentSystemSpec spec;
    spec.latents = {free_bit("x1"), free_bit("x2"), parity("x3", {0, 1})};
    spec.source_names = {"S1"};
    spec.sources = {{0, 1, 2}};
    spec.target = {0};
    auto report = check_model(spec);
    CHECK_FALSE(report.admitted);
    REQUIRE(report.source_independence.size() == 1);
    CHECK_FALSE(report.source_independence[0].pass);
    // every pair is independent; only the full triple is entangled
    CHECK(report.source_independence[0].dependent_subsets ==
          std::vector<std::vector<int>>{{0, 1, 2}});
}

TEST_CASE("recoverability is a dichotomy on parity systems") {
    auto rng = make_rng(0xd1c0);
    for (int trial = 0; trial < 150; ++trial) {
        auto spec = random_latent_spec(rng);
        auto report = check_model(spec);
        for (const auto& entry : report.recoverability)
            CHECK(entry.kind != RecoverabilityEntry::Kind::violating);
    }
}

TEST_CASE("recovering sets are upward closed and generated by the principal antichain") {
    auto rng = make_rng(0xab1e);
    int admitted_seen = 0;
    for (int trial = 0; trial < 150; ++trial) {
        auto spec = random_latent_spec(rng);
        if (!check_model(spec).admitted) continue;
        ++admitted_seen;
        auto master = build_master_joint(spec);
        const SourceMask full = (1u << spec.sources.size()) - 1u;
        for (int j : spec.target) {
            if (master.is_deterministic({spec.latents[static_cast<size_t>(j)].name}, {})) continue;
            auto rec = recovering_sets(spec, j);
            std::set<SourceMask> rec_set(rec.begin(), rec.end());
            for (SourceMask b : rec)
                for (SourceMask up = 1; up <= full; ++up)
                    if (mask_subset(b, up)) CHECK(rec_set.count(up) == 1);
            auto alpha = principal_antichain(spec, j);
            for (SourceMask b = 1; b <= full; ++b) {
                bool dominated = false;
                for (SourceMask a : alpha.elements())
                    if (mask_subset(a, b)) dominated = true;
                CHECK(dominated == (rec_set.count(b) == 1));
            }
        }
    }
    CHECK(admitted_seen > 10);
}

TEST_CASE("principal antichains of the copy systems") {
    CHECK(principal_antichain(copy_spec(), 0).render() == "{1}{2}");
    CHECK(principal_antichain(parity_target_spec(), 2).render() == "{2}"); // x3 sits inside S2

    LatentSystemSpec lone;
    lone.latents = {free_bit("x1"), free_bit("x2")};
    lone.source_names = {"S1", "S2"};
    lone.sources = {{0}, {1}};
    lone.target = {0};
    CHECK(principal_antichain(lone, 0).render() == "{1}");
}

TEST_CASE("recovering sets demand a non-constant target latent") {
    LatentSystemSpec spec;
    spec.latents = {free_bit("x1"), parity("x2", {0, 0})}; // x2 = x1 xor x1 = 0
    spec.source_names = {"S1"};
    spec.sources = {{0, 1}};
    spec.target = {1};
    CHECK_THROWS_AS(recovering_sets(spec, 1), input_error);
    CHECK_THROWS_AS(recovering_sets(parity_target_spec(), 0), input_error); // not a target latent
}

TEST_CASE("canonical atoms of small systems") {
    auto copy = canonical_atoms(copy_spec());
    CHECK(copy.table.at(Antichain::parse("{1}{2}")) == Catch::Approx(1.0));
    CHECK(copy.table.at(Antichain::parse("{12}")) == 0.0);
    CHECK(copy.assignment.at(0).render() == "{1}{2}");

    // x3 = x1 xor x2 rides along inside S1, so S1 recovers every target
    // latent and S2 reaches only the bit it holds itself.
    LatentSystemSpec braid;
    braid.latents = {free_bit("x1"), free_bit("x2"), parity("x3", {0, 1})};
    braid.source_names = {"S1", "S2"};
    braid.sources = {{0, 2}, {1}};
    braid.target = {0, 1, 2};
    auto atoms = canonical_atoms(braid);
    CHECK(atoms.assignment.at(0).render() == "{1}");
    CHECK(atoms.assignment.at(1).render() == "{1}{2}");
    CHECK(atoms.assignment.at(2).render() == "{1}");
    CHECK(atoms.table.at(Antichain::parse("{1}")) == Catch::Approx(2.0)); // x1 and x3 jointly
    CHECK(atoms.table.at(Antichain::parse("{1}{2}")) == Catch::Approx(1.0));
    CHECK(atoms.table.at(Antichain::parse("{2}")) == 0.0);
    CHECK(atoms.warnings.empty());
}

TEST_CASE("latents sharing an antichain contribute one joint-entropy atom") {
    LatentSystemSpec spec;
    spec.latents = {free_bit("x1"), free_bit("x2")};
    spec.source_names = {"S1", "S2"};
    spec.sources = {{0, 1}, {0, 1}};
    spec.target = {0, 1};
    auto atoms = canonical_atoms(spec);
    CHECK(atoms.assignment.at(0).render() == "{1}{2}");
    CHECK(atoms.assignment.at(1).render() == "{1}{2}");
    CHECK(atoms.table.at(Antichain::parse("{1}{2}")) == Catch::Approx(2.0));
}

TEST_CASE("constant target latents only warn") {
    LatentSystemSpec spec;
    spec.latents = {free_bit("x1"), parity("x2", {0, 0})};
    spec.source_names = {"S1"};
    spec.sources = {{0, 1}};
    spec.target = {1};
    auto atoms = canonical_atoms(spec);
    REQUIRE(atoms.warnings.size() == 1);
    CHECK(atoms.assignment.empty());
    CHECK(atoms.table.at(Antichain::parse("{1}")) == 0.0);
}

TEST_CASE("atom totals against the latent entropies") {
    auto rng = make_rng(0x707a1);
    int admitted_seen = 0, equality_seen = 0;
    for (int trial = 0; trial < 150; ++trial) {
        auto spec = random_latent_spec(rng);
        CanonicalAtomsResult atoms{AtomTable(enumerate_antichains(1)), {}, {}};
        try {
            atoms = canonical_atoms(spec);
        } catch (const model_rejected&) {
            continue;
        }
        ++admitted_seen;
        auto master = build_master_joint(spec);

        double atom_sum = 0.0;
        for (const auto& alpha : atoms.table.lattice().antichains) atom_sum += atoms.table.at(alpha);
        double latent_sum = 0.0;
        for (int j : spec.target) latent_sum += master.entropy({spec.latents[static_cast<size_t>(j)].name});
        CHECK(atom_sum <= latent_sum + 1e-9);

        std::map<Antichain, std::vector<std::string>> groups;
        for (const auto& [j, alpha] : atoms.assignment)
            groups[alpha].push_back(spec.latents[static_cast<size_t>(j)].name);
        bool split_cleanly = true;
        for (const auto& [alpha, names] : groups)
            if (!group_jointly_independent(master, names)) split_cleanly = false;
        if (split_cleanly) {
            ++equality_seen;
            CHECK(atom_sum == Catch::Approx(latent_sum).margin(1e-9));
        }
    }
    CHECK(admitted_seen > 10);
    CHECK(equality_seen > 5);
}
