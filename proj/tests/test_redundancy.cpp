#include <doctest.h>

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "mimp/branch.hpp"
#include "mimp/derivation.hpp"
#include "mimp/emap.hpp"
#include "mimp/formula.hpp"
#include "mimp/prover.hpp"
#include "mimp/redundancy.hpp"

using namespace mimp;

namespace {

FormulaPtr F(const char* s) { return parse_formula(s); }

DerivPtr mapped_fig() {
    DerivPtr e1 = Deriv::elim(Deriv::hyp(F("A"), 2), Deriv::hyp(F("A -> B -> C -> q"), 1));
    DerivPtr e2 = Deriv::elim(Deriv::hyp(F("B")), e1);
    DerivPtr e3 = Deriv::elim(Deriv::hyp(F("C")), e2);
    DerivPtr i1 = Deriv::intro(2, F("A"), e3);
    DerivPtr e4 = Deriv::elim(i1, Deriv::hyp(F("(A -> q) -> D -> q"), 3));
    DerivPtr e5 = Deriv::elim(Deriv::hyp(F("D"), 4), e4);
    DerivPtr i2 = Deriv::intro(4, F("D"), e5);
    DerivPtr i3 = Deriv::intro(3, F("(A -> q) -> D -> q"), i2);
    return Deriv::intro(1, F("A -> B -> C -> q"), i3);
}

EMappedProof blowup_emap(int m, int p) {
    FamilySpec fs;
    fs.family = "blowup";
    fs.m = m;
    fs.p = p;
    auto fam = gen_redundant_family(fs);
    BuildEmapResult r = build_emap(fam.front().proof);
    REQUIRE(r.ok());
    return *r.mapped;
}

std::string signature(const Branch& b) {
    std::string s;
    for (const Deriv* n : b.elements) {
        s += print_formula(n->conclusion());
        s += '|';
    }
    return s;
}

} // namespace

TEST_SUITE("redundancy") {

TEST_CASE("ipow is exact and guarded") {
    CHECK(ipow(2, 10) == 1024);
    CHECK(ipow(21, 3) == 9261);
    CHECK(ipow(23, 4) == 279841);
    CHECK(ipow(5, 0) == 1);
    CHECK(ipow(1, 50) == 1);
    CHECK_THROWS_AS(ipow(2, -1), std::invalid_argument);
    CHECK_THROWS_AS(ipow(10, 19), std::overflow_error);
}

TEST_CASE("level histogram buckets every mapped occurrence once") {
    BuildEmapResult r = build_emap(mapped_fig());
    REQUIRE(r.ok());
    LevelHistogram h = level_histogram(*r.mapped);
    CHECK(h.mappedOccurrences == 15);
    CHECK(h.cells.size() == 15);  // the figure never repeats a (vertex, level) pair
    int total = 0;
    for (const auto& [key, occs] : h.cells) {
        CHECK(occs.size() == 1);
        total += static_cast<int>(occs.size());
    }
    CHECK(total == 15);
    // spot checks against the frozen assignment and node depths
    CHECK(h.cells.count({0, 0}) == 1);    // root intro
    CHECK(h.cells.count({8, 1}) == 1);
    CHECK(h.cells.count({16, 2}) == 1);
    CHECK(h.cells.count({15, 3}) == 1);
    CHECK(h.cells.count({13, 4}) == 1);   // the elim under the second assumption
    CHECK(h.cells.count({14, 4}) == 1);   // the D hypothesis beside it
    CHECK(h.cells.count({10, 5}) == 1);
    CHECK(h.cells.count({9, 5}) == 1);
    CHECK(h.cells.count({7, 6}) == 1);
    CHECK(h.cells.count({1, 9}) == 1);    // deepest hypothesis
    CHECK(h.cells.count({2, 9}) == 1);
    CHECK(h.cells.count({0, 1}) == 0);
}

TEST_CASE("cells split by rule role") {
    BuildEmapResult r = build_emap(mapped_fig());
    REQUIRE(r.ok());
    const ProofView& v = *r.mapped->view;
    std::vector<const Deriv*> cell = {
        v.resolve(OccAddress{}),                                  // intro (root)
        v.resolve(OccAddress{Step::Premise, Step::Premise, Step::Premise}),  // elim
        v.resolve(OccAddress{Step::Premise, Step::Premise, Step::Premise, Step::Minor}),  // hyp D
    };
    TUDPartition p = partition_tud(cell);
    REQUIRE(p.top.size() == 1);
    REQUIRE(p.uno.size() == 1);
    REQUIRE(p.duo.size() == 1);
    CHECK(print_formula(p.top[0]->conclusion()) == "D");
    CHECK(p.uno[0]->is_intro());
    CHECK(p.duo[0]->is_elim());
    CHECK_THROWS_AS(partition_tud({}), std::invalid_argument);
}

TEST_CASE("spread over levels on the first blowup member") {
    EMappedProof e = blowup_emap(3, 1);
    CHECK(e.tree.size() == 21);
    CHECK(e.proof->node_count() == 254);

    auto branches = enumerate_branches(*e.view);
    REQUIRE(branches.size() == 94);
    std::map<std::string, std::vector<int>> groups;
    for (std::size_t i = 0; i < branches.size(); ++i)
        groups[signature(branches[i])].push_back(static_cast<int>(i));
    REQUIRE(groups.size() == 4);
    std::size_t largest = 0;
    int repIdx = -1;
    for (const auto& [k, idxs] : groups)
        if (idxs.size() > largest) {
            largest = idxs.size();
            repIdx = idxs.front();
        }
    CHECK(largest == 32);
    CHECK(repIdx == 5);
    const Branch& rep = branches[repIdx];
    REQUIRE(rep.elements.size() == 2);
    CHECK(print_formula(rep.elements[0]->conclusion()) == "a");
    CHECK(print_formula(rep.elements[1]->conclusion()) == "a -> a");

    SUBCASE("p = 1 clears the pigeonhole") {
        auto s = spread_check(e, rep, 1);
        REQUIRE(s.has_value());
        CHECK(s->level == 22);
        CHECK(s->count == 10);
        CHECK(s->minimalOccs.size() == 10);
        CHECK(s->threshold == 1);
        CHECK(s->meetsThreshold);
        // occurrences come back in preorder and all sit on the reported level
        int prev = -1;
        for (const Deriv* n : s->minimalOccs) {
            CHECK(e.view->level(n) == 22);
            int idx = e.view->preorder_index(n);
            CHECK(idx > prev);
            prev = idx;
        }
    }
    SUBCASE("p = 2 asks for more instances than exist") {
        CHECK_FALSE(spread_check(e, rep, 2).has_value());
    }
    SUBCASE("height precondition") {
        CHECK_THROWS_AS(spread_check(e, rep, 1, 0), std::invalid_argument);
    }
}

TEST_CASE("a tiny proof never clears the spread precondition") {
    DerivPtr d = Deriv::intro(1, F("q"), Deriv::hyp(F("q"), 1));
    BuildEmapResult r = build_emap(d);
    REQUIRE(r.ok());
    auto branches = enumerate_branches(*r.mapped->view);
    REQUIRE(branches.size() == 1);
    CHECK_FALSE(spread_check(*r.mapped, branches[0], 1).has_value());
}

TEST_CASE("pumping a branch recounts the subtree at its end") {
    EMappedProof e = blowup_emap(3, 1);
    auto branches = enumerate_branches(*e.view);
    const Branch& rep = branches[5];
    auto s = spread_check(e, rep, 1);
    REQUIRE(s.has_value());
    PumpResult pr = pump_subderivation(e, rep, s->minimalOccs);
    CHECK(pr.level == 19);
    CHECK(pr.multiplicity == 1);
    CHECK(pr.subderivation->node_count() == 2);
    // the reported multiplicity is exactly the level-aligned recount
    DerivPtr endSub(e.proof, rep.end());
    CHECK(pr.multiplicity == count_instances_at_level(*e.view, endSub, pr.level));
    CHECK(instance_equal(pr.subderivation, canonical_subtree(endSub)));

    CHECK_THROWS_AS(pump_subderivation(e, rep, {}), std::invalid_argument);
    // occurrences on different levels are rejected
    std::vector<const Deriv*> mixed = {s->minimalOccs[0], rep.end()};
    REQUIRE(e.view->level(rep.end()) != 22);
    CHECK_THROWS_AS(pump_subderivation(e, rep, mixed), std::invalid_argument);
}

TEST_CASE("search on a small member reports unmet hypotheses but still counts") {
    EMappedProof e = blowup_emap(3, 1);
    RedundancyReport rr = find_redundant(e, 4, 1);
    CHECK_FALSE(rr.hypothesesMet);
    CHECK(rr.unmetReason.find("does not exceed") != std::string::npos);
    CHECK_FALSE(rr.found);
    CHECK(rr.m == 21);
    CHECK(rr.sizeThreshold == 194481);
    CHECK(rr.heightBound == 84);
    CHECK(rr.multiplicityThreshold == 21);
    CHECK(rr.multiplicity == 11);
    CHECK(rr.level == 22);
    CHECK(rr.cellVertex == 13);
    CHECK(rr.cellLevel == 22);
    CHECK(rr.caseTag == "Top");
    bool sawLevelNote = false;
    for (const auto& n : rr.notes)
        if (n.find("root sits at level 0") != std::string::npos) sawLevelNote = true;
    CHECK(sawLevelNote);

    // the exhaustive counter agrees with the best the search found
    BruteForceResult bf = brute_force_max_repeats(e.proof, true);
    CHECK(bf.multiplicity == 11);
    CHECK(bf.level == 22);
    CHECK(bf.sizeNodes == 1);

    RedundancyReport r52 = find_redundant(e, 5, 2);
    CHECK(r52.multiplicityThreshold == 1);
    CHECK_FALSE(r52.hypothesesMet);
    CHECK(r52.found);  // threshold 1 is cleared even though the size hypothesis fails
    CHECK(r52.multiplicity == 6);
    CHECK(r52.level == 22);
    CHECK(r52.caseTag == "Top");
}

TEST_CASE("search finds the pumped hypothesis on the fourth blowup member") {
    EMappedProof e = blowup_emap(4, 4);
    CHECK(e.proof->node_count() == 32767);
    RedundancyReport rr = find_redundant(e, 4, 1);
    CHECK(rr.hypothesesMet);
    CHECK(rr.found);
    CHECK(rr.multiplicityThreshold == 23);
    CHECK(rr.multiplicity == 507);
    CHECK(rr.level == 47);
    CHECK(rr.cellVertex == 9);
    CHECK(rr.caseTag == "Top");
    CHECK(rr.m == 23);
    CHECK(rr.sizeThreshold == 279841);
    // recount independently at the reported level
    REQUIRE(rr.subderivation);
    CHECK(count_instances_at_level(*e.view, rr.subderivation, rr.level) == 507);
    CHECK(rr.multiplicity >= rr.multiplicityThreshold);
}

TEST_CASE("search guards") {
    EMappedProof e = blowup_emap(3, 1);
    CHECK_THROWS_AS(find_redundant(e, 3, 1), std::invalid_argument);   // p < q + 3
    CHECK_THROWS_AS(find_redundant(e, 6, 0), std::invalid_argument);   // q < 1
    CHECK_THROWS_AS(find_redundant(e, 4, 1, 4, "Both"), std::invalid_argument);
    RedundancyReport top = find_redundant(e, 4, 1, 4, "Top");
    CHECK(top.caseTag == "Top");
}

TEST_CASE("exhaustive counter on a hand-checkable proof") {
    DerivPtr d = Deriv::elim(
        Deriv::elim(Deriv::hyp(F("a"), 0), Deriv::hyp(F("a -> b"), 0)),
        Deriv::elim(Deriv::hyp(F("a"), 0), Deriv::hyp(F("a -> b -> c"), 0)));
    REQUIRE(d->node_count() == 7);
    BruteForceResult total = brute_force_max_repeats(d, false);
    CHECK(total.multiplicity == 2);
    CHECK(total.sizeNodes == 1);
    CHECK(total.level == -1);
    CHECK(print_formula(total.subderivation->conclusion()) == "a");

    BruteForceResult per = brute_force_max_repeats(d, true);
    CHECK(per.multiplicity == 2);
    CHECK(per.sizeNodes == 1);
    CHECK(per.level == 2);
    CHECK(print_formula(per.subderivation->conclusion()) == "a");

    CHECK_THROWS_AS(brute_force_max_repeats(d, false, 5), std::invalid_argument);
}

TEST_CASE("growth fit recovers exact power laws") {
    GrowthFit f = growth_fit({{4, 16}, {5, 25}, {6, 36}, {7, 49}, {8, 64}});
    CHECK(f.exponent == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(f.constant == doctest::Approx(1.0).epsilon(1e-9));
    REQUIRE(f.windowSlopes.size() == 4);
    for (double s : f.windowSlopes) CHECK(s == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(f.verdict.find("cannot certify") != std::string::npos);

    GrowthFit cubic = growth_fit({{2, 24}, {3, 81}, {4, 192}, {5, 375}});
    CHECK(cubic.exponent == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(cubic.constant == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("growth fit flags exponential families by rising window slopes") {
    std::vector<std::pair<double, double>> pts;
    for (int m = 2; m <= 9; ++m) pts.push_back({m, std::pow(2.0, m)});
    GrowthFit f = growth_fit(pts);
    REQUIRE(f.windowSlopes.size() == 7);
    for (std::size_t i = 0; i + 1 < f.windowSlopes.size(); ++i)
        CHECK(f.windowSlopes[i] < f.windowSlopes[i + 1]);
}

TEST_CASE("growth fit input guards") {
    CHECK_THROWS_AS(growth_fit({{2, 4}, {3, 9}}), std::invalid_argument);
    CHECK_THROWS_AS(growth_fit({{2, 4}, {2, 5}, {2, 6}}), std::invalid_argument);
    CHECK_THROWS_AS(growth_fit({{0, 4}, {3, 9}, {4, 16}}), std::invalid_argument);
    CHECK_THROWS_AS(growth_fit({{2, -4}, {3, 9}, {4, 16}}), std::invalid_argument);
}

TEST_CASE("histogram coverage on corpus maps") {
    const auto& c = testutil::corpus();
    int tried = 0;
    for (std::size_t i = 0; i < c.expanded.size() && tried < 40; i += 7) {
        BuildEmapResult r = build_emap(c.expanded[i]);
        if (!r.ok()) continue;
        ++tried;
        LevelHistogram h = level_histogram(*r.mapped);
        CHECK(h.mappedOccurrences == static_cast<int>(r.mapped->map.size()));
        int total = 0;
        for (const auto& [key, occs] : h.cells) {
            REQUIRE(!occs.empty());
            TUDPartition p = partition_tud(occs);
            CHECK(p.top.size() + p.uno.size() + p.duo.size() == occs.size());
            total += static_cast<int>(occs.size());
        }
        CHECK(total == h.mappedOccurrences);
    }
    CHECK(tried > 10);
}

} // TEST_SUITE
