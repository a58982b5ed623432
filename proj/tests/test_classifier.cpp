#include <map>
#include <set>

#include "doctest.h"
#include "phaseport/classifier.hpp"
#include "phaseport/sampling.hpp"

using namespace phaseport;

TEST_CASE("classification of the documented witnesses") {
    PortraitReport r1 = classify({1, -1, 1, 1, 3, 2});
    CHECK(r1.case_label.subcase == "1.9");
    CHECK(r1.o1.tag == 9);
    CHECK(r1.o2 == LocalType::StableNode);
    CHECK(r1.g_label == "G19");
    CHECK(r1.caption == std::pair<int, int>{7, 22});

    PortraitReport r2 = classify({1, 1, 0, 1, 0, 1});
    CHECK(r2.case_label.subcase == "6.2");
    CHECK(r2.case_label.mu_branch == "c1=0,mu>-1");
    CHECK(r2.o1.tag == 19);
    CHECK(r2.g_label == "G95");

    PortraitReport r3 = classify({1, 0, 1, -1, 1, 1});
    CHECK(r3.case_label.subcase == "1.1");
    CHECK(r3.o1.tag == 12);
    CHECK(r3.o2 == LocalType::UnstableNode);
    CHECK(r3.g_label == "G1");
}

TEST_CASE("degenerate and invalid inputs are rejected with named reasons") {
    CHECK_THROWS_AS(classify({1, 1, 0, 1, 0, -1}), DegenerateFamily);
    CHECK_THROWS_AS(classify({1, 1, 0, 0, 1, 1}), DegenerateFamily);
    CHECK_THROWS_AS(classify({0, -1, 1, 1, 1, 2}), HypothesisViolation);
    CHECK_THROWS_AS(classify({0, 1, 0, 1, 1, 2}), HypothesisViolation);  // a0 and c1 mu both zero
}

TEST_CASE("classification is invariant under normalization symmetries") {
    // c1 < 0 input is mirrored back by FlipX
    PortraitReport r = classify({1, -1, -1, 1, 3, 2});
    CHECK(r.g_label == "G19");
    REQUIRE(r.ops.size() == 1);
    CHECK(r.ops[0].name() == "FlipX");

    // symmetry coherence on c1 = 0 draws
    DrawGenerator gen(79);
    int done = 0;
    while (done < 50) {
        KolmogorovParams k = gen.next_in_case(2 + 2 * (done % 3));
        if (sgn(k.c1) != 0) continue;
        SymmetryOp flip{SymmetryKind::FlipX};
        CHECK(classify(flip.apply(k)).g_label == classify(k).g_label);
        ++done;
    }
}

TEST_CASE("full report cross-checks and ledger") {
    PortraitReport rep = full_report({1, -1, 1, 1, 3, 2}, true);
    CHECK(rep.generic_checked);
    CHECK(rep.ledger_done);
    CHECK(rep.ledger.balanced);
    REQUIRE(rep.s_count.has_value());
    CHECK(*rep.s_count == 22);
    CHECK(*rep.r_count == 7);

    // invariant straight line of the 4.2 sub-row appears among the separatrices
    PortraitReport r42 = full_report({1, 1, 0, 1, 2, -2}, true);  // c3^2 = 4 c0 c2, mu < -1
    CHECK(r42.g_label == "G91");
    bool has_invariant_line = false;
    double zline = to_double(-r42.params.c3 / (2 * r42.params.c2));
    for (const auto& item : r42.trace->separatrices) {
        if (item.kind != SeparatrixItem::Kind::BoundaryOrbit) continue;
        bool on_line = item.polyline.size() > 10;
        for (size_t i = 0; i < item.polyline.size() && on_line; i += 5) {
            const DiscPoint& p = item.polyline[i];
            if (p.norm() > 0.999) continue;
            double z = p.y / std::sqrt(std::max(1e-12, 1 - p.x * p.x - p.y * p.y));
            if (std::abs(z - zline) > 1e-3) on_line = false;
        }
        if (on_line) has_invariant_line = true;
    }
    CHECK(has_invariant_line);
}

TEST_CASE("report json carries the documented fields") {
    PortraitReport rep = classify({1, -1, 1, 1, 3, 2});
    std::string js = report_to_json(rep, false);
    CHECK(js.find("\"schema_version\":1") != std::string::npos);
    CHECK(js.find("\"g_label\":\"G19\"") != std::string::npos);
    CHECK(js.find("\"o1_label\":\"L9\"") != std::string::npos);
    CHECK(js.find("\"subcase\":\"1.9\"") != std::string::npos);
}

TEST_CASE("witness enumeration covers every sub-row") {
    auto reps = enumerate_representatives();
    CHECK(reps.size() == table8_rows().size());
    CHECK(reps.size() >= 90);
    std::set<int> seen;
    for (const auto& [row, k] : reps) {
        CHECK(check_hypotheses(k).satisfies_H2);
        PortraitReport rep = classify(k);
        CHECK(rep.case_label.subcase == row->subcase);
        CHECK(rep.g_label == row->g);
        seen.insert(row->row_id);
    }
    CHECK(seen.size() == table8_rows().size());
}

TEST_CASE("errata annotations are exactly the printed inconsistencies") {
    const auto& notes = errata();
    CHECK(notes.size() == 6);
    int o2_notes = 0, g_notes = 0;
    for (const auto& e : notes) {
        if (e.field == "O2") ++o2_notes;
        if (e.field == "G") ++g_notes;
    }
    CHECK(o2_notes == 4);
    CHECK(g_notes == 2);
    CHECK(errata_json().find("G73") != std::string::npos);
}

TEST_CASE("caption table knows every global label") {
    for (int g = 1; g <= 102; ++g) {
        auto [r, s] = g_caption("G" + std::to_string(g));
        CHECK(r >= 2);
        CHECK(s > r);
    }
    CHECK(g_caption("G6") == std::pair<int, int>{4, 17});
    CHECK(g_caption("G73") == std::pair<int, int>{6, 17});
    CHECK_THROWS_AS(g_caption("G103"), std::out_of_range);
}

TEST_CASE("distinct labels differ in caption counts or local type data") {
    auto reps = enumerate_representatives();
    struct Key {
        std::pair<int, int> caption;
        std::multiset<std::string> finite;
        std::string infinite;
    };
    std::map<std::string, Key> by_label;
    for (const auto& [row, k] : reps) {
        PortraitReport rep = classify(k);
        Key key;
        key.caption = rep.caption;
        for (const auto& [labels, type] : rep.finite_types)
            key.finite.insert(local_type_name(type));
        key.infinite = rep.o1.name() + "/" + local_type_name(rep.o2);
        auto it = by_label.find(rep.g_label);
        if (it == by_label.end()) {
            by_label.emplace(rep.g_label, key);
            continue;
        }
        // same label must agree at least on the caption
        CHECK(it->second.caption == key.caption);
    }
    // Different labels colliding on all three invariants are reported, not
    // silently accepted: the known pairs need adjacency data (which point
    // sits on which axis) to separate, which (S,R)+type multisets cannot see.
    std::set<std::string> collisions;
    for (auto a = by_label.begin(); a != by_label.end(); ++a)
        for (auto b = std::next(a); b != by_label.end(); ++b)
            if (a->second.caption == b->second.caption && a->second.finite == b->second.finite &&
                a->second.infinite == b->second.infinite) {
                collisions.insert(a->first + "/" + b->first);
                MESSAGE("indistinguishable pair " << a->first << " vs " << b->first);
            }
    const std::set<std::string> known = {"G1/G62",  "G10/G2",  "G21/G35", "G22/G36",
                                         "G23/G37", "G25/G39", "G26/G40", "G3/G64",
                                         "G4/G65",  "G43/G48", "G5/G69",  "G57/G84",
                                         "G72/G8"};
    CHECK(collisions == known);
}
