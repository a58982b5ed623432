#include "doctest.h"
#include "phaseport/classifier.hpp"
#include "phaseport/compactify.hpp"
#include "phaseport/index_theory.hpp"
#include "phaseport/sampling.hpp"
#include "phaseport/singular.hpp"

using namespace phaseport;

TEST_CASE("winding index of linear fields") {
    PlanarSystem saddle;
    saddle.p = parse_poly("x", "x", "z");
    saddle.q = parse_poly("-z", "x", "z");
    CHECK(winding_index(saddle, 0, 0, 0.5) == -1);

    PlanarSystem node;
    node.p = parse_poly("x", "x", "z");
    node.q = parse_poly("z", "x", "z");
    CHECK(winding_index(node, 0, 0, 0.5) == 1);

    CHECK_THROWS_AS(winding_index(saddle, 1, 0, 1.0), SingularOnCircle);
}

TEST_CASE("family O1 has index two in the subcase 1.1 geometry") {
    KolmogorovParams k{1, 0, 1, -1, 1, 1};
    ChartSystem u1 = to_chart(build_system(k), ChartId::U1);
    CHECK(winding_index(u1.system, 0, 0, 0.05) == 2);
}

TEST_CASE("winding is stable under radius halving") {
    DrawGenerator gen(67);
    for (int i = 0; i < 200; ++i) {
        KolmogorovParams k = gen.next();
        ChartSystem u1 = to_chart(build_system(k), ChartId::U1);
        double r = 0.04;
        for (const auto& p : finite_points(k)) {
            double x = p.x.value();
            if (std::abs(x) > 1e-12) r = std::min(r, 0.25 / std::abs(x));
        }
        r = std::max(r, 1e-3);
        CHECK(winding_index(u1.system, 0, 0, r) == winding_index(u1.system, 0, 0, r / 2));
    }
}

TEST_CASE("sector index formula") {
    CHECK(sector_index({0, 4, 0}) == -1);
    CHECK(sector_index({2, 0, 2}) == 2);
    CHECK(sector_index({0, 0, 4}) == 1);
    CHECK_THROWS_AS(sector_index({1, 0, 0}), OddSectorDifference);
}

TEST_CASE("local types imply the expected winding at finite points") {
    DrawGenerator gen(71);
    for (int i = 0; i < 60; ++i) {
        KolmogorovParams k = gen.next();
        PlanarSystem sys = build_system(k);
        auto pts = classify_finite_generic(k);
        for (const auto& p : pts) {
            double r = 0.2;
            for (const auto& q : pts) {
                if (&q == &p) continue;
                double gap = std::hypot(p.x.value() - q.x.value(), p.z.value() - q.z.value());
                r = std::min(r, 0.4 * gap);
            }
            if (r < 1e-3) continue;  // colliding geometry, skip the tight ones
            int w = winding_index(sys, p.x.value(), p.z.value(), r);
            CHECK(w == local_type_index(p.type));
        }
    }
}

TEST_CASE("poincare-hopf bookkeeping") {
    // subcase 1.1: finite saddle-node + two saddles, O1 index 2, O2 index 1
    IndexLedger ledger = poincare_hopf_check(
        {{"P0=P1", 0}, {"P2", -1}, {"P4", -1}}, {{"O1", 2}, {"O2", 1}});
    CHECK(ledger.balanced);
    CHECK(ledger.total == 2);

    // classical linear saddle: one finite saddle, two infinite node pairs
    IndexLedger classic = poincare_hopf_check({{"origin", -1}}, {{"O1", 1}, {"O2", 1}});
    CHECK(classic.balanced);

    IndexLedger bad = poincare_hopf_check({{"origin", 1}}, {{"O1", 1}, {"O2", 1}});
    CHECK_FALSE(bad.balanced);
}

TEST_CASE("full numerical ledger balances for the documented examples") {
    CHECK(index_ledger({1, 0, 1, -1, 1, 1}).balanced);   // subcase 1.1
    CHECK(index_ledger({1, 1, 0, 1, 0, 1}).balanced);    // subcase 6.2
    CHECK(index_ledger({1, -1, 1, 1, 3, 2}).balanced);   // subcase 1.9
}
