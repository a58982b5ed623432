#include <map>

#include "doctest.h"
#include "phaseport/blowup.hpp"
#include "phaseport/classifier.hpp"
#include "phaseport/compactify.hpp"
#include "phaseport/index_theory.hpp"
#include "phaseport/sampling.hpp"
#include "phaseport/verify.hpp"

using namespace phaseport;

TEST_CASE("characteristic polynomial") {
    // family U1 system, c1 != 0: F = -c1 u v^2
    KolmogorovParams k{1, -1, 2, 1, 3, 2};
    ChartSystem u1 = to_chart(build_system(k), ChartId::U1);
    Poly2 F = characteristic_poly(u1.system);
    CHECK(F == Poly2::monomial(-k.c1, 1, 2));

    // c1 = 0: F = -c2 u^3 v - c3 u^2 v^2 - c0 u v^3 (the printed version drops
    // a power of v and is not even homogeneous); never zero since c2 != 0
    KolmogorovParams k0{1, -1, 0, 1, 3, 2};
    ChartSystem u10 = to_chart(build_system(k0), ChartId::U1);
    Poly2 F0 = characteristic_poly(u10.system);
    Poly2 u = Poly2::var(Var::First), v = Poly2::var(Var::Second);
    CHECK(F0 == u.pow(3) * v * (-k0.c2) + u * u * v * v * (-k0.c3) + u * v.pow(3) * (-k0.c0));
    CHECK_FALSE(F0.is_zero());

    // dicritical example: P_m = x W, Q_m = y W
    PlanarSystem dic;
    dic.p = parse_poly("x*x", "x", "y");
    dic.q = parse_poly("y*x", "x", "y");
    CHECK(characteristic_poly(dic).is_zero());

    PlanarSystem nonsing;
    nonsing.p = Poly2::constant(1);
    nonsing.q = Poly2::zero();
    CHECK_THROWS_AS(characteristic_poly(nonsing), NotSingularAtOrigin);
}

TEST_CASE("blow-up chain reproduces the printed systems") {
    SuiteResult r = suite_blowup_chain(47, 60);
    CHECK(r.passed());
}

TEST_CASE("desingularization finds the published divisor points") {
    // c1 != 0, mu != -2: Q0 at w=0 (hyperbolic) and Q1 at w=-c2/c1 (semi-hyperbolic)
    KolmogorovParams k{1, -1, 1, 1, 3, 2};
    BlowupNode tree = desingularize(to_chart(build_system(k), ChartId::U1).system, 6);
    REQUIRE_FALSE(tree.children.empty());
    const BlowupNode& first = *tree.children[0];
    CHECK(first.cancelled_power == 1);
    CHECK_FALSE(first.dicritical);
    REQUIRE_FALSE(first.children.empty());
    const BlowupNode& second = *first.children[0];
    CHECK(second.cancelled_power == 1);
    bool saw_q0 = false, saw_q1 = false;
    for (const auto& s : second.divisor_singularities) {
        if (s.z.is_zero()) {
            saw_q0 = true;
            CHECK(s.type == q0_published_type(k));
        } else if (s.z.is_rational() && s.z.a() == -k.c2 / k.c1) {
            saw_q1 = true;
            CHECK(s.type == q1_published_type(k));
        }
    }
    CHECK(saw_q0);
    CHECK(saw_q1);

    // mu = -2 dicritical branch cancels u^2 and leaves the single point R
    KolmogorovParams kd{1, -1, 1, 1, 3, -2};
    BlowupNode dtree = desingularize(to_chart(build_system(kd), ChartId::U1).system, 6);
    const BlowupNode& dsecond = *dtree.children[0]->children[0];
    CHECK(dsecond.dicritical);
    CHECK(dsecond.cancelled_power == 2);
    REQUIRE(dsecond.divisor_singularities.size() == 1);
    CHECK(dsecond.divisor_singularities[0].type == dicritical_r_published_type(kd));

    // c1 = 0 branch cancels u^2 in one step; S-points per the published table
    KolmogorovParams kz{1, -1, 0, 1, 3, 2};
    BlowupNode ztree = desingularize(to_chart(build_system(kz), ChartId::U1).system, 6);
    CHECK(ztree.children[0]->cancelled_power == 2);
    CHECK(ztree.children[0]->divisor_singularities.size() == 3);  // S0, S1, S2
}

TEST_CASE("divisor point types match the published condition sets") {
    SuiteResult r = suite_divisor_types(53, 500);
    CHECK(r.passed());
}

TEST_CASE("o1 label examples from the global table") {
    CHECK(o1_label({1, -1, 1, 1, 3, 2}).tag == 9);
    CHECK(o1_label({1, 1, 0, 1, 0, 1}).tag == 19);
    CHECK(o1_label({1, 0, 1, -1, 1, 1}).tag == 12);
}

TEST_CASE("o1 label is total on H2 draws") {
    DrawGenerator gen(59);
    for (int i = 0; i < 1000; ++i) {
        LLabel l = o1_label(gen.next());
        CHECK(l.tag >= 1);
        CHECK(l.tag <= 47);
    }
}

TEST_CASE("o2 classification follows the eigenvalues") {
    CHECK(o2_classify({1, 1, 1, 1, 1, -2}) == LocalType::Saddle);           // mu < -1
    CHECK(o2_classify({1, 1, 1, 1, 1, 1}) == LocalType::StableNode);        // c2 > 0, mu > -1
    CHECK(o2_classify({1, -1, 1, -1, 1, Rational(1, 2)}) == LocalType::UnstableNode);

    // condition form of the lemma on random draws
    DrawGenerator gen(61);
    for (int i = 0; i < 500; ++i) {
        KolmogorovParams k = gen.next();
        LocalType got = o2_classify(k);
        LocalType want = sgn(k.mu - Rational(-1)) < 0
                             ? LocalType::Saddle
                             : (sgn(k.c2) > 0 ? LocalType::StableNode : LocalType::UnstableNode);
        CHECK(got == want);
    }
}

TEST_CASE("winding index at O1 corroborates the designated label sectors") {
    // one witness per designated label, from the classifier's witness search
    const std::vector<int> designated = {3, 5, 8, 9, 11, 12, 17, 19, 34, 41};
    std::map<int, KolmogorovParams> witness;
    for (const auto& [row, k] : enumerate_representatives()) {
        int tag = o1_label(k).tag;
        if (!witness.count(tag)) witness.insert({tag, k});
    }
    for (int tag : designated) {
        REQUIRE_MESSAGE(witness.count(tag) == 1, "no witness for L" << tag);
        const KolmogorovParams& k = witness.at(tag);
        ChartSystem u1 = to_chart(build_system(k), ChartId::U1);
        int winding = winding_index(u1.system, 0, 0, 0.05);
        CHECK_MESSAGE(winding == label_index(LLabel{tag}),
                      "L" << tag << " winding " << winding << " at " << k.to_string());
    }
}

TEST_CASE("blow-up tree serializes to json") {
    KolmogorovParams k{1, -1, 1, 1, 3, 2};
    BlowupNode tree = desingularize(to_chart(build_system(k), ChartId::U1).system, 6);
    std::string js = tree.to_json();
    CHECK(js.find("\"cancelled_power\"") != std::string::npos);
    CHECK(js.find("\"dicritical\": false") != std::string::npos);
    CHECK(js.find("vertical_blowup") != std::string::npos);
}
