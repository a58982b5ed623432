#include "doctest.h"
#include "phaseport/family.hpp"
#include "phaseport/sampling.hpp"

using namespace phaseport;

TEST_CASE("build_system expands the family") {
    // (1,1,0,1,0,1): p = x - x z^2, q = z + z^3
    PlanarSystem s = build_system({1, 1, 0, 1, 0, 1});
    CHECK(s.p == parse_poly("x - x*z^2", "x", "z"));
    CHECK(s.q == parse_poly("z + z^3", "x", "z"));

    // mu = 0 kills the whole bracket in p
    PlanarSystem s0 = build_system({3, 2, 1, 1, 1, 0});
    CHECK(s0.p == parse_poly("3*x", "x", "z"));

    // (1,-1,1,1,3,2): q = -z + x z + z^3 + 3 z^2
    PlanarSystem s2 = build_system({1, -1, 1, 1, 3, 2});
    CHECK(s2.q == parse_poly("-z + x*z + z^3 + 3*z^2", "x", "z"));
}

TEST_CASE("hypothesis report") {
    CHECK(check_hypotheses({1, 1, 0, 1, 0, 1}).satisfies_H2);

    HypothesisReport r1 = check_hypotheses({1, -1, 1, 1, 3, 1});
    CHECK_FALSE(r1.satisfies_H);
    CHECK(std::find(r1.violations.begin(), r1.violations.end(), "a0_plus_c0mu_zero") !=
          r1.violations.end());

    HypothesisReport r2 = check_hypotheses({0, 1, 0, 1, 1, 2});
    CHECK_FALSE(r2.satisfies_H1);
    CHECK(std::find(r2.violations.begin(), r2.violations.end(), "a0_and_c1mu_both_zero") !=
          r2.violations.end());

    HypothesisReport r3 = check_hypotheses({1, 2, 0, 1, 0, -1});
    CHECK(r3.satisfies_H1);
    CHECK_FALSE(r3.satisfies_H2);

    // implication chain H2 => H1 => H on random draws
    DrawGenerator gen(5);
    for (int i = 0; i < 200; ++i) {
        HypothesisReport r = check_hypotheses(gen.next());
        if (r.satisfies_H2) CHECK(r.satisfies_H1);
        if (r.satisfies_H1) CHECK(r.satisfies_H);
    }
}

TEST_CASE("normalize applies the documented symmetries") {
    auto [k1, ops1] = normalize({1, 1, -1, 1, 0, 1});
    CHECK(k1.c1 == 1);
    REQUIRE(ops1.size() == 1);
    CHECK(ops1[0].name() == "FlipX");

    auto [k2, ops2] = normalize({1, 1, 1, 1, 1, 1});
    CHECK(ops2.empty());
    CHECK(k2 == KolmogorovParams{1, 1, 1, 1, 1, 1});

    auto [k3, ops3] = normalize({-1, 2, 1, 1, 0, 1});
    CHECK(k3.a0 == 1);
    CHECK(k3.c0 == -2);
    CHECK(k3.c2 == -1);
    REQUIRE(ops3.size() == 1);
    CHECK(ops3[0].name() == "TimeReverse");

    CHECK_THROWS_AS(normalize({0, -1, 1, 1, 1, 2}), HypothesisViolation);
    CHECK_THROWS_AS(normalize({1, 1, 1, 0, 1, 1}), HypothesisViolation);

    // every op is an involution
    for (SymmetryKind kind : {SymmetryKind::FlipX, SymmetryKind::FlipZ, SymmetryKind::TimeReverse}) {
        SymmetryOp op{kind};
        KolmogorovParams p{2, -3, 1, 1, 2, Rational(-1, 2)};
        CHECK(op.apply(op.apply(p)) == p);
    }
}

TEST_CASE("darboux certificate") {
    DarbouxCertificate cert = darboux_certificate({1, 1, 0, 1, 0, 1});
    CHECK(cert.valid());
    CHECK(cert.s == -2);

    CHECK_THROWS_AS(darboux_certificate({1, -1, 1, 1, 3, 1}), InvariantDegenerate);

    // perturbed cofactor: residual = 1, certificate invalid
    KolmogorovParams k{1, 1, 0, 1, 0, 1};
    Poly2 perturbed = cofactor_x(k) + Poly2::constant(1);
    Poly2 residual = perturbed + cofactor_z(k) * k.mu + Poly2::constant(-(k.a0 + k.c0 * k.mu));
    CHECK(residual == Poly2::constant(1));

    DrawGenerator gen(17);
    for (int i = 0; i < 1000; ++i) CHECK(darboux_certificate(gen.next()).valid());
}

TEST_CASE("3d lotka-volterra reduction identity") {
    Lv3Params good;
    good.a = {1, 2, Rational(1, 2), -1};
    good.c = {1, -2, 3, Rational(1, 2)};
    good.lambda = 2;
    for (int i = 0; i < 4; ++i) good.b[i] = good.lambda * good.c[i];
    CHECK(verify_lv3_reduction(good));

    Lv3Params wrong = good;
    wrong.lambda = 3;
    for (int i = 0; i < 4; ++i) wrong.b[i] = wrong.lambda * wrong.c[i];
    CHECK_FALSE(verify_lv3_reduction(wrong));

    Lv3Params s1 = good;
    s1.c = {0, 0, 0, 0};
    for (int i = 0; i < 4; ++i) s1.b[i] = 0;
    CHECK(verify_lv3_reduction(s1));  // dz/dt = 0 branch

    Lv3Params malformed = good;
    malformed.b[1] += 1;
    CHECK_THROWS_AS(verify_lv3_reduction(malformed), MalformedReduction);
}
