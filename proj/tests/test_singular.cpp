#include "doctest.h"
#include "phaseport/sampling.hpp"
#include "phaseport/singular.hpp"
#include "phaseport/verify.hpp"

using namespace phaseport;

namespace {

const SingularPoint* find_point(const std::vector<SingularPoint>& pts, const std::string& label) {
    for (const auto& p : pts)
        if (p.has_label(label)) return &p;
    return nullptr;
}

}  // namespace

TEST_CASE("finite point locations and collisions") {
    // c3^2 - 4 c0 c2 < 0: only the origin
    auto only_origin = finite_points({1, 1, 0, 1, 0, 1});
    REQUIRE(only_origin.size() == 1);
    CHECK(only_origin[0].has_label("P0"));

    // (1,-1,1,1,3,2): P0, P1, P2, P4 with P4 = (1/2, 0)
    auto four = finite_points({1, -1, 1, 1, 3, 2});
    REQUIRE(four.size() == 4);
    const SingularPoint* p4 = find_point(four, "P4");
    REQUIRE(p4 != nullptr);
    CHECK(p4->x.is_rational());
    CHECK(p4->x.a() == Rational(1, 2));
    const SingularPoint* p1 = find_point(four, "P1");
    CHECK(p1->z.value() == doctest::Approx((std::sqrt(13.0) - 3) / 2));

    // a0 = 0 merges P4 into the origin
    auto merged = finite_points({0, 1, 1, -1, 3, 2});
    const SingularPoint* p0 = find_point(merged, "P0");
    REQUIRE(p0 != nullptr);
    CHECK(p0->has_label("P4"));

    // c0 = 0 merges P1 into the origin (the closed form decides collisions)
    auto merged2 = finite_points({1, 0, 1, -1, 1, 1});
    CHECK(find_point(merged2, "P0")->has_label("P1"));
}

TEST_CASE("hyperbolic classification from the linearization") {
    CHECK(classify_hyperbolic({{{1, 0}, {0, 1}}}) == LocalType::UnstableNode);
    CHECK(classify_hyperbolic({{{1, 0}, {0, -1}}}) == LocalType::Saddle);
    CHECK_THROWS_AS(classify_hyperbolic({{{1, 0}, {0, 0}}}), NotHyperbolic);

    // P4 of (1,-1,1,1,3,2): eigenvalues -a0 = -1 and (a0+c0 mu)/mu = -1/2
    KolmogorovParams k{1, -1, 1, 1, 3, 2};
    auto pts = finite_points(k);
    const SingularPoint* p4 = find_point(pts, "P4");
    JacobianQ j = jacobian_at(build_system(k), p4->x, p4->z);
    CHECK(j.j11.value() == doctest::Approx(-1.0));
    CHECK(j.j22.value() == doctest::Approx(-0.5));
    CHECK(classify_hyperbolic_exact(j) == LocalType::StableNode);
}

TEST_CASE("jacobian at the origin is diag(a0, c0)") {
    KolmogorovParams k{Rational(3, 2), Rational(-5, 4), 1, 2, 3, Rational(1, 2)};
    JacobianQ j = jacobian_at(build_system(k), QuadExt::from_rational(0), QuadExt::from_rational(0));
    CHECK(j.j11.a() == k.a0);
    CHECK(j.j22.a() == k.c0);
    CHECK(j.j12.is_zero());
    CHECK(j.j21.is_zero());
}

TEST_CASE("family eigenvalues are real at every finite point") {
    DrawGenerator gen(37);
    for (int i = 0; i < 200; ++i) {
        KolmogorovParams k = gen.next();
        for (const auto& p : finite_points(k)) {
            JacobianQ j = jacobian_at(build_system(k), p.x, p.z);
            QuadExt discr = j.tr() * j.tr() - j.det() * QuadExt::from_rational(4);
            CHECK(discr.sign() >= 0);
        }
    }
}

TEST_CASE("semi-hyperbolic classification of the origin") {
    // a0>0, c0=0: c3 != 0 -> saddle-node
    PlanarSystem s1 = build_system({1, 0, 1, -1, 1, 1});
    SemiHyperbolicData d1 = classify_semi_hyperbolic(s1, 0, 0, 4);
    CHECK(d1.type == LocalType::SaddleNode);
    CHECK(d1.drift_order == 2);

    // c3 = 0, c2 < 0 -> topological saddle
    PlanarSystem s2 = build_system({1, 0, 1, -1, 0, 1});
    CHECK(classify_semi_hyperbolic(s2, 0, 0, 4).type == LocalType::TopologicalSaddle);

    // c3 = 0, c2 > 0 -> topological unstable node
    PlanarSystem s3 = build_system({1, 0, 1, 1, 0, 1});
    CHECK(classify_semi_hyperbolic(s3, 0, 0, 4).type == LocalType::TopologicalUnstableNode);

    CHECK_THROWS_AS(classify_semi_hyperbolic(build_system({1, -1, 1, 1, 3, 2}), 0, 0, 4),
                    NotSemiHyperbolic);
}

TEST_CASE("closed-form classification matches the published rows") {
    FiniteClassification c19 = classify_finite_closed_form({1, -1, 1, 1, 3, 2});
    CHECK(c19.major_case == 1);
    CHECK(c19.subcase == "1.9");
    REQUIRE(c19.types.size() == 4);
    CHECK(c19.types[3].second == LocalType::StableNode);

    FiniteClassification c62 = classify_finite_closed_form({1, 1, 0, 1, 0, 1});
    CHECK(c62.subcase == "6.2");
    CHECK(c62.types[0].second == LocalType::UnstableNode);

    FiniteClassification c11 = classify_finite_closed_form({1, 0, 1, -1, 1, 1});
    CHECK(c11.subcase == "1.1");
    CHECK(c11.types[0].first.size() == 2);  // P0 = P1 merged
    CHECK(c11.types[0].second == LocalType::SaddleNode);
}

TEST_CASE("closed form agrees with the generic pipeline") {
    SuiteResult r = suite_oracle_equivalence(41, 300);
    CHECK(r.passed());
    CHECK(r.checked == 300);
}

TEST_CASE("exactly one row matches per draw") {
    SuiteResult r = suite_partition(43, 400);
    CHECK(r.passed());
}
