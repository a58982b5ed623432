#include <cmath>
#include <random>

#include "doctest.h"
#include "phaseport/compactify.hpp"
#include "phaseport/family.hpp"
#include "phaseport/sampling.hpp"

using namespace phaseport;

TEST_CASE("U1 chart of the family is the published cubic system") {
    KolmogorovParams k{2, -3, 1, 5, 7, Rational(1, 2)};
    ChartSystem u1 = to_chart(build_system(k), ChartId::U1);
    Rational m1 = k.mu + 1;
    Poly2 u = Poly2::var(Var::First), v = Poly2::var(Var::Second);
    Poly2 expect_p = u.pow(3) * (k.c2 * m1) + u * u * v * (k.c3 * m1) +
                     u * v * v * (k.c0 - k.a0) + u * v * (k.c1 * m1);
    Poly2 expect_q = u * u * v * (k.c2 * k.mu) + u * v * v * (k.c3 * k.mu) + v.pow(3) * (-k.a0) +
                     v * v * (k.c1 * k.mu);
    CHECK(u1.system.p == expect_p);
    CHECK(u1.system.q == expect_q);
}

TEST_CASE("U2 chart of the family matches the published linear term") {
    KolmogorovParams k{1, 2, 3, -2, 1, 3};
    ChartSystem u2 = to_chart(build_system(k), ChartId::U2);
    // the linear u-term is -c2(mu+1) u and the linear v-term is -c2 v
    CHECK(u2.system.p.coeff(1, 0) == -k.c2 * (k.mu + 1));
    CHECK(u2.system.q.coeff(0, 1) == -k.c2);
}

TEST_CASE("U3 is the identity chart") {
    PlanarSystem s = build_system({1, 1, 1, 1, 1, 1});
    ChartSystem u3 = to_chart(s, ChartId::U3);
    CHECK(u3.system.p == s.p);
    CHECK(u3.system.q == s.q);
}

TEST_CASE("hand-computed degree-1 chart") {
    PlanarSystem s;
    s.p = parse_poly("x", "x", "y");
    s.q = parse_poly("-y", "x", "y");
    ChartSystem u1 = to_chart(s, ChartId::U1);
    CHECK(u1.system.p == parse_poly("-2*u", "u", "v"));
    CHECK(u1.system.q == parse_poly("-v", "u", "v"));
}

TEST_CASE("equator is invariant in the U1 and U2 charts") {
    DrawGenerator gen(23);
    for (int i = 0; i < 50; ++i) {
        PlanarSystem s = build_system(gen.next());
        for (ChartId c : {ChartId::U1, ChartId::U2}) {
            ChartSystem cs = to_chart(s, c);
            Poly2 at_equator = poly_compose_substitute(cs.system.q, Poly2::var(Var::First),
                                                       Poly2::zero());
            CHECK(at_equator.is_zero());
        }
    }
}

TEST_CASE("V charts carry the antipodal parity") {
    // with (u,v) <-> (-1,u,v)/|.| coordinates, V1(u,v) = (-1)^d U1(-u,-v)
    DrawGenerator gen(29);
    KolmogorovParams k = gen.next();
    PlanarSystem s = build_system(k);
    int d = s.degree();
    ChartSystem u1 = to_chart(s, ChartId::U1);
    ChartSystem v1 = to_chart(s, ChartId::V1);
    Poly2 mu = -Poly2::var(Var::First), mv = -Poly2::var(Var::Second);
    Rational sign = d % 2 == 1 ? -1 : 1;
    CHECK(v1.system.p == poly_compose_substitute(u1.system.p, mu, mv) * sign);
    CHECK(v1.system.q == poly_compose_substitute(u1.system.q, mu, mv) * sign);
}

TEST_CASE("chart overlap flows agree up to positive rescaling") {
    std::mt19937_64 rng(31);
    DrawGenerator gen(31);
    std::uniform_real_distribution<double> unif(0.2, 2.0);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        PlanarSystem s = build_system(gen.next());
        ChartSystem u1 = to_chart(s, ChartId::U1);
        ChartSystem u2 = to_chart(s, ChartId::U2);
        // a point with x,z > 0 lives in both charts: (u1,v1) = (z/x, 1/x),
        // (u2,v2) = (x/z, 1/z); the flow directions must map consistently
        double x = unif(rng), z = unif(rng);
        double a1 = poly_eval(u1.system.p, z / x, 1 / x);
        double b1 = poly_eval(u1.system.q, z / x, 1 / x);
        double a2 = poly_eval(u2.system.p, x / z, 1 / z);
        double b2 = poly_eval(u2.system.q, x / z, 1 / z);
        // transition u2 = 1/u1, v2 = v1/u1: du2 = -du1/u1^2, dv2 = (dv1 u1 - v1 du1)/u1^2
        double u = z / x, v = 1 / x;
        double t2u = -a1 / (u * u);
        double t2v = (b1 * u - v * a1) / (u * u);
        double cross = t2u * b2 - t2v * a2;  // parallel?
        double dot = t2u * a2 + t2v * b2;
        double scale = std::hypot(t2u, t2v) * std::hypot(a2, b2);
        if (scale < 1e-12) continue;
        CHECK(std::abs(cross) / scale < 1e-9);
        CHECK(dot > 0);  // same orientation, positive factor
        ++checked;
    }
    CHECK(checked >= 80);
}

TEST_CASE("infinite singular points of the family") {
    std::vector<InfinitePoint> pts = infinite_singular_points(build_system({1, 1, 0, 1, 0, 1}));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0].chart == ChartId::U1);
    CHECK(pts[0].u == 0);
    CHECK(pts[1].chart == ChartId::U2);

    CHECK_THROWS_AS(infinite_singular_points(build_system({1, 1, 0, 1, 0, -1})),
                    InfinitelyManyInfinite);

    PlanarSystem lin;
    lin.p = parse_poly("x", "x", "y");
    lin.q = parse_poly("-y", "x", "y");
    std::vector<InfinitePoint> lp = infinite_singular_points(lin);
    REQUIRE(lp.size() == 2);
}

TEST_CASE("disc projection") {
    DiscPoint o = disc_project(0, 0);
    CHECK(o.x == 0);
    CHECK(o.y == 0);
    DiscPoint p = disc_project(1, 0);
    CHECK(p.x == doctest::Approx(1 / std::sqrt(2.0)));
    DiscPoint b = disc_boundary_at_angle(M_PI / 2);
    CHECK(b.x == doctest::Approx(0));
    CHECK(b.y == doctest::Approx(1));
}
