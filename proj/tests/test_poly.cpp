#include <random>

#include "doctest.h"
#include "phaseport/poly.hpp"

using namespace phaseport;

namespace {

Poly2 random_poly(std::mt19937_64& rng, int max_deg) {
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 3);
    Poly2 f;
    for (int t = 0; t < 6; ++t) {
        int i = deg(rng), j = deg(rng);
        if (i + j > max_deg) continue;
        f = f + Poly2::monomial(Rational(num(rng), den(rng)), i, j);
    }
    return f;
}

}  // namespace

TEST_CASE("rational parsing") {
    CHECK(parse_rational("3/2") == Rational(3, 2));
    CHECK(parse_rational("-0.25") == Rational(-1, 4));
    CHECK(parse_rational(" 7 ") == Rational(7));
    CHECK(parse_rational("0.5") == Rational(1, 2));
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
}

TEST_CASE("quadratic extension signs") {
    // 3 - 2*sqrt(2) > 0, 2 - 2*sqrt(2) < 0
    CHECK(QuadExt(3, -2, 2).sign() == 1);
    CHECK(QuadExt(2, -2, 2).sign() == -1);
    CHECK(QuadExt(2, -1, 4).sign() == 0);  // 2 - sqrt(4)
    CHECK(QuadExt(0, 1, 5).sign() == 1);
    QuadExt a(1, 1, 3), b(2, -1, 3);
    CHECK((a * b).sign() == ((a.value() * b.value()) > 0 ? 1 : -1));
}

TEST_CASE("poly_eval examples") {
    Poly2 f = parse_poly("x^2+z", "x", "z");
    CHECK(poly_eval(f, 0, 0) == 0.0);

    // a0 x - mu c1 x^2 with a0=1, mu=2, c1=1 vanishes at x=1/2
    Poly2 g = parse_poly("x - 2*x^2", "x", "z");
    CHECK(poly_eval(g, 0.5, 0.0) == doctest::Approx(0.0));
    CHECK(poly_eval_exact(g, Rational(1, 2), Rational(0)) == 0);

    Poly2 h = parse_poly("z^3", "x", "z");
    CHECK(poly_eval(h, 0, 2) == doctest::Approx(8.0));
}

TEST_CASE("poly_diff examples") {
    Poly2 f = parse_poly("x*z^2", "x", "z");
    CHECK(poly_diff(f, Var::Second) == parse_poly("2*x*z", "x", "z"));
    CHECK(poly_diff(parse_poly("z^3", "x", "z"), Var::Second) == parse_poly("3*z^2", "x", "z"));
    CHECK(poly_diff(Poly2::constant(5), Var::First).is_zero());
}

TEST_CASE("poly_diff matches centered finite differences") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> pt(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        Poly2 f = random_poly(rng, 4);
        Poly2 fx = poly_diff(f, Var::First);
        double x = pt(rng), y = pt(rng);
        const double h = 1e-5;
        double fd = (poly_eval(f, x + h, y) - poly_eval(f, x - h, y)) / (2 * h);
        double exact = poly_eval(fx, x, y);
        CHECK(std::abs(fd - exact) <= 1e-8 * std::max(1.0, std::abs(exact)) + 1e-7);
    }
}

TEST_CASE("leading homogeneous part") {
    auto [m1, f1] = leading_homogeneous_part(parse_poly("x^3 + x^2", "x", "z"));
    CHECK(m1 == 2);
    CHECK(f1 == parse_poly("x^2", "x", "z"));

    auto [m2, f2] = leading_homogeneous_part(Poly2::constant(5));
    CHECK(m2 == 0);
    CHECK(f2 == Poly2::constant(5));

    CHECK_THROWS_AS(leading_homogeneous_part(Poly2::zero()), ZeroPolynomial);
}

TEST_CASE("exact division by a variable power") {
    Poly2 f = parse_poly("x^2*z + x^3", "x", "z");
    CHECK(exact_div_by_power(f, Var::First, 2) == parse_poly("z + x", "x", "z"));
    CHECK_THROWS_AS(exact_div_by_power(parse_poly("z", "x", "z"), Var::First, 1), NotDivisible);

    // round trip: (f * x^k) / x^k == f
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Poly2 f2 = random_poly(rng, 3);
        Poly2 xk = Poly2::monomial(1, 2, 0);
        CHECK(exact_div_by_power(f2 * xk, Var::First, 2) == f2);
    }
}

TEST_CASE("composition examples and evaluation homomorphism") {
    Poly2 x = Poly2::var(Var::First), z = Poly2::var(Var::Second);
    CHECK(poly_compose_substitute(parse_poly("x*z", "x", "z"), x, x * z) ==
          parse_poly("x^2*z", "x", "z"));
    CHECK(poly_compose_substitute(parse_poly("z^2", "x", "z"), x, x * z) ==
          parse_poly("x^2*z^2", "x", "z"));

    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> small(-3, 3);
    for (int trial = 0; trial < 40; ++trial) {
        Poly2 f = random_poly(rng, 3), g = random_poly(rng, 2), h = random_poly(rng, 2);
        Rational px(small(rng), 2), py(small(rng), 2);
        Rational lhs = poly_eval_exact(poly_compose_substitute(f, g, h), px, py);
        Rational rhs = poly_eval_exact(f, poly_eval_exact(g, px, py), poly_eval_exact(h, px, py));
        CHECK(lhs == rhs);
    }
}

TEST_CASE("parser accepts the documented term syntax") {
    Poly2 f = parse_poly("-2/3*x^2*z", "x", "z");
    CHECK(f.coeff(2, 1) == Rational(-2, 3));
    Poly2 g = parse_poly("x - 2*x^2 + 1/2", "x", "z");
    CHECK(g.coeff(0, 0) == Rational(1, 2));
    CHECK(g.coeff(1, 0) == 1);
    CHECK(g.coeff(2, 0) == -2);
    CHECK_THROWS_AS(parse_poly("x + y", "x", "z"), ParseError);
    CHECK(parse_poly(" - x ^ 2 ", "x", "z") == -Poly2::monomial(1, 2, 0));
}
