#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "phaseport/rational.hpp"

namespace phaseport {

struct ZeroPolynomial : std::runtime_error {
    ZeroPolynomial() : std::runtime_error("operation undefined for the zero polynomial") {}
};
struct NotDivisible : std::runtime_error {
    explicit NotDivisible(const std::string& what) : std::runtime_error(what) {}
};
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

enum class Var { First, Second };

// Sparse exact bivariate polynomial: exponent pair -> nonzero rational
// coefficient. Degree of the zero polynomial is -1 by convention.
class Poly2 {
public:
    using Exp = std::pair<int, int>;
    using Terms = std::map<Exp, Rational>;

    Poly2() = default;
    static Poly2 zero() { return Poly2(); }
    static Poly2 constant(const Rational& c);
    static Poly2 monomial(const Rational& c, int i, int j);
    static Poly2 var(Var v) { return monomial(1, v == Var::First ? 1 : 0, v == Var::First ? 0 : 1); }

    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;        // max total degree, -1 for zero
    int min_degree() const;    // lowest total degree, -1 for zero
    int degree_in(Var v) const;

    Rational coeff(int i, int j) const;
    void set_coeff(int i, int j, const Rational& c);

    Poly2 operator+(const Poly2& o) const;
    Poly2 operator-(const Poly2& o) const;
    Poly2 operator-() const;
    Poly2 operator*(const Poly2& o) const;
    Poly2 operator*(const Rational& c) const;
    bool operator==(const Poly2& o) const { return terms_ == o.terms_; }

    Poly2 pow(int k) const;

    std::string to_string(const std::string& x = "x", const std::string& y = "y") const;

private:
    Terms terms_;  // invariant: no zero coefficients stored
};

// f evaluated at a floating point; exact rational and quadratic-extension
// evaluation are available for the sign-critical paths.
double poly_eval(const Poly2& f, double x, double y);
Rational poly_eval_exact(const Poly2& f, const Rational& x, const Rational& y);
QuadExt poly_eval_quad(const Poly2& f, const QuadExt& x, const QuadExt& y);

Poly2 poly_diff(const Poly2& f, Var v);

// (m, f_m): lowest total degree present and the homogeneous part of that degree
std::pair<int, Poly2> leading_homogeneous_part(const Poly2& f);

// exact quotient f / var^k; throws NotDivisible if some term has a smaller exponent
Poly2 exact_div_by_power(const Poly2& f, Var v, int k);

Poly2 poly_compose_substitute(const Poly2& f, const Poly2& sub_first, const Poly2& sub_second);

// Textual form used by the CLI and tests: '+'-separated terms like
// "-2/3*x^2*z", whitespace-insensitive, variable names fixed by the caller.
Poly2 parse_poly(const std::string& text, const std::string& x, const std::string& y);

struct PlanarSystem {
    Poly2 p;  // d(first)/dt
    Poly2 q;  // d(second)/dt
    std::pair<std::string, std::string> var_names{"x", "y"};

    int degree() const { return std::max(p.degree(), q.degree()); }
    std::string to_string() const;
};

}  // namespace phaseport
