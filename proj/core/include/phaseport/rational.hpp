#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace phaseport {

// Exact rational coefficient type. boost keeps gcd(num,den)=1 and den>0,
// which is the representation invariant everything downstream assumes.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline int sgn(const Rational& q) {
    return q.sign();
}

inline Rational rat(long long num, long long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    return Rational(num, den);
}

inline double to_double(const Rational& q) {
    return q.convert_to<double>();
}

// Accepts "p", "p/q" and decimal strings like "-0.25" (converted exactly
// via a power-of-ten denominator).
Rational parse_rational(const std::string& text);

std::string format_rational(const Rational& q);

// Element a + b*sqrt(D) of the real quadratic extension Q[sqrt(D)], D >= 0.
// Closed forms of the family's singular points live here (D = c3^2-4*c0*c2),
// so sign decisions stay exact instead of going through floating point.
class QuadExt {
public:
    QuadExt() : a_(0), b_(0), d_(0) {}
    QuadExt(Rational a, Rational b, Rational d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
        if (sgn(d_) < 0) throw std::invalid_argument("QuadExt needs D >= 0");
        if (sgn(d_) == 0) b_ = 0;  // sqrt(0) folds away
    }
    static QuadExt from_rational(const Rational& a) { return QuadExt(a, 0, 0); }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    const Rational& d() const { return d_; }

    bool is_rational() const { return sgn(b_) == 0; }

    QuadExt operator+(const QuadExt& o) const { return QuadExt(a_ + o.a_, b_ + o.b_, join(o)); }
    QuadExt operator-(const QuadExt& o) const { return QuadExt(a_ - o.a_, b_ - o.b_, join(o)); }
    QuadExt operator-() const { return QuadExt(-a_, -b_, d_); }
    QuadExt operator*(const QuadExt& o) const {
        Rational d = join(o);
        return QuadExt(a_ * o.a_ + b_ * o.b_ * d, a_ * o.b_ + b_ * o.a_, d);
    }
    QuadExt operator*(const Rational& c) const { return QuadExt(a_ * c, b_ * c, d_); }

    // sign of a + b*sqrt(D), decided by comparing a^2 against b^2*D
    int sign() const {
        const int sa = sgn(a_), sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // opposite signs: |a| vs |b|sqrt(D)
        const int cmp = sgn(a_ * a_ - b_ * b_ * d_);
        return cmp == 0 ? 0 : (cmp > 0 ? sa : sb);
    }
    bool is_zero() const { return sign() == 0; }

    double value() const;

private:
    Rational join(const QuadExt& o) const {
        if (sgn(d_) == 0) return o.d_;
        if (sgn(o.d_) == 0) return d_;
        if (d_ != o.d_) throw std::invalid_argument("QuadExt radicands differ");
        return d_;
    }
    Rational a_, b_, d_;
};

}  // namespace phaseport
