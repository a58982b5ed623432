#include "phaseport/sampling.hpp"

namespace phaseport {

Rational DrawGenerator::small_rational(int lo, int hi, int max_den) {
    std::uniform_int_distribution<int> num(lo, hi);
    std::uniform_int_distribution<int> den(1, max_den);
    return Rational(num(rng_), den(rng_));
}

Rational DrawGenerator::nonzero_rational(int lo, int hi, int max_den) {
    for (;;) {
        Rational r = small_rational(lo, hi, max_den);
        if (sgn(r) != 0) return r;
    }
}

KolmogorovParams DrawGenerator::next() {
    int major = 1 + (round_robin_++ % 6);
    return next_in_case(major);
}

KolmogorovParams DrawGenerator::next_in_case(int major_case) {
    std::uniform_int_distribution<int> coin(0, 1);
    const bool want_c1mu = major_case == 1 || major_case == 3 || major_case == 5;
    const int want_disc = major_case <= 2 ? 1 : (major_case <= 4 ? 0 : -1);

    for (int attempt = 0; attempt < 10000; ++attempt) {
        KolmogorovParams k;
        k.a0 = coin(rng_) == 0 && want_c1mu ? Rational(0) : small_rational(0, 6, 3);
        k.mu = nonzero_rational(-8, 8, 4);
        if (want_c1mu) {
            k.c1 = nonzero_rational(1, 4, 2);
        } else {
            if (coin(rng_) == 0) {
                k.c1 = 0;
            } else {
                k.c1 = nonzero_rational(1, 4, 2);
                k.mu = 0;
            }
        }
        if (want_disc == 0) {
            Rational t = nonzero_rational(-3, 3, 2);
            Rational q = nonzero_rational(1, 3, 2);
            Rational s = coin(rng_) == 0 ? Rational(1) : Rational(-1);
            k.c0 = s * t * t;
            k.c2 = s * q * q;
            Rational tq = t * q;
            k.c3 = sgn(tq) < 0 ? Rational(-2) * tq : Rational(2) * tq;
        } else {
            k.c0 = small_rational(-6, 6, 3);
            k.c2 = nonzero_rational(-4, 4, 2);
            k.c3 = small_rational(0, 5, 2);
            if (sgn(k.disc()) != want_disc) continue;
        }
        if (check_hypotheses(k).satisfies_H2 && k.mu != -1) {
            // keep well inside the table case
            if (want_c1mu != (sgn(k.c1 * k.mu) != 0)) continue;
            return k;
        }
    }
    throw std::runtime_error("draw generator failed to satisfy H2 in case " +
                             std::to_string(major_case));
}

}  // namespace phaseport
