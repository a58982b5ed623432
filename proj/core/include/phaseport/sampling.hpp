#pragma once

#include <cstdint>
#include <random>

#include "phaseport/family.hpp"

namespace phaseport {

// Seeded generator of H2-valid parameter draws. next() stratifies over the
// six Table-1 cases round-robin; the measure-zero disc = 0 cases are built
// from c0 = s*t^2, c2 = s*q^2, c3 = 2|t q| rather than rejection-sampled.
class DrawGenerator {
public:
    explicit DrawGenerator(uint64_t seed) : rng_(seed) {}

    KolmogorovParams next();
    KolmogorovParams next_in_case(int major_case);  // 1..6

private:
    std::mt19937_64 rng_;
    int round_robin_ = 0;

    Rational small_rational(int lo, int hi, int max_den);
    Rational nonzero_rational(int lo, int hi, int max_den);
};

}  // namespace phaseport
