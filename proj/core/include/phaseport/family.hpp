#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "phaseport/poly.hpp"

namespace phaseport {

struct HypothesisViolation : std::runtime_error {
    explicit HypothesisViolation(const std::string& what) : std::runtime_error(what) {}
};
struct InvariantDegenerate : std::runtime_error {
    explicit InvariantDegenerate(const std::string& what) : std::runtime_error(what) {}
};
struct MalformedReduction : std::runtime_error {
    explicit MalformedReduction(const std::string& what) : std::runtime_error(what) {}
};

// The six parameters of the planar family
//   dx/dt = x (a0 - mu (c1 x + c2 z^2 + c3 z))
//   dz/dt = z (c0 + c1 x + c2 z^2 + c3 z)
struct KolmogorovParams {
    Rational a0, c0, c1, c2, c3, mu;

    Rational apc() const { return a0 + c0 * mu; }                 // a0 + c0*mu
    Rational disc() const { return c3 * c3 - 4 * c0 * c2; }       // c3^2 - 4 c0 c2
    bool operator==(const KolmogorovParams&) const = default;
    std::string to_string() const;
};

struct HypothesisReport {
    bool satisfies_H = false;
    bool satisfies_H1 = false;
    bool satisfies_H2 = false;
    std::vector<std::string> violations;
};

enum class SymmetryKind { FlipX, FlipZ, TimeReverse };

struct SymmetryOp {
    SymmetryKind kind;
    KolmogorovParams apply(const KolmogorovParams& p) const;
    std::string name() const;
};

struct DarbouxCertificate {
    Rational lambda1, lambda2;  // exponents of x and z
    Rational s;                 // exponential rate, -(a0 + c0*mu)
    Poly2 residual;             // lambda1*Kx + lambda2*Kz + s, must vanish
    bool valid() const { return residual.is_zero(); }
};

PlanarSystem build_system(const KolmogorovParams& params);

// Cofactors of the invariant axes x=0 and z=0
Poly2 cofactor_x(const KolmogorovParams& params);
Poly2 cofactor_z(const KolmogorovParams& params);

HypothesisReport check_hypotheses(const KolmogorovParams& params);

// Reduce to a0>=0, c1>=0, c3>=0 using the family's mirror/time-reversal
// symmetries; the op list maps portraits back to the original parameters.
// Throws HypothesisViolation for c2=0 and for a0=0 with c0<=0 after reduction.
std::pair<KolmogorovParams, std::vector<SymmetryOp>> normalize(const KolmogorovParams& params);

DarbouxCertificate darboux_certificate(const KolmogorovParams& params);

// Coefficients of a 3D Lotka-Volterra system
//   dx/dt = x (a0 + a1 x + a2 y + a3 z)
//   dy/dt = y (b0 + b1 x + b2 y + b3 z)
//   dz/dt = z (c0 + c1 x + c2 y + c3 z)
struct Lv3Params {
    std::array<Rational, 4> a, b, c;
    Rational lambda;  // b_i = lambda * c_i pattern; the degree-two first integral needs lambda = 2
};

// Checks d/dt (z^2 / y) == 0 as an exact polynomial identity for systems in
// the b_i = lambda*c_i family. Throws MalformedReduction if the pattern fails.
bool verify_lv3_reduction(const Lv3Params& params);

}  // namespace phaseport
