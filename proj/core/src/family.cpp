#include "phaseport/family.hpp"

#include <map>
#include <sstream>

namespace phaseport {

std::string KolmogorovParams::to_string() const {
    std::ostringstream os;
    os << "(a0=" << a0 << ", c0=" << c0 << ", c1=" << c1 << ", c2=" << c2
       << ", c3=" << c3 << ", mu=" << mu << ")";
    return os.str();
}

PlanarSystem build_system(const KolmogorovParams& k) {
    const Poly2 x = Poly2::var(Var::First);
    const Poly2 z = Poly2::var(Var::Second);
    const Poly2 bracket = z * z * k.c2 + z * k.c3 + x * k.c1;  // c1 x + c2 z^2 + c3 z
    PlanarSystem sys;
    sys.p = x * (Poly2::constant(k.a0) - bracket * k.mu);
    sys.q = z * (Poly2::constant(k.c0) + bracket);
    sys.var_names = {"x", "z"};
    return sys;
}

Poly2 cofactor_x(const KolmogorovParams& k) {
    const Poly2 x = Poly2::var(Var::First);
    const Poly2 z = Poly2::var(Var::Second);
    return Poly2::constant(k.a0) - (z * z * k.c2 + z * k.c3 + x * k.c1) * k.mu;
}

Poly2 cofactor_z(const KolmogorovParams& k) {
    const Poly2 x = Poly2::var(Var::First);
    const Poly2 z = Poly2::var(Var::Second);
    return Poly2::constant(k.c0) + z * z * k.c2 + z * k.c3 + x * k.c1;
}

HypothesisReport check_hypotheses(const KolmogorovParams& k) {
    HypothesisReport rep;
    auto fail = [&rep](const char* name) { rep.violations.emplace_back(name); };

    bool h = true;
    if (sgn(k.c2) == 0) { fail("c2_zero"); h = false; }
    if (sgn(k.a0) < 0) { fail("a0_negative"); h = false; }
    if (sgn(k.c1) < 0) { fail("c1_negative"); h = false; }
    if (sgn(k.c3) < 0) { fail("c3_negative"); h = false; }
    if (sgn(k.apc()) == 0) { fail("a0_plus_c0mu_zero"); h = false; }
    rep.satisfies_H = h;

    bool h1 = h;
    if (sgn(k.a0) == 0 && sgn(k.c1 * k.mu) == 0) { fail("a0_and_c1mu_both_zero"); h1 = false; }
    rep.satisfies_H1 = h1;

    bool h2 = h1;
    if (k.mu == -1) { fail("mu_equals_minus_one"); h2 = false; }
    if (sgn(k.a0) == 0 && sgn(k.c0) <= 0) { fail("a0_zero_requires_c0_positive"); h2 = false; }
    rep.satisfies_H2 = h2;
    return rep;
}

KolmogorovParams SymmetryOp::apply(const KolmogorovParams& p) const {
    KolmogorovParams r = p;
    switch (kind) {
        case SymmetryKind::FlipX:
            r.c1 = -r.c1;
            break;
        case SymmetryKind::FlipZ:
            r.c3 = -r.c3;
            break;
        case SymmetryKind::TimeReverse:
            // sign flips per the a0/c0/c2 reversal; the zero entries stay zero,
            // so applying twice restores the original
            r.a0 = -r.a0;
            r.c0 = -r.c0;
            r.c2 = -r.c2;
            break;
    }
    return r;
}

std::string SymmetryOp::name() const {
    switch (kind) {
        case SymmetryKind::FlipX: return "FlipX";
        case SymmetryKind::FlipZ: return "FlipZ";
        case SymmetryKind::TimeReverse: return "TimeReverse";
    }
    return "?";
}

std::pair<KolmogorovParams, std::vector<SymmetryOp>> normalize(const KolmogorovParams& params) {
    if (sgn(params.c2) == 0)
        throw HypothesisViolation("c2_zero: degenerate two-dimensional Lotka-Volterra subfamily");
    KolmogorovParams k = params;
    std::vector<SymmetryOp> ops;
    if (sgn(k.c1) < 0) {
        SymmetryOp op{SymmetryKind::FlipX};
        k = op.apply(k);
        ops.push_back(op);
    }
    if (sgn(k.c3) < 0) {
        SymmetryOp op{SymmetryKind::FlipZ};
        k = op.apply(k);
        ops.push_back(op);
    }
    if (sgn(k.a0) < 0) {
        SymmetryOp op{SymmetryKind::TimeReverse};
        k = op.apply(k);
        ops.push_back(op);
    }
    if (sgn(k.a0) == 0 && sgn(k.c0) <= 0)
        throw HypothesisViolation("a0_zero_requires_c0_positive");
    return {k, ops};
}

DarbouxCertificate darboux_certificate(const KolmogorovParams& k) {
    if (sgn(k.apc()) == 0)
        throw InvariantDegenerate("a0 + c0*mu = 0: the exponential rate vanishes");
    DarbouxCertificate cert;
    cert.lambda1 = 1;
    cert.lambda2 = k.mu;
    cert.s = -k.apc();
    cert.residual = cofactor_x(k) + cofactor_z(k) * k.mu + Poly2::constant(cert.s);
    return cert;
}

namespace {

// minimal exact trivariate polynomial, just enough for the reduction identity
using Exp3 = std::array<int, 3>;
using Poly3 = std::map<Exp3, Rational>;

void add_term(Poly3& f, Exp3 e, const Rational& c) {
    auto it = f.find(e);
    if (it == f.end()) {
        if (sgn(c) != 0) f[e] = c;
    } else {
        it->second += c;
        if (sgn(it->second) == 0) f.erase(it);
    }
}

Poly3 mul(const Poly3& f, const Poly3& g) {
    Poly3 r;
    for (const auto& [ef, cf] : f)
        for (const auto& [eg, cg] : g)
            add_term(r, {ef[0] + eg[0], ef[1] + eg[1], ef[2] + eg[2]}, cf * cg);
    return r;
}

Poly3 scaled(const Poly3& f, const Rational& c) {
    Poly3 r;
    for (const auto& [e, v] : f) add_term(r, e, v * c);
    return r;
}

Poly3 sum(const Poly3& f, const Poly3& g) {
    Poly3 r = f;
    for (const auto& [e, c] : g) add_term(r, e, c);
    return r;
}

Poly3 mono(int i, int j, int k, const Rational& c) {
    Poly3 f;
    add_term(f, {i, j, k}, c);
    return f;
}

}  // namespace

bool verify_lv3_reduction(const Lv3Params& lv) {
    for (int i = 0; i < 4; ++i)
        if (lv.b[i] != lv.lambda * lv.c[i])
            throw MalformedReduction("b coefficients do not follow the b_i = lambda*c_i pattern");

    // all-zero c row: dz/dt = 0, z is constant, H = z is already a first integral
    bool all_zero = true;
    for (int i = 0; i < 4; ++i)
        if (sgn(lv.c[i]) != 0) all_zero = false;
    if (all_zero) return true;

    // d/dt (z^2/y) = 0  <=>  y * (2 z zdot y - z^2 ydot) == 0 with
    //   ydot = lambda y K, zdot = z K, K = c0 + c1 x + c2 y + c3 z
    Poly3 K = sum(sum(mono(0, 0, 0, lv.c[0]), mono(1, 0, 0, lv.c[1])),
                  sum(mono(0, 1, 0, lv.c[2]), mono(0, 0, 1, lv.c[3])));
    Poly3 zdot = mul(mono(0, 0, 1, 1), K);
    Poly3 ydot = scaled(mul(mono(0, 1, 0, 1), K), lv.lambda);
    Poly3 lhs = scaled(mul(mul(mono(0, 1, 1, 1), zdot), mono(0, 0, 0, 1)), 2);  // 2 z zdot y
    Poly3 rhs = mul(mono(0, 0, 2, 1), ydot);                                    // z^2 ydot
    Poly3 residual = sum(lhs, scaled(rhs, -1));
    return residual.empty();
}

}  // namespace phaseport
