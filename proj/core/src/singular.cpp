#include "phaseport/singular.hpp"

#include <algorithm>
#include <sstream>

namespace phaseport {

std::string local_type_name(LocalType t) {
    switch (t) {
        case LocalType::Saddle: return "saddle";
        case LocalType::StableNode: return "stable node";
        case LocalType::UnstableNode: return "unstable node";
        case LocalType::SaddleNode: return "saddle-node";
        case LocalType::TopologicalSaddle: return "topological saddle";
        case LocalType::TopologicalStableNode: return "topological stable node";
        case LocalType::TopologicalUnstableNode: return "topological unstable node";
        case LocalType::StableFocus: return "stable focus";
        case LocalType::UnstableFocus: return "unstable focus";
        case LocalType::CenterOrFocus: return "center or focus";
        case LocalType::Degenerate: return "degenerate";
    }
    return "?";
}

bool is_saddle_like(LocalType t) {
    return t == LocalType::Saddle || t == LocalType::TopologicalSaddle;
}

bool is_node_like(LocalType t) {
    switch (t) {
        case LocalType::StableNode:
        case LocalType::UnstableNode:
        case LocalType::TopologicalStableNode:
        case LocalType::TopologicalUnstableNode:
        case LocalType::StableFocus:
        case LocalType::UnstableFocus:
        case LocalType::CenterOrFocus:
            return true;
        default:
            return false;
    }
}

int local_type_index(LocalType t) {
    if (is_saddle_like(t)) return -1;
    if (is_node_like(t)) return 1;
    if (t == LocalType::SaddleNode) return 0;
    throw std::logic_error("no published index for degenerate type");
}

std::string SingularPoint::label_string() const {
    std::string s;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (i) s += "=";
        s += labels[i];
    }
    return s;
}

bool SingularPoint::has_label(const std::string& l) const {
    return std::find(labels.begin(), labels.end(), l) != labels.end();
}

std::vector<SingularPoint> finite_points(const KolmogorovParams& k) {
    HypothesisReport rep = check_hypotheses(k);
    if (!rep.satisfies_H1) {
        std::string msg = "H1 violated:";
        for (const auto& v : rep.violations) msg += " " + v;
        throw HypothesisViolation(msg);
    }

    const Rational disc = k.disc();
    const int sd = sgn(disc);
    const Rational D = sd > 0 ? disc : Rational(0);
    auto Q = [&](const Rational& a, const Rational& b) { return QuadExt(a, b, D); };

    struct Raw {
        std::string label;
        QuadExt x, z;
    };
    std::vector<Raw> raw;
    raw.push_back({"P0", Q(0, 0), Q(0, 0)});
    if (sd > 0) {
        Rational inv2c2 = Rational(1) / (2 * k.c2);
        raw.push_back({"P1", Q(0, 0), Q(-k.c3 * inv2c2, inv2c2)});
        raw.push_back({"P2", Q(0, 0), Q(-k.c3 * inv2c2, -inv2c2)});
    } else if (sd == 0) {
        raw.push_back({"P3", Q(0, 0), Q(-k.c3 / (2 * k.c2), 0)});
    }
    if (sgn(k.c1 * k.mu) != 0)
        raw.push_back({"P4", Q(k.a0 / (k.c1 * k.mu), 0), Q(0, 0)});

    std::vector<SingularPoint> pts;
    for (const auto& r : raw) {
        bool merged = false;
        for (auto& p : pts) {
            if ((p.x - r.x).is_zero() && (p.z - r.z).is_zero()) {
                p.labels.push_back(r.label);
                p.multiplicity_note = r.label + " collides with " + p.labels.front();
                merged = true;
                break;
            }
        }
        if (!merged) {
            SingularPoint p;
            p.labels = {r.label};
            p.x = r.x;
            p.z = r.z;
            pts.push_back(std::move(p));
        }
    }
    return pts;
}

LocalType classify_hyperbolic(const std::array<std::array<double, 2>, 2>& j) {
    double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
    double tr = j[0][0] + j[1][1];
    if (det == 0.0) throw NotHyperbolic();
    if (det < 0) return LocalType::Saddle;
    return tr < 0 ? LocalType::StableNode : LocalType::UnstableNode;
}

LocalType classify_hyperbolic_exact(const JacobianQ& j) {
    const int det = j.det().sign();
    if (det == 0) throw NotHyperbolic();
    if (det < 0) return LocalType::Saddle;
    const int tr = j.tr().sign();
    if (tr == 0) throw NotHyperbolic();  // center: excluded by realness of the family spectrum
    return tr < 0 ? LocalType::StableNode : LocalType::UnstableNode;
}

LocalType classify_nondegenerate_exact(const JacobianQ& j) {
    const int det = j.det().sign();
    if (det == 0) throw NotHyperbolic();
    if (det < 0) return LocalType::Saddle;
    const int tr = j.tr().sign();
    if (tr == 0) return LocalType::CenterOrFocus;
    const int discr = (j.tr() * j.tr() - j.det() * QuadExt::from_rational(4)).sign();
    if (discr >= 0) return tr < 0 ? LocalType::StableNode : LocalType::UnstableNode;
    return tr < 0 ? LocalType::StableFocus : LocalType::UnstableFocus;
}

JacobianQ jacobian_at(const PlanarSystem& sys, const QuadExt& x, const QuadExt& z) {
    JacobianQ j;
    j.j11 = poly_eval_quad(poly_diff(sys.p, Var::First), x, z);
    j.j12 = poly_eval_quad(poly_diff(sys.p, Var::Second), x, z);
    j.j21 = poly_eval_quad(poly_diff(sys.q, Var::First), x, z);
    j.j22 = poly_eval_quad(poly_diff(sys.q, Var::Second), x, z);
    return j;
}

namespace {

// truncated univariate series with rational coefficients, index = degree
using Series = std::vector<Rational>;

Series series_mul(const Series& a, const Series& b, size_t n) {
    Series r(n + 1, Rational(0));
    for (size_t i = 0; i < a.size() && i <= n; ++i) {
        if (sgn(a[i]) == 0) continue;
        for (size_t j = 0; j < b.size() && i + j <= n; ++j)
            r[i + j] += a[i] * b[j];
    }
    return r;
}

// bivariate poly evaluated on (xi, f(xi)), truncated at order n
Series eval_on_graph(const Poly2& g, const Series& f, size_t n) {
    Series r(n + 1, Rational(0));
    // cache powers of f
    std::vector<Series> fpow;
    fpow.push_back(Series{Rational(1)});
    for (const auto& [e, c] : g.terms()) {
        int i = e.first, j = e.second;
        if (static_cast<size_t>(i) > n) continue;
        while (fpow.size() <= static_cast<size_t>(j))
            fpow.push_back(series_mul(fpow.back(), f, n));
        const Series& fj = fpow[j];
        for (size_t d = 0; d < fj.size(); ++d) {
            size_t deg = d + static_cast<size_t>(i);
            if (deg > n) break;
            if (sgn(fj[d]) != 0) r[deg] += c * fj[d];
        }
    }
    return r;
}

Series series_diff(const Series& f) {
    Series r(f.size() > 0 ? f.size() - 1 : 0, Rational(0));
    for (size_t i = 1; i < f.size(); ++i) r[i - 1] = f[i] * Rational(i);
    return r;
}

std::array<Rational, 2> kernel_vector(const Rational& a, const Rational& b, const Rational& c,
                                      const Rational& d) {
    if (sgn(a) != 0 || sgn(b) != 0) return {b, -a};
    return {d, -c};
}

}  // namespace

SemiHyperbolicData classify_semi_hyperbolic(const PlanarSystem& sys, const Rational& x0,
                                            const Rational& z0, int order) {
    const Poly2 xi = Poly2::var(Var::First);
    const Poly2 eta = Poly2::var(Var::Second);

    // shift the point to the origin
    Poly2 p = poly_compose_substitute(sys.p, xi + Poly2::constant(x0), eta + Poly2::constant(z0));
    Poly2 q = poly_compose_substitute(sys.q, xi + Poly2::constant(x0), eta + Poly2::constant(z0));
    if (sgn(p.coeff(0, 0)) != 0 || sgn(q.coeff(0, 0)) != 0)
        throw std::invalid_argument("classify_semi_hyperbolic: point is not singular");

    const Rational j11 = p.coeff(1, 0), j12 = p.coeff(0, 1);
    const Rational j21 = q.coeff(1, 0), j22 = q.coeff(0, 1);
    const Rational det = j11 * j22 - j12 * j21;
    const Rational lambda = j11 + j22;
    if (sgn(det) != 0 || sgn(lambda) == 0) throw NotSemiHyperbolic();

    // eigenbasis: zero eigenvalue first
    auto v0 = kernel_vector(j11, j12, j21, j22);
    auto vl = kernel_vector(j11 - lambda, j12, j21, j22 - lambda);
    const Rational detT = v0[0] * vl[1] - vl[0] * v0[1];
    if (sgn(detT) == 0) throw NotSemiHyperbolic();

    // (x, y) = T (xi, eta)
    Poly2 sx = xi * v0[0] + eta * vl[0];
    Poly2 sy = xi * v0[1] + eta * vl[1];
    Poly2 px = poly_compose_substitute(p, sx, sy);
    Poly2 qy = poly_compose_substitute(q, sx, sy);
    // (xi_dot, eta_dot) = T^{-1} (px, qy)
    Poly2 fxi = (px * vl[1] - qy * vl[0]) * (Rational(1) / detT);
    Poly2 heta = (qy * v0[0] - px * v0[1]) * (Rational(1) / detT);

    const size_t n = static_cast<size_t>(order);
    // solve eta = f(xi) term by term: f' * fxi(xi,f) - heta(xi,f) = 0
    Series f(n + 1, Rational(0));
    for (size_t k = 2; k <= n; ++k) {
        Series lhs = series_mul(series_diff(f), eval_on_graph(fxi, f, n), n);
        Series rhs = eval_on_graph(heta, f, n);
        Rational residual = lhs[k] - rhs[k];
        // heta's linear eta-term contributes -lambda * f_k to the residual
        f[k] = residual / lambda;
    }

    Series drift = eval_on_graph(fxi, f, n);
    int m = -1;
    for (size_t k = 2; k <= n; ++k)
        if (sgn(drift[k]) != 0) {
            m = static_cast<int>(k);
            break;
        }
    if (m < 0) throw OrderInsufficient(order);

    SemiHyperbolicData out;
    out.drift_order = m;
    out.drift_coeff = drift[m];
    out.lambda = lambda;
    out.center_dir = v0;
    out.transverse_dir = vl;
    if (m % 2 == 0) {
        out.type = LocalType::SaddleNode;
    } else {
        const bool center_unstable = sgn(drift[m]) > 0;
        const bool transverse_unstable = sgn(lambda) > 0;
        if (center_unstable != transverse_unstable)
            out.type = LocalType::TopologicalSaddle;
        else
            out.type = center_unstable ? LocalType::TopologicalUnstableNode
                                       : LocalType::TopologicalStableNode;
    }
    return out;
}

std::vector<SingularPoint> classify_finite_generic(const KolmogorovParams& k) {
    PlanarSystem sys = build_system(k);
    std::vector<SingularPoint> pts = finite_points(k);
    for (auto& p : pts) {
        p.jac = jacobian_at(sys, p.x, p.z);
        const int det = p.jac.det().sign();
        if (det != 0) {
            p.type = classify_hyperbolic_exact(p.jac);
            continue;
        }
        if (p.jac.tr().sign() == 0) {
            p.type = LocalType::Degenerate;
            continue;
        }
        if (!p.x.is_rational() || !p.z.is_rational())
            throw std::logic_error("semi-hyperbolic point with irrational coordinates");
        for (int order = 4; ; order += 4) {
            try {
                SemiHyperbolicData data =
                    classify_semi_hyperbolic(sys, p.x.a(), p.z.a(), order);
                p.semi = data;
                p.type = data.type;
                break;
            } catch (const OrderInsufficient&) {
                if (order >= 8) {
                    p.type = LocalType::Degenerate;
                    break;
                }
            }
        }
    }
    return pts;
}

Rational atom_quantity(const KolmogorovParams& k, Qty qty) {
    switch (qty) {
        case Qty::A0: return k.a0;
        case Qty::C0: return k.c0;
        case Qty::C1: return k.c1;
        case Qty::C2: return k.c2;
        case Qty::C3: return k.c3;
        case Qty::Mu: return k.mu;
        case Qty::Disc: return k.disc();
        case Qty::Apc: return k.apc();
        case Qty::RcMinusC3:
            // Rc - c3 with Rc = sqrt(c3^2 - 4 c0 c2): both sides nonnegative,
            // so the sign equals the sign of Rc^2 - c3^2 = -4 c0 c2
            return -(k.c0 * k.c2);
        case Qty::C2Mu: return k.c2 * k.mu;
        case Qty::MuApc: return k.mu * k.apc();
        case Qty::C2Apc: return k.c2 * k.apc();
        case Qty::C1Mu: return k.c1 * k.mu;
    }
    throw std::logic_error("unknown quantity");
}

bool atom_holds(const KolmogorovParams& k, const Atom& atom) {
    const int s = sgn(atom_quantity(k, atom.qty) - atom.rhs);
    switch (atom.rel) {
        case Rel::LT: return s < 0;
        case Rel::EQ: return s == 0;
        case Rel::GT: return s > 0;
        case Rel::NE: return s != 0;
    }
    return false;
}

bool row_matches(const KolmogorovParams& k, const std::vector<Atom>& conditions) {
    for (const auto& a : conditions)
        if (!atom_holds(k, a)) return false;
    return true;
}

int table1_case(const KolmogorovParams& k) {
    const int sd = sgn(k.disc());
    const bool c1mu = sgn(k.c1 * k.mu) != 0;
    if (sd > 0) return c1mu ? 1 : 2;
    if (sd == 0) return c1mu ? 3 : 4;
    return c1mu ? 5 : 6;
}

namespace {

using TypeList = std::vector<std::pair<std::vector<std::string>, LocalType>>;

constexpr auto Sad = LocalType::Saddle;
constexpr auto StN = LocalType::StableNode;
constexpr auto UnN = LocalType::UnstableNode;
constexpr auto SdN = LocalType::SaddleNode;
constexpr auto TSd = LocalType::TopologicalSaddle;
constexpr auto TUN = LocalType::TopologicalUnstableNode;

Atom at(Qty q, Rel r, long long rhs = 0) { return Atom{q, r, Rational(rhs), false}; }

std::vector<FiniteRow> build_finite_rows() {
    std::vector<FiniteRow> rows;
    auto add = [&rows](int major, const char* sub, std::vector<Atom> conds, TypeList types) {
        rows.push_back(FiniteRow{major, sub, std::move(conds), std::move(types)});
    };
    using Lb = std::vector<std::string>;

    // case 1: c3^2 > 4 c0 c2, c1 mu != 0
    add(1, "1.1", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::EQ), at(Qty::Mu, Rel::GT), at(Qty::C2, Rel::LT)},
        {{Lb{"P0", "P1"}, SdN}, {Lb{"P2"}, Sad}, {Lb{"P4"}, Sad}});
    add(1, "1.2", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::EQ), at(Qty::Mu, Rel::GT), at(Qty::C2, Rel::GT)},
        {{Lb{"P0", "P1"}, SdN}, {Lb{"P2"}, UnN}, {Lb{"P4"}, Sad}});
    add(1, "1.3", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::EQ), at(Qty::Mu, Rel::LT), at(Qty::C2, Rel::LT)},
        {{Lb{"P0", "P1"}, SdN}, {Lb{"P2"}, Sad}, {Lb{"P4"}, StN}});
    add(1, "1.4", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::EQ), at(Qty::Mu, Rel::LT), at(Qty::C2, Rel::GT)},
        {{Lb{"P0", "P1"}, SdN}, {Lb{"P2"}, UnN}, {Lb{"P4"}, StN}});
    add(1, "1.5", {at(Qty::A0, Rel::EQ), at(Qty::C0, Rel::GT), at(Qty::C2Mu, Rel::LT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0", "P4"}, SdN}, {Lb{"P1"}, Sad}, {Lb{"P2"}, Sad}});
    add(1, "1.6", {at(Qty::A0, Rel::EQ), at(Qty::C0, Rel::GT), at(Qty::RcMinusC3, Rel::LT), at(Qty::Mu, Rel::GT), at(Qty::C2, Rel::GT)},
        {{Lb{"P0", "P4"}, SdN}, {Lb{"P1"}, Sad}, {Lb{"P2"}, UnN}});
    add(1, "1.7", {at(Qty::A0, Rel::EQ), at(Qty::C0, Rel::GT), at(Qty::Mu, Rel::LT), at(Qty::RcMinusC3, Rel::LT), at(Qty::C2, Rel::GT)},
        {{Lb{"P0", "P4"}, SdN}, {Lb{"P1"}, StN}, {Lb{"P2"}, Sad}});
    add(1, "1.8", {at(Qty::A0, Rel::EQ), at(Qty::C0, Rel::GT), at(Qty::Mu, Rel::LT), at(Qty::C2, Rel::LT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0", "P4"}, SdN}, {Lb{"P1"}, StN}, {Lb{"P2"}, StN}});
    add(1, "1.9", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::LT), at(Qty::Mu, Rel::GT), at(Qty::Apc, Rel::LT), at(Qty::C2, Rel::GT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0"}, Sad}, {Lb{"P1"}, Sad}, {Lb{"P2"}, Sad}, {Lb{"P4"}, StN}});
    add(1, "1.10", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::LT), at(Qty::C2, Rel::LT), at(Qty::Mu, Rel::GT), at(Qty::Apc, Rel::LT), at(Qty::RcMinusC3, Rel::LT)},
        {{Lb{"P0"}, Sad}, {Lb{"P1"}, Sad}, {Lb{"P2"}, StN}, {Lb{"P4"}, StN}});
    add(1, "1.11", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::LT), at(Qty::C2, Rel::LT), at(Qty::Mu, Rel::GT), at(Qty::Apc, Rel::GT), at(Qty::RcMinusC3, Rel::LT)},
        {{Lb{"P0"}, Sad}, {Lb{"P1"}, UnN}, {Lb{"P2"}, Sad}, {Lb{"P4"}, Sad}});
    add(1, "1.12", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::LT), at(Qty::C2, Rel::LT), at(Qty::Mu, Rel::LT), at(Qty::Apc, Rel::GT), at(Qty::RcMinusC3, Rel::LT)},
        {{Lb{"P0"}, Sad}, {Lb{"P1"}, UnN}, {Lb{"P2"}, Sad}, {Lb{"P4"}, StN}});
    add(1, "1.13", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::LT), at(Qty::Mu, Rel::GT), at(Qty::Apc, Rel::GT), at(Qty::C2, Rel::GT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0"}, Sad}, {Lb{"P1"}, UnN}, {Lb{"P2"}, UnN}, {Lb{"P4"}, Sad}});
    add(1, "1.14", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::LT), at(Qty::Mu, Rel::LT), at(Qty::Apc, Rel::GT), at(Qty::C2, Rel::GT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0"}, Sad}, {Lb{"P1"}, UnN}, {Lb{"P2"}, UnN}, {Lb{"P4"}, StN}});
    add(1, "1.15", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::GT), at(Qty::MuApc, Rel::GT), at(Qty::C2Apc, Rel::LT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P1"}, Sad}, {Lb{"P2"}, Sad}, {Lb{"P4"}, Sad}});
    add(1, "1.16", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::GT), at(Qty::MuApc, Rel::LT), at(Qty::C2Apc, Rel::LT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P1"}, Sad}, {Lb{"P2"}, Sad}, {Lb{"P4"}, StN}});
    add(1, "1.17", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::GT), at(Qty::Mu, Rel::GT), at(Qty::RcMinusC3, Rel::LT), at(Qty::Apc, Rel::GT), at(Qty::C2, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P1"}, Sad}, {Lb{"P2"}, UnN}, {Lb{"P4"}, Sad}});
    add(1, "1.18", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::GT), at(Qty::Mu, Rel::LT), at(Qty::RcMinusC3, Rel::LT), at(Qty::Apc, Rel::GT), at(Qty::C2, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P1"}, Sad}, {Lb{"P2"}, UnN}, {Lb{"P4"}, StN}});
    add(1, "1.19", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::GT), at(Qty::Mu, Rel::LT), at(Qty::Apc, Rel::LT), at(Qty::RcMinusC3, Rel::LT), at(Qty::C2, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P1"}, StN}, {Lb{"P2"}, Sad}, {Lb{"P4"}, Sad}});
    add(1, "1.20", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::GT), at(Qty::Mu, Rel::LT), at(Qty::Apc, Rel::LT), at(Qty::C2, Rel::LT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P1"}, StN}, {Lb{"P2"}, StN}, {Lb{"P4"}, Sad}});

    // case 2: c3^2 > 4 c0 c2, c1 mu = 0, a0 > 0 (a0 > 0 is in the case header)
    auto a0pos = at(Qty::A0, Rel::GT);
    add(2, "2.1", {a0pos, at(Qty::C0, Rel::LT), at(Qty::C2Apc, Rel::LT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0"}, Sad}, {Lb{"P1"}, Sad}, {Lb{"P2"}, Sad}});
    add(2, "2.2", {a0pos, at(Qty::C0, Rel::LT), at(Qty::RcMinusC3, Rel::LT), at(Qty::Apc, Rel::LT), at(Qty::C2, Rel::LT)},
        {{Lb{"P0"}, Sad}, {Lb{"P1"}, Sad}, {Lb{"P2"}, StN}});
    add(2, "2.3", {a0pos, at(Qty::C0, Rel::LT), at(Qty::Apc, Rel::GT), at(Qty::RcMinusC3, Rel::LT), at(Qty::C2, Rel::LT)},
        {{Lb{"P0"}, Sad}, {Lb{"P1"}, UnN}, {Lb{"P2"}, Sad}});
    add(2, "2.4", {a0pos, at(Qty::C0, Rel::LT), at(Qty::Apc, Rel::GT), at(Qty::C2, Rel::GT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0"}, Sad}, {Lb{"P1"}, UnN}, {Lb{"P2"}, UnN}});
    add(2, "2.5", {a0pos, at(Qty::C0, Rel::GT), at(Qty::C2Apc, Rel::LT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P1"}, Sad}, {Lb{"P2"}, Sad}});
    add(2, "2.6", {a0pos, at(Qty::C0, Rel::GT), at(Qty::RcMinusC3, Rel::LT), at(Qty::Apc, Rel::GT), at(Qty::C2, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P1"}, Sad}, {Lb{"P2"}, UnN}});
    add(2, "2.7", {a0pos, at(Qty::C0, Rel::GT), at(Qty::Apc, Rel::LT), at(Qty::RcMinusC3, Rel::LT), at(Qty::C2, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P1"}, StN}, {Lb{"P2"}, Sad}});
    add(2, "2.8", {a0pos, at(Qty::C0, Rel::GT), at(Qty::Apc, Rel::LT), at(Qty::C2, Rel::LT), at(Qty::RcMinusC3, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P1"}, StN}, {Lb{"P2"}, StN}});
    add(2, "2.9", {at(Qty::C0, Rel::EQ), a0pos, at(Qty::C2, Rel::LT)},
        {{Lb{"P0", "P1"}, SdN}, {Lb{"P2"}, Sad}});
    add(2, "2.10", {at(Qty::C0, Rel::EQ), a0pos, at(Qty::C2, Rel::GT)},
        {{Lb{"P0", "P1"}, SdN}, {Lb{"P2"}, UnN}});

    // case 3: c3^2 = 4 c0 c2, c1 mu != 0
    add(3, "3.1", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::LT), at(Qty::MuApc, Rel::GT)},
        {{Lb{"P0"}, Sad}, {Lb{"P3"}, SdN}, {Lb{"P4"}, Sad}});
    add(3, "3.2", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::LT), at(Qty::MuApc, Rel::LT)},
        {{Lb{"P0"}, Sad}, {Lb{"P3"}, SdN}, {Lb{"P4"}, StN}});
    add(3, "3.3", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::GT), at(Qty::MuApc, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P3"}, SdN}, {Lb{"P4"}, Sad}});
    add(3, "3.4", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::GT), at(Qty::MuApc, Rel::LT)},
        {{Lb{"P0"}, UnN}, {Lb{"P3"}, SdN}, {Lb{"P4"}, StN}});
    add(3, "3.5", {at(Qty::A0, Rel::EQ), at(Qty::C0, Rel::GT)},
        {{Lb{"P0", "P4"}, SdN}, {Lb{"P3"}, SdN}});
    add(3, "3.6", {at(Qty::C0, Rel::EQ), at(Qty::A0, Rel::GT), at(Qty::C2, Rel::LT), at(Qty::Mu, Rel::GT)},
        {{Lb{"P0", "P3"}, TSd}, {Lb{"P4"}, Sad}});
    add(3, "3.7", {at(Qty::C0, Rel::EQ), at(Qty::A0, Rel::GT), at(Qty::C2, Rel::LT), at(Qty::Mu, Rel::LT)},
        {{Lb{"P0", "P3"}, TSd}, {Lb{"P4"}, StN}});
    add(3, "3.8", {at(Qty::C0, Rel::EQ), at(Qty::A0, Rel::GT), at(Qty::C2, Rel::GT), at(Qty::Mu, Rel::GT)},
        {{Lb{"P0", "P3"}, TUN}, {Lb{"P4"}, Sad}});
    add(3, "3.9", {at(Qty::C0, Rel::EQ), at(Qty::A0, Rel::GT), at(Qty::C2, Rel::GT), at(Qty::Mu, Rel::LT)},
        {{Lb{"P0", "P3"}, TUN}, {Lb{"P4"}, StN}});

    // case 4: c3^2 = 4 c0 c2, c1 mu = 0, a0 > 0
    add(4, "4.1", {a0pos, at(Qty::C0, Rel::LT)}, {{Lb{"P0"}, Sad}, {Lb{"P3"}, SdN}});
    add(4, "4.2", {a0pos, at(Qty::C0, Rel::GT)}, {{Lb{"P0"}, UnN}, {Lb{"P3"}, SdN}});
    add(4, "4.3", {a0pos, at(Qty::C0, Rel::EQ), at(Qty::C2, Rel::LT)}, {{Lb{"P0", "P3"}, TSd}});
    add(4, "4.4", {a0pos, at(Qty::C0, Rel::EQ), at(Qty::C2, Rel::GT)}, {{Lb{"P0", "P3"}, TUN}});

    // case 5: c3^2 < 4 c0 c2, c1 mu != 0
    add(5, "5.1", {at(Qty::A0, Rel::EQ)}, {{Lb{"P0", "P4"}, SdN}});
    add(5, "5.2", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::LT), at(Qty::MuApc, Rel::GT)},
        {{Lb{"P0"}, Sad}, {Lb{"P4"}, Sad}});
    add(5, "5.3", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::LT), at(Qty::MuApc, Rel::LT)},
        {{Lb{"P0"}, Sad}, {Lb{"P4"}, StN}});
    add(5, "5.4", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::GT), at(Qty::MuApc, Rel::GT)},
        {{Lb{"P0"}, UnN}, {Lb{"P4"}, Sad}});
    add(5, "5.5", {at(Qty::A0, Rel::GT), at(Qty::C0, Rel::GT), at(Qty::MuApc, Rel::LT)},
        {{Lb{"P0"}, UnN}, {Lb{"P4"}, StN}});

    // case 6: c3^2 < 4 c0 c2, c1 mu = 0, a0 > 0
    add(6, "6.1", {a0pos, at(Qty::C0, Rel::LT)}, {{Lb{"P0"}, Sad}});
    add(6, "6.2", {a0pos, at(Qty::C0, Rel::GT)}, {{Lb{"P0"}, UnN}});

    return rows;
}

}  // namespace

const std::vector<FiniteRow>& finite_rows() {
    static const std::vector<FiniteRow> rows = build_finite_rows();
    return rows;
}

FiniteClassification classify_finite_closed_form(const KolmogorovParams& k) {
    HypothesisReport rep = check_hypotheses(k);
    if (!rep.satisfies_H1 || k.mu == -1) {
        std::string msg = "classification needs H1 and mu != -1:";
        for (const auto& v : rep.violations) msg += " " + v;
        throw HypothesisViolation(msg);
    }
    const int major = table1_case(k);
    const FiniteRow* match = nullptr;
    for (const auto& row : finite_rows()) {
        if (row.major_case != major) continue;
        if (!row_matches(k, row.conditions)) continue;
        if (match != nullptr)
            throw NoMatchingRow("rows " + match->subcase + " and " + row.subcase +
                                " both match " + k.to_string());
        match = &row;
    }
    if (match == nullptr)
        throw NoMatchingRow("no subcase row of case " + std::to_string(major) + " matches " +
                            k.to_string());
    return FiniteClassification{major, match->subcase, match->types};
}

}  // namespace phaseport
