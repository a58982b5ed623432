#include "phaseport/blowup.hpp"

#include <sstream>

#include "phaseport/compactify.hpp"

namespace phaseport {

Poly2 characteristic_poly(const PlanarSystem& sys) {
    if (sys.p.is_zero() && sys.q.is_zero()) throw NotSingularAtOrigin();
    const int mp = sys.p.is_zero() ? INT32_MAX : sys.p.min_degree();
    const int mq = sys.q.is_zero() ? INT32_MAX : sys.q.min_degree();
    const int m = std::min(mp, mq);
    if (m < 1) throw NotSingularAtOrigin();
    Poly2 pm, qm;
    if (mp == m) pm = leading_homogeneous_part(sys.p).second;
    if (mq == m) qm = leading_homogeneous_part(sys.q).second;
    const Poly2 x = Poly2::var(Var::First);
    const Poly2 y = Poly2::var(Var::Second);
    return x * qm - y * pm;
}

PlanarSystem blowup_substitution(const PlanarSystem& sys) {
    const Poly2 x = Poly2::var(Var::First);
    const Poly2 z = Poly2::var(Var::Second);
    const Poly2 xz = x * z;
    PlanarSystem out;
    out.p = poly_compose_substitute(sys.p, x, xz);  // P(x, xz)
    out.q = exact_div_by_power(poly_compose_substitute(sys.q, x, xz) - z * out.p, Var::First, 1);
    out.var_names = sys.var_names;
    return out;
}

std::pair<PlanarSystem, int> vertical_blowup(const PlanarSystem& sys) {
    const Poly2 F = characteristic_poly(sys);  // also validates m >= 1
    const bool dicritical = F.is_zero();
    const int mp = sys.p.is_zero() ? INT32_MAX : sys.p.min_degree();
    const int mq = sys.q.is_zero() ? INT32_MAX : sys.q.min_degree();
    const int m = std::min(mp, mq);

    PlanarSystem sub = blowup_substitution(sys);
    const int cancel = dicritical ? m : m - 1;
    PlanarSystem out;
    out.p = exact_div_by_power(sub.p, Var::First, cancel);
    out.q = exact_div_by_power(sub.q, Var::First, cancel);
    out.var_names = sys.var_names;
    return {out, cancel};
}

namespace {

// roots of a univariate rational-coefficient polynomial, as elements of a
// quadratic extension; the family never needs degree > 2 after deflation
std::vector<QuadExt> univariate_roots(std::vector<Rational> coeffs) {
    while (!coeffs.empty() && sgn(coeffs.back()) == 0) coeffs.pop_back();
    std::vector<QuadExt> roots;
    if (coeffs.empty()) return roots;  // identically zero: caller handles

    // factor out w^s
    size_t s = 0;
    while (s < coeffs.size() && sgn(coeffs[s]) == 0) ++s;
    if (s > 0) {
        roots.emplace_back(QuadExt::from_rational(0));
        coeffs.erase(coeffs.begin(), coeffs.begin() + static_cast<long>(s));
    }
    // deflate small rational roots (covers the cubic that case E produces)
    auto eval = [&](const Rational& w) {
        Rational acc = 0;
        for (size_t i = coeffs.size(); i-- > 0;) acc = acc * w + coeffs[i];
        return acc;
    };
    auto deflate = [&](const Rational& r) {
        std::vector<Rational> q(coeffs.size() - 1);
        Rational carry = coeffs.back();
        for (size_t i = coeffs.size() - 1; i-- > 0;) {
            q[i] = carry;
            carry = coeffs[i] + carry * r;
        }
        coeffs = std::move(q);
    };
    bool progress = true;
    while (coeffs.size() > 3 && progress) {
        progress = false;
        for (int num = -12; num <= 12 && !progress; ++num)
            for (int den = 1; den <= 4 && !progress; ++den) {
                Rational cand(num, den);
                if (sgn(eval(cand)) == 0) {
                    roots.emplace_back(QuadExt::from_rational(cand));
                    deflate(cand);
                    progress = true;
                }
            }
    }
    if (coeffs.size() == 2) {
        roots.emplace_back(QuadExt::from_rational(-coeffs[0] / coeffs[1]));
    } else if (coeffs.size() == 3) {
        const Rational a = coeffs[2], b = coeffs[1], c = coeffs[0];
        const Rational delta = b * b - 4 * a * c;
        if (sgn(delta) == 0) {
            roots.emplace_back(QuadExt::from_rational(-b / (2 * a)));
        } else if (sgn(delta) > 0) {
            roots.emplace_back(QuadExt(-b / (2 * a), Rational(1) / (2 * a), delta));
            roots.emplace_back(QuadExt(-b / (2 * a), Rational(-1) / (2 * a), delta));
        }
    } else if (coeffs.size() > 3) {
        throw std::runtime_error("irreducible divisor factor of degree > 2");
    }
    // dedup (double rational roots found twice by deflation)
    std::vector<QuadExt> unique;
    for (const auto& r : roots) {
        bool seen = false;
        for (const auto& u : unique)
            if ((r - u).is_zero()) seen = true;
        if (!seen) unique.push_back(r);
    }
    return unique;
}

std::vector<Rational> restrict_to_divisor(const Poly2& f) {
    // coefficients of f(0, w) as a univariate polynomial in w
    std::vector<Rational> c;
    for (const auto& [e, v] : f.terms()) {
        if (e.first != 0) continue;
        if (c.size() <= static_cast<size_t>(e.second)) c.resize(e.second + 1, Rational(0));
        c[e.second] = v;
    }
    return c;
}

void desingularize_into(BlowupNode& node, int depth);

// find, classify, and (for linearly-zero ones) recurse on the singular
// points of node.system on the exceptional divisor x = 0
void expand_node(BlowupNode& node, int depth) {
    const PlanarSystem& sys = node.system;

    // singular points on the exceptional divisor x = 0
    std::vector<Rational> pu = restrict_to_divisor(sys.p);
    std::vector<Rational> qu = restrict_to_divisor(sys.q);
    std::vector<QuadExt> roots;
    auto vanishes = [](const std::vector<Rational>& c, const QuadExt& w) {
        QuadExt acc;
        for (size_t i = c.size(); i-- > 0;) acc = acc * w + QuadExt::from_rational(c[i]);
        return acc.is_zero();
    };
    bool p_zero_on_divisor = true;
    for (const auto& c : pu)
        if (sgn(c) != 0) p_zero_on_divisor = false;
    if (p_zero_on_divisor) {
        roots = univariate_roots(qu);
    } else {
        for (const auto& r : univariate_roots(pu))
            if (vanishes(qu, r)) roots.push_back(r);
    }

    int counter = 0;
    for (const auto& w : roots) {
        SingularPoint pt;
        pt.labels = {"D" + std::to_string(counter++)};
        pt.x = QuadExt::from_rational(0);
        pt.z = w;
        pt.jac = jacobian_at(sys, pt.x, pt.z);
        const int det = pt.jac.det().sign();
        const int tr = pt.jac.tr().sign();
        if (det != 0) {
            pt.type = classify_nondegenerate_exact(pt.jac);
        } else if (tr != 0) {
            if (w.is_rational()) {
                for (int order = 4;; order += 4) {
                    try {
                        pt.semi = classify_semi_hyperbolic(sys, Rational(0), w.a(), order);
                        pt.type = pt.semi->type;
                        break;
                    } catch (const OrderInsufficient&) {
                        if (order >= 8) {
                            pt.type = LocalType::Degenerate;
                            break;
                        }
                    }
                }
            } else {
                pt.type = LocalType::Degenerate;
            }
        } else {
            pt.type = LocalType::Degenerate;
            // linearly zero: blow up again, translating the point to the
            // origin first when it is not already there
            if (!w.is_rational())
                throw std::runtime_error("linearly-zero divisor point with irrational coordinate");
            if (w.is_zero()) {
                desingularize_into(node, depth);
            } else {
                auto child = std::make_unique<BlowupNode>();
                const Poly2 x = Poly2::var(Var::First);
                const Poly2 zz = Poly2::var(Var::Second);
                PlanarSystem shifted;
                shifted.p = poly_compose_substitute(sys.p, x, zz + Poly2::constant(w.a()));
                shifted.q = poly_compose_substitute(sys.q, x, zz + Poly2::constant(w.a()));
                shifted.var_names = sys.var_names;
                child->system = shifted;
                child->transform = BlowupTransform{BlowupTransform::Kind::Translation, "", w.a()};
                desingularize_into(*child, depth);
                node.children.push_back(std::move(child));
            }
        }
        node.divisor_singularities.push_back(std::move(pt));
    }
}

void desingularize_into(BlowupNode& node, int depth) {
    if (depth < 0) throw DepthExceeded();
    Poly2 F = characteristic_poly(node.system);
    auto [blown, cancelled] = vertical_blowup(node.system);

    auto child = std::make_unique<BlowupNode>();
    child->system = blown;
    child->transform = BlowupTransform{BlowupTransform::Kind::VerticalBlowup,
                                       node.system.var_names.second + "'", Rational(0)};
    child->cancelled_power = cancelled;
    child->dicritical = F.is_zero();
    child->quadrant_swap = true;
    expand_node(*child, depth - 1);
    node.children.push_back(std::move(child));
}

}  // namespace

BlowupNode desingularize(const PlanarSystem& sys, int max_depth) {
    BlowupNode root;
    root.system = sys;
    desingularize_into(root, max_depth);
    return root;
}

std::string BlowupNode::to_json(int indent) const {
    std::ostringstream os;
    std::string pad(indent, ' ');
    os << pad << "{\n";
    os << pad << "  \"system\": \"" << system.to_string() << "\",\n";
    if (transform) {
        os << pad << "  \"transform\": \""
           << (transform->kind == BlowupTransform::Kind::VerticalBlowup
                   ? "vertical_blowup(" + transform->new_var + ")"
                   : "translate(" + format_rational(transform->offset) + ")")
           << "\",\n";
    }
    os << pad << "  \"cancelled_power\": " << cancelled_power << ",\n";
    os << pad << "  \"dicritical\": " << (dicritical ? "true" : "false") << ",\n";
    os << pad << "  \"divisor_singularities\": [";
    for (size_t i = 0; i < divisor_singularities.size(); ++i) {
        const auto& s = divisor_singularities[i];
        if (i) os << ", ";
        os << "{\"w\": " << s.z.value() << ", \"type\": \"" << local_type_name(s.type) << "\"}";
    }
    os << "],\n";
    os << pad << "  \"children\": [";
    for (size_t i = 0; i < children.size(); ++i) {
        if (i) os << ",";
        os << "\n" << children[i]->to_json(indent + 4);
    }
    if (!children.empty()) os << "\n" << pad << "  ";
    os << "]\n" << pad << "}";
    return os.str();
}

namespace {

void require_h2(const KolmogorovParams& k, const char* who) {
    HypothesisReport rep = check_hypotheses(k);
    if (!rep.satisfies_H2) {
        std::string msg = std::string(who) + " needs H2:";
        for (const auto& v : rep.violations) msg += " " + v;
        throw HypothesisViolation(msg);
    }
}

}  // namespace

LLabel o1_label(const KolmogorovParams& k) {
    require_h2(k, "o1_label");
    const int c2 = sgn(k.c2);
    const int apc = sgn(k.apc());
    const int mu_vs_m2 = sgn(k.mu - Rational(-2));
    const int mu_vs_m1 = sgn(k.mu - Rational(-1));
    const int mu0 = sgn(k.mu);

    if (sgn(k.c1) > 0) {
        if (mu_vs_m2 == 0) {
            // dicritical chain: the single divisor point is a saddle exactly
            // when c2 (a0 - 2 c0) = c2 (a0 + c0 mu) > 0
            const bool saddle = c2 * apc > 0;
            if (saddle) return LLabel{c2 > 0 ? 17 : 18};
            return LLabel{c2 > 0 ? 11 : 8};
        }
        if (mu_vs_m2 > 0 && mu_vs_m1 < 0) {
            // mu in (-2,-1): Q0 is a node, Q1 decides the rest
            if (c2 > 0) return LLabel{apc > 0 ? 15 : 11};
            return LLabel{apc < 0 ? 16 : 8};
        }
        // mu < -2 or mu > -1: Q0 is a saddle
        if (c2 * apc > 0) {
            // Q1 topological saddle
            if (mu_vs_m2 < 0) return LLabel{c2 > 0 ? 1 : 2};
            if (c2 > 0) return LLabel{mu0 > 0 ? 3 : (mu0 < 0 ? 4 : 5)};
            if (mu0 > 0) return LLabel{6};
            if (mu0 < 0) return LLabel{7};
            throw NoMatchingCase("c2<0, mu=0 cannot satisfy c2(a0+c0 mu)>0 under H2");
        }
        // Q1 topological node
        if (mu_vs_m2 < 0) return LLabel{c2 < 0 ? 8 : 11};
        if (c2 > 0) {
            if (mu0 > 0) return LLabel{9};
            if (mu0 < 0) return LLabel{10};
            throw NoMatchingCase("c2>0, mu=0 cannot satisfy c2(a0+c0 mu)<0 under H2");
        }
        return LLabel{mu0 > 0 ? 12 : (mu0 < 0 ? 13 : 14)};
    }

    // c1 = 0 chain
    const int c0 = sgn(k.c0);
    const int c3 = sgn(k.c3);
    const int disc = sgn(k.disc());
    const bool north = mu_vs_m1 > 0;  // S0 saddle side

    if (c0 == 0 && c3 == 0) {  // case A
        if (north) return LLabel{c2 > 0 ? 19 : 20};
        return LLabel{c2 > 0 ? 21 : 22};
    }
    if (c0 == 0) {  // case B
        if (north) return LLabel{c2 > 0 ? 23 : 24};
        return LLabel{c2 > 0 ? 25 : 26};
    }
    if (disc < 0) {  // case C
        if (north) return LLabel{c2 > 0 ? 19 : 20};
        return LLabel{c2 > 0 ? 21 : 22};
    }
    if (disc == 0) {  // case D
        if (north) {
            if (c0 > 0) return LLabel{apc > 0 ? 27 : 28};
            return LLabel{apc > 0 ? 29 : 30};
        }
        if (c2 > 0) return LLabel{apc > 0 ? 31 : 32};
        if (apc > 0) return LLabel{33};
        throw NoMatchingCase("case D with c2<0, mu<-1 forces a0+c0 mu>0");
    }

    // case E: types of S0, S1, S2 decide among L34..L47
    const int rcmc3 = -sgn(k.c0 * k.c2);  // sign of Rc - c3
    auto s0 = north ? LocalType::Saddle : (c2 > 0 ? LocalType::StableNode : LocalType::UnstableNode);
    auto s1 = (c0 * apc < 0) ? LocalType::Saddle
                             : (apc > 0 ? LocalType::StableNode : LocalType::UnstableNode);
    auto s2 = (c0 * apc * rcmc3 < 0) ? LocalType::Saddle
                                     : (apc > 0 ? LocalType::StableNode : LocalType::UnstableNode);

    auto key = [](LocalType a, LocalType b, LocalType c) {
        auto n = [](LocalType t) {
            if (t == LocalType::Saddle) return 0;
            if (t == LocalType::StableNode) return 1;
            return 2;
        };
        return n(a) * 100 + n(b) * 10 + n(c);
    };
    switch (key(s0, s1, s2)) {
        case 0: return LLabel{c0 > 0 ? 34 : 35};  // three saddles, split by position
        case 1: return LLabel{36};
        case 2: return LLabel{37};
        case 10: return LLabel{38};
        case 11: return LLabel{45};
        case 20: return LLabel{47};
        case 22: return LLabel{46};
        case 100: return LLabel{39};
        case 102: return LLabel{40};
        case 110: return LLabel{41};
        case 200: return LLabel{42};
        case 201: return LLabel{43};
        case 211: return LLabel{44};
        default:
            throw NoMatchingCase("divisor type combination is infeasible under H2: " +
                                 local_type_name(s0) + ", " + local_type_name(s1) + ", " +
                                 local_type_name(s2));
    }
}

LocalType o2_classify(const KolmogorovParams& k) {
    require_h2(k, "o2_classify");
    ChartSystem u2 = to_chart(build_system(k), ChartId::U2);
    JacobianQ j = jacobian_at(u2.system, QuadExt::from_rational(0), QuadExt::from_rational(0));
    return classify_hyperbolic_exact(j);
}

LocalType q0_published_type(const KolmogorovParams& k) {
    // Q0 saddle for mu outside [-2,-1]; node inside, stability by sign of c2
    const int m1 = sgn(k.mu - Rational(-1)), m2 = sgn(k.mu - Rational(-2));
    if (m2 < 0 || m1 > 0) return LocalType::Saddle;
    return sgn(k.c2) > 0 ? LocalType::StableNode : LocalType::UnstableNode;
}

LocalType q1_published_type(const KolmogorovParams& k) {
    const Rational c2apc = k.c2 * k.apc();
    const Rational mup2 = k.mu + 2;
    if (sgn(c2apc) > 0) return LocalType::TopologicalSaddle;
    if (sgn(k.c2 * mup2) > 0 && sgn(mup2 * k.apc()) < 0) return LocalType::TopologicalUnstableNode;
    if (sgn(k.c2 * mup2) < 0 && sgn(mup2 * k.apc()) > 0) return LocalType::TopologicalStableNode;
    throw NoMatchingCase("Q1 condition set does not cover " + k.to_string());
}

LocalType dicritical_r_published_type(const KolmogorovParams& k) {
    // mu = -2 chain; beta^2 = c3^2 + 4 c2 (a0 - 2 c0)
    const Rational q = k.c2 * (k.a0 - 2 * k.c0);
    const Rational beta2 = k.c3 * k.c3 + 4 * q;
    if (sgn(q) > 0) return LocalType::Saddle;
    if (sgn(k.c3) == 0) return LocalType::CenterOrFocus;  // linear center bullet
    if (sgn(beta2) < 0)
        return sgn(k.c2 * k.c3) < 0 ? LocalType::StableFocus : LocalType::UnstableFocus;
    return sgn(k.c2 * k.c3) < 0 ? LocalType::StableNode : LocalType::UnstableNode;
}

SPointTypes s_points_published_types(const KolmogorovParams& k) {
    SPointTypes out;
    const int c0 = sgn(k.c0), c2 = sgn(k.c2), c3 = sgn(k.c3);
    const int m1 = sgn(k.mu - Rational(-1));
    const int apc = sgn(k.apc());
    const int disc = sgn(k.disc());

    out.s0 = m1 > 0 ? LocalType::Saddle
                    : (c2 > 0 ? LocalType::StableNode : LocalType::UnstableNode);
    if (c0 != 0 && disc > 0) {
        out.s1 = (c0 * apc < 0) ? LocalType::Saddle
                                : (apc > 0 ? LocalType::StableNode : LocalType::UnstableNode);
        const int rcmc3 = -sgn(k.c0 * k.c2);
        out.s2 = (c0 * apc * rcmc3 < 0)
                     ? LocalType::Saddle
                     : (apc > 0 ? LocalType::StableNode : LocalType::UnstableNode);
    }
    if (c0 != 0 && disc == 0) out.s3 = LocalType::SaddleNode;
    if (c0 == 0 && c3 != 0)
        out.s4 = c2 > 0 ? LocalType::Saddle : LocalType::StableNode;
    return out;
}

std::optional<std::pair<int, int>> label_sector_counts(const LLabel& label) {
    switch (label.tag) {
        case 3: return std::pair{0, 2};
        case 5: return std::pair{0, 4};
        case 8:
        case 9:
        case 11:
        case 12: return std::pair{2, 0};
        case 17: return std::pair{0, 2};
        case 19: return std::pair{0, 4};
        case 34: return std::pair{0, 8};
        case 41: return std::pair{0, 0};
        default: return std::nullopt;
    }
}

int label_index(const LLabel& label) {
    auto eh = label_sector_counts(label);
    if (!eh) throw std::logic_error("no published sector data for " + label.name());
    return 1 + (eh->first - eh->second) / 2;
}

}  // namespace phaseport
