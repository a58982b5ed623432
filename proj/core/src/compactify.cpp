#include "phaseport/compactify.hpp"

#include <cmath>

namespace phaseport {

std::string chart_name(ChartId c) {
    switch (c) {
        case ChartId::U1: return "U1";
        case ChartId::U2: return "U2";
        case ChartId::U3: return "U3";
        case ChartId::V1: return "V1";
        case ChartId::V2: return "V2";
        case ChartId::V3: return "V3";
    }
    return "?";
}

double DiscPoint::norm() const { return std::sqrt(x * x + y * y); }

namespace {

// v^d * f(1/v, u/v) for deg f <= d: monomial x^i y^j -> u^j v^(d-i-j)
Poly2 pullback_x_inf(const Poly2& f, int d) {
    Poly2 r;
    for (const auto& [e, c] : f.terms())
        r.set_coeff(e.second, d - e.first - e.second, r.coeff(e.second, d - e.first - e.second) + c);
    return r;
}

// v^d * f(u/v, 1/v): monomial x^i y^j -> u^i v^(d-i-j)
Poly2 pullback_y_inf(const Poly2& f, int d) {
    Poly2 r;
    for (const auto& [e, c] : f.terms())
        r.set_coeff(e.first, d - e.first - e.second, r.coeff(e.first, d - e.first - e.second) + c);
    return r;
}

}  // namespace

ChartSystem to_chart(const PlanarSystem& sys, ChartId chart) {
    if (sys.p.is_zero() && sys.q.is_zero())
        throw std::invalid_argument("cannot compactify the zero vector field");
    const int d = sys.degree();
    const Poly2 u = Poly2::var(Var::First);
    const Poly2 v = Poly2::var(Var::Second);

    ChartSystem out;
    out.chart = chart;
    out.degree_of_original = d;
    out.system.var_names = {"u", "v"};

    ChartId base = chart;
    bool v_chart = false;
    if (chart == ChartId::V1) { base = ChartId::U1; v_chart = true; }
    if (chart == ChartId::V2) { base = ChartId::U2; v_chart = true; }
    if (chart == ChartId::V3) { base = ChartId::U3; v_chart = true; }

    switch (base) {
        case ChartId::U1: {
            Poly2 pv = pullback_x_inf(sys.p, d);  // v^d P(1/v, u/v)
            Poly2 qv = pullback_x_inf(sys.q, d);
            out.system.p = -(u * pv) + qv;
            out.system.q = -(v * pv);
            break;
        }
        case ChartId::U2: {
            Poly2 pv = pullback_y_inf(sys.p, d);  // v^d P(u/v, 1/v)
            Poly2 qv = pullback_y_inf(sys.q, d);
            out.system.p = pv - u * qv;
            out.system.q = -(v * qv);
            break;
        }
        case ChartId::U3:
            out.system.p = sys.p;
            out.system.q = sys.q;
            break;
        default:
            break;
    }
    if (v_chart) {
        // with V-chart coordinates (u,v) <-> sphere (-1,u,v)/|.| etc., the
        // V-chart expression is (-1)^d times the U-chart one at (-u,-v)
        auto transform = [d](const Poly2& f) {
            Poly2 r;
            for (const auto& [e, c] : f.terms()) {
                int parity = (e.first + e.second + d) % 2;
                r.set_coeff(e.first, e.second, parity == 0 ? c : -c);
            }
            return r;
        };
        out.system.p = transform(out.system.p);
        out.system.q = transform(out.system.q);
    }
    return out;
}

std::vector<InfinitePoint> infinite_singular_points(const PlanarSystem& sys) {
    ChartSystem u1 = to_chart(sys, ChartId::U1);

    // restriction of the U1 system to v = 0
    Poly2 pu, qu;  // univariate in u, kept as Poly2 with j = 0
    for (const auto& [e, c] : u1.system.p.terms())
        if (e.second == 0) pu.set_coeff(e.first, 0, c);
    for (const auto& [e, c] : u1.system.q.terms())
        if (e.second == 0) qu.set_coeff(e.first, 0, c);
    if (pu.is_zero() && qu.is_zero()) throw InfinitelyManyInfinite();

    std::vector<InfinitePoint> pts;
    // common rational roots of pu and qu on the equator; the family only ever
    // produces u = 0, but small rational roots are searched for generic input
    auto is_sing = [&](const Rational& u) {
        return sgn(poly_eval_exact(pu, u, 0)) == 0 && sgn(poly_eval_exact(qu, u, 0)) == 0;
    };
    std::vector<Rational> candidates;
    candidates.emplace_back(0);
    // rational root candidates of the gcd-free content: p/q with small bound
    for (int num = -24; num <= 24; ++num)
        for (int den = 1; den <= 6; ++den)
            if (num != 0) candidates.emplace_back(num, den);
    for (const auto& cand : candidates) {
        if (!is_sing(cand)) continue;
        bool seen = false;
        for (const auto& p : pts)
            if (p.chart == ChartId::U1 && p.u == cand) seen = true;
        if (!seen) pts.push_back({ChartId::U1, cand});
    }

    // origin of U2 is singular iff both components vanish there
    ChartSystem u2 = to_chart(sys, ChartId::U2);
    if (sgn(u2.system.p.coeff(0, 0)) == 0 && sgn(u2.system.q.coeff(0, 0)) == 0)
        pts.push_back({ChartId::U2, Rational(0)});
    return pts;
}

DiscPoint disc_project(double x, double y) {
    double s = std::sqrt(1.0 + x * x + y * y);
    return {x / s, y / s};
}

DiscPoint disc_boundary_at_angle(double theta) {
    return {std::cos(theta), std::sin(theta)};
}

SpherePoint chart_to_sphere(ChartId chart, double u, double v) {
    double a = 0, b = 0, c = 0;
    switch (chart) {
        case ChartId::U3: a = u; b = v; c = 1; break;
        case ChartId::U1: a = 1; b = u; c = v; break;
        case ChartId::U2: a = u; b = 1; c = v; break;
        case ChartId::V1: a = -1; b = u; c = v; break;
        case ChartId::V2: a = u; b = -1; c = v; break;
        case ChartId::V3: a = u; b = v; c = -1; break;
    }
    double n = std::sqrt(a * a + b * b + c * c);
    return {a / n, b / n, c / n};
}

bool sphere_to_chart(ChartId chart, const SpherePoint& s, double& u, double& v) {
    switch (chart) {
        case ChartId::U3:
            if (s.y3 <= 0) return false;
            u = s.y1 / s.y3; v = s.y2 / s.y3; return true;
        case ChartId::U1:
            if (s.y1 <= 0) return false;
            u = s.y2 / s.y1; v = s.y3 / s.y1; return true;
        case ChartId::U2:
            if (s.y2 <= 0) return false;
            u = s.y1 / s.y2; v = s.y3 / s.y2; return true;
        case ChartId::V1:
            if (s.y1 >= 0) return false;
            u = -s.y2 / s.y1; v = -s.y3 / s.y1; return true;
        case ChartId::V2:
            if (s.y2 >= 0) return false;
            u = -s.y1 / s.y2; v = -s.y3 / s.y2; return true;
        case ChartId::V3:
            if (s.y3 >= 0) return false;
            u = -s.y1 / s.y3; v = -s.y2 / s.y3; return true;
    }
    return false;
}

DiscPoint sphere_to_disc(const SpherePoint& s) { return {s.y1, s.y2}; }

}  // namespace phaseport
