#include "phaseport/portrait.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace phaseport {

namespace {

double dist(const DiscPoint& a, const DiscPoint& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

}  // namespace

CompactFlow::CompactFlow(const PlanarSystem& sys) {
    degree_ = sys.degree();
    auto fill = [](const ChartSystem& cs, ChartField& f) {
        for (const auto& [e, c] : cs.system.p.terms()) f.p.push_back({e.first, e.second, to_double(c)});
        for (const auto& [e, c] : cs.system.q.terms()) f.q.push_back({e.first, e.second, to_double(c)});
    };
    fill(to_chart(sys, ChartId::U3), u3_);
    fill(to_chart(sys, ChartId::U1), u1_);
    fill(to_chart(sys, ChartId::U2), u2_);
}

void CompactFlow::eval(const ChartField& f, double u, double v, double& fu, double& fv) {
    fu = 0;
    fv = 0;
    for (const auto& t : f.p) fu += t.c * std::pow(u, t.i) * std::pow(v, t.j);
    for (const auto& t : f.q) fv += t.c * std::pow(u, t.i) * std::pow(v, t.j);
}

void CompactFlow::field(ChartId chart, double u, double v, double& fu, double& fv) const {
    // V-chart expressions are (-1)^d times the U-chart ones at (-u,-v)
    switch (chart) {
        case ChartId::U3: eval(u3_, u, v, fu, fv); return;
        case ChartId::U1: eval(u1_, u, v, fu, fv); return;
        case ChartId::U2: eval(u2_, u, v, fu, fv); return;
        case ChartId::V1:
            eval(u1_, -u, -v, fu, fv);
            break;
        case ChartId::V2:
            eval(u2_, -u, -v, fu, fv);
            break;
        case ChartId::V3:
            eval(u3_, -u, -v, fu, fv);
            break;
    }
    if (degree_ % 2 == 1) {
        fu = -fu;
        fv = -fv;
    }
}

CompactFlow::State CompactFlow::make_state(const DiscPoint& p) const {
    double r2 = p.x * p.x + p.y * p.y;
    SpherePoint s{p.x, p.y, std::sqrt(std::max(0.0, 1.0 - r2))};
    State st{ChartId::U3, 0, 0};
    // densest chart wins
    double d3 = s.y3, d1 = std::abs(s.y1), d2 = std::abs(s.y2);
    if (d3 >= d1 && d3 >= d2) {
        st.chart = ChartId::U3;
    } else if (d1 >= d2) {
        st.chart = s.y1 > 0 ? ChartId::U1 : ChartId::V1;
    } else {
        st.chart = s.y2 > 0 ? ChartId::U2 : ChartId::V2;
    }
    sphere_to_chart(st.chart, s, st.u, st.v);
    return st;
}

CompactFlow::State CompactFlow::make_state(ChartId chart, double u, double v) const {
    return State{chart, u, v};
}

void CompactFlow::rebalance_chart(State& s) const {
    SpherePoint sp = s.sphere();
    double d3 = sp.y3, d1 = std::abs(sp.y1), d2 = std::abs(sp.y2);
    double cur = 0;
    switch (s.chart) {
        case ChartId::U3: case ChartId::V3: cur = d3; break;
        case ChartId::U1: case ChartId::V1: cur = d1; break;
        case ChartId::U2: case ChartId::V2: cur = d2; break;
    }
    double best = std::max({d3, d1, d2});
    if (best <= cur * 1.25) return;  // hysteresis
    ChartId target;
    if (best == d3)
        target = ChartId::U3;
    else if (best == d1)
        target = sp.y1 > 0 ? ChartId::U1 : ChartId::V1;
    else
        target = sp.y2 > 0 ? ChartId::U2 : ChartId::V2;
    double u, v;
    if (sphere_to_chart(target, sp, u, v)) {
        s.chart = target;
        s.u = u;
        // v is the hemisphere coordinate only in the equator charts
        s.v = target == ChartId::U3 ? v : std::max(0.0, v);
    }
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double A21 = 1.0 / 5;
constexpr double A31 = 3.0 / 40, A32 = 9.0 / 40;
constexpr double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9;
constexpr double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561,
                 A54 = -212.0 / 729;
constexpr double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176,
                 A65 = -5103.0 / 18656;
constexpr double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784,
                 B6 = 11.0 / 84;
constexpr double E1 = 35.0 / 384 - 5179.0 / 57600, E3 = 500.0 / 1113 - 7571.0 / 16695,
                 E4 = 125.0 / 192 - 393.0 / 640, E5 = -2187.0 / 6784 + 92097.0 / 339200,
                 E6 = 11.0 / 84 - 187.0 / 2100, E7 = -1.0 / 40;

}  // namespace

bool CompactFlow::step(State& s, double& h, int time_sign, double h_cap) const {
    h = std::min(h, h_cap);
    auto deriv = [&](double u, double v, double& du, double& dv) -> bool {
        double fu, fv;
        field(s.chart, u, v, fu, fv);
        double n = std::hypot(fu, fv);
        if (n < 1e-300 || !std::isfinite(n)) return false;
        du = time_sign * fu / n;
        dv = time_sign * fv / n;
        return true;
    };
    for (int attempt = 0; attempt < 40; ++attempt) {
        double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v, k5u, k5v, k6u, k6v, k7u, k7v;
        if (!deriv(s.u, s.v, k1u, k1v)) return false;
        if (!deriv(s.u + h * A21 * k1u, s.v + h * A21 * k1v, k2u, k2v)) return false;
        if (!deriv(s.u + h * (A31 * k1u + A32 * k2u), s.v + h * (A31 * k1v + A32 * k2v), k3u, k3v))
            return false;
        if (!deriv(s.u + h * (A41 * k1u + A42 * k2u + A43 * k3u),
                   s.v + h * (A41 * k1v + A42 * k2v + A43 * k3v), k4u, k4v))
            return false;
        if (!deriv(s.u + h * (A51 * k1u + A52 * k2u + A53 * k3u + A54 * k4u),
                   s.v + h * (A51 * k1v + A52 * k2v + A53 * k3v + A54 * k4v), k5u, k5v))
            return false;
        if (!deriv(s.u + h * (A61 * k1u + A62 * k2u + A63 * k3u + A64 * k4u + A65 * k5u),
                   s.v + h * (A61 * k1v + A62 * k2v + A63 * k3v + A64 * k4v + A65 * k5v), k6u, k6v))
            return false;
        double nu = s.u + h * (B1 * k1u + B3 * k3u + B4 * k4u + B5 * k5u + B6 * k6u);
        double nv = s.v + h * (B1 * k1v + B3 * k3v + B4 * k4v + B5 * k5v + B6 * k6v);
        if (!deriv(nu, nv, k7u, k7v)) {
            // the 5th-order landing point sits on a singularity; accept as-is
            s.u = nu;
            s.v = nv;
            return true;
        }
        double eu = h * (E1 * k1u + E3 * k3u + E4 * k4u + E5 * k5u + E6 * k6u + E7 * k7u);
        double ev = h * (E1 * k1v + E3 * k3v + E4 * k4v + E5 * k5v + E6 * k6v + E7 * k7v);
        double err = std::hypot(eu, ev);
        double tol = 1e-10 + 1e-10 * std::hypot(nu, nv);
        if (err <= tol) {
            s.u = nu;
            s.v = nv;
            if (s.chart != ChartId::U3 && s.v < 0) s.v = 0;  // equator is invariant
            double grow = err > 0 ? 0.9 * std::pow(tol / err, 0.2) : 5.0;
            h = std::clamp(h * std::clamp(grow, 0.2, 5.0), 1e-12, 0.02);
            return true;
        }
        h = std::max(1e-12, h * std::clamp(0.9 * std::pow(tol / err, 0.2), 0.2, 0.9));
    }
    return false;
}

Orbit integrate_orbit(const CompactFlow& flow, const std::vector<NamedDiscPoint>& singulars,
                      DiscPoint start, TimeDirection direction, const IntegrationBudget& budget) {
    return integrate_orbit(flow, singulars, flow.make_state(start), direction, budget);
}

Orbit integrate_orbit(const CompactFlow& flow, const std::vector<NamedDiscPoint>& singulars,
                      CompactFlow::State state, TimeDirection direction,
                      const IntegrationBudget& budget) {
    DiscPoint start = state.disc();
    Orbit orbit;
    orbit.points.push_back(start);
    // a separatrix launch sits a hair away from its own source; that point
    // must not terminate the orbit until it has actually left
    std::vector<bool> birth(singulars.size(), false);
    for (size_t i = 0; i < singulars.size(); ++i) {
        double gap = dist(start, singulars[i].at);
        if (gap < 0.5 * budget.singular_tol) {
            orbit.termination = Orbit::Termination::ReachedSingularity;
            orbit.terminal_id = singulars[i].id;
            return orbit;
        }
        birth[i] = gap < budget.birth_radius;
    }
    const int sign = direction == TimeDirection::Forward ? 1 : -1;
    double h = 1e-4;
    double arc = 0;
    DiscPoint last = start;
    for (int step = 0; step < budget.max_steps; ++step) {
        flow.rebalance_chart(state);
        // resolve singular-point approaches instead of stepping across them
        double h_cap = 1e9;
        {
            DiscPoint here = state.disc();
            for (size_t i = 0; i < singulars.size(); ++i) {
                if (birth[i] && arc < 0.02) continue;
                double gap = dist(here, singulars[i].at);
                h_cap = std::min(h_cap, std::max(0.3 * budget.singular_tol, 0.25 * gap));
            }
        }
        if (!flow.step(state, h, sign, h_cap)) {
            orbit.termination = Orbit::Termination::StepLimit;
            return orbit;
        }
        DiscPoint d = state.disc();
        double moved = dist(d, last);
        arc += moved;
        if (moved >= 5e-4) {
            orbit.points.push_back(d);
            last = d;
        }
        for (size_t i = 0; i < singulars.size(); ++i) {
            if (birth[i] && arc < 0.02) continue;
            if (dist(d, singulars[i].at) < budget.singular_tol) {
                orbit.points.push_back(singulars[i].at);
                orbit.termination = Orbit::Termination::ReachedSingularity;
                orbit.terminal_id = singulars[i].id;
                return orbit;
            }
        }
        if (1.0 - d.norm() < 1e-9 && arc >= 0.02) {
            // orbits reaching the equator land on an infinite singular point;
            // snap to it when one is near so the polyline closes up
            const NamedDiscPoint* nearest = nullptr;
            double best = 0.05;
            for (const auto& s : singulars) {
                if (std::abs(s.at.norm() - 1.0) > 1e-9) continue;
                double gap = dist(d, s.at);
                if (gap < best) {
                    best = gap;
                    nearest = &s;
                }
            }
            if (nearest != nullptr) {
                orbit.points.push_back(nearest->at);
                orbit.termination = Orbit::Termination::ReachedSingularity;
                orbit.terminal_id = nearest->id;
                return orbit;
            }
            double theta = std::atan2(d.y, d.x);
            orbit.termination = Orbit::Termination::ReachedInfinity;
            orbit.terminal_id = "arc@" + std::to_string(theta);
            return orbit;
        }
        if (arc > budget.max_arc_length) break;
    }
    orbit.termination = Orbit::Termination::StepLimit;
    return orbit;
}

Orbit integrate_orbit(const KolmogorovParams& params, DiscPoint start, TimeDirection direction,
                      const IntegrationBudget& budget) {
    CompactFlow flow(build_system(params));
    std::vector<NamedDiscPoint> singulars;
    for (const auto& p : classify_finite_generic(params)) {
        singulars.push_back(
            {p.label_string(), disc_project(p.x.value(), p.z.value())});
    }
    singulars.push_back({"O1", {1, 0}});
    singulars.push_back({"O2", {0, 1}});
    singulars.push_back({"V1", {-1, 0}});
    singulars.push_back({"V2", {0, -1}});
    return integrate_orbit(flow, singulars, start, direction, budget);
}

namespace {

std::array<double, 2> unit(double x, double y) {
    double n = std::hypot(x, y);
    return {x / n, y / n};
}

// eigenvector of a real 2x2 matrix for eigenvalue lam
std::array<double, 2> eigenvector(double a, double b, double c, double d, double lam) {
    double r1 = std::hypot(a - lam, b), r2 = std::hypot(c, d - lam);
    if (r1 >= r2 && r1 > 1e-14) return unit(b, lam - a);
    if (r2 > 1e-14) return unit(lam - d, c);
    return {1, 0};
}

// Chart-local probe used by the sector analysis: RK4 with radius-adaptive
// steps on the normalized U1 field. Orbits that truly converge to the origin
// go below 1e-7*r in bounded arc length; passing orbits bottom out far above
// it (the dip depth scales like a sub-linear power of the angular offset).
enum class LocalFate { Converged, Escaped, Timeout };

LocalFate local_fate(const CompactFlow& flow, double u0, double v0, double r, int sign) {
    double u = u0, v = v0;
    auto deriv = [&](double uu, double vv, double& du, double& dv) -> bool {
        double fu, fv;
        flow.field(ChartId::U1, uu, vv, fu, fv);
        double n = std::hypot(fu, fv);
        if (n < 1e-280) return false;
        du = sign * fu / n;
        dv = sign * fv / n;
        return true;
    };
    int steps_deep = 0;  // consecutive steps spent very close to the origin
    for (int i = 0; i < 80000; ++i) {
        double rr = std::hypot(u, v);
        if (rr <= 1e-7 * r) return LocalFate::Converged;
        if (rr >= 3.0 * r) return LocalFate::Escaped;
        // components with different vanishing orders make the last stretch a
        // crawl; lingering this deep for this long can only mean convergence
        if (rr < 1e-4 * r) {
            if (++steps_deep > 5000) return LocalFate::Converged;
        } else {
            steps_deep = 0;
        }
        double h = std::clamp(rr / 10.0, 1e-8 * r, r / 64.0);
        double k1u, k1v, k2u, k2v, k3u, k3v, k4u, k4v;
        if (!deriv(u, v, k1u, k1v)) return LocalFate::Converged;
        if (!deriv(u + 0.5 * h * k1u, v + 0.5 * h * k1v, k2u, k2v)) return LocalFate::Converged;
        if (!deriv(u + 0.5 * h * k2u, v + 0.5 * h * k2v, k3u, k3v)) return LocalFate::Converged;
        if (!deriv(u + h * k3u, v + h * k3v, k4u, k4v)) return LocalFate::Converged;
        u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u);
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    }
    return LocalFate::Timeout;
}

SectorClass classify_angle(const CompactFlow& flow, double r, double theta) {
    double u = r * std::cos(theta), v = r * std::sin(theta);
    bool fwd = local_fate(flow, u, v, r, +1) == LocalFate::Converged;
    bool bwd = local_fate(flow, u, v, r, -1) == LocalFate::Converged;
    if (fwd && bwd) return SectorClass::Elliptic;
    if (fwd) return SectorClass::In;
    if (bwd) return SectorClass::Out;

    // locally-passing orbits can still be elliptic loops that leave the ball
    // and come back through the far side; ask the global flow
    DiscPoint source = v > 0 ? DiscPoint{1, 0} : DiscPoint{-1, 0};
    std::vector<NamedDiscPoint> target{{"src", source}};
    CompactFlow::State st = v >= 0 ? flow.make_state(ChartId::U1, u, v)
                                   : flow.make_state(ChartId::V1, -u, -v);
    IntegrationBudget loop;
    loop.max_arc_length = 8.0;
    loop.max_steps = 120000;
    loop.singular_tol = 1e-4;
    loop.birth_radius = 0;
    bool gf = integrate_orbit(flow, target, st, TimeDirection::Forward, loop).termination ==
              Orbit::Termination::ReachedSingularity;
    bool gb = integrate_orbit(flow, target, st, TimeDirection::Backward, loop).termination ==
              Orbit::Termination::ReachedSingularity;
    if (gf && gb) return SectorClass::Elliptic;
    return SectorClass::Pass;
}

double normalize_angle(double t) {
    while (t < 0) t += 2 * M_PI;
    while (t >= 2 * M_PI) t -= 2 * M_PI;
    return t;
}

// a separatrix candidate direction at the origin of U1, from the blow-up tree
struct SectorCandidate {
    double theta;             // approach angle at small radius
    double u, v;              // launch point in chart coordinates
    bool converges_forward;   // approach time direction
    bool is_axis = false;     // the invariant u = 0 direction
    bool separatrix = false;  // filled by the flank test
    int chain_power = 0;      // blow-down map: v = u^chain_power * w
    double bu = 0;            // u-offset of the launch in blow-up coordinates
    double w_center = 0;      // w at the candidate in blow-up coordinates
};

// launch points for the transverse hyperbolic branches of one divisor point;
// offsets are sized so the launch sits near chart radius r/2
void divisor_candidates(const SingularPoint& pt, int chain_power, double r,
                        std::vector<SectorCandidate>& out) {
    const double w = pt.z.value();
    auto emit = [&](double du, double dw, bool escapes_forward) {
        if (std::abs(du) < 1e-9) return;  // direction along the divisor
        double span = chain_power == 2 ? std::abs(du) : std::abs(du) * std::hypot(1.0, w);
        double eps = (r / 2) / span;
        for (int side : {+1, -1}) {
            double bu = side * eps * du;
            double bw = w + side * eps * dw;
            double v = chain_power == 2 ? bu * bu * bw : bu * bw;
            SectorCandidate cand;
            cand.u = bu;
            cand.v = v;
            cand.theta = normalize_angle(std::atan2(v, bu));
            cand.converges_forward = !escapes_forward;
            cand.chain_power = chain_power;
            cand.bu = bu;
            cand.w_center = bw;
            out.push_back(cand);
        }
    };
    if (pt.type == LocalType::Saddle) {
        double a = pt.jac.j11.value(), b = pt.jac.j12.value();
        double c = pt.jac.j21.value(), d = pt.jac.j22.value();
        double tr = a + d, det = a * d - b * c;
        double disc = std::sqrt(std::max(0.0, tr * tr - 4 * det));
        for (double lam : {(tr + disc) / 2, (tr - disc) / 2}) {
            auto vec = eigenvector(a, b, c, d, lam);
            if (std::abs(vec[0]) < 1e-9) continue;  // along the divisor, collapses
            emit(vec[0], vec[1], lam > 0);
        }
    } else if (pt.type == LocalType::TopologicalSaddle && pt.semi) {
        // center branches transverse to the divisor (odd drift order)
        auto vc = unit(to_double(pt.semi->center_dir[0]), to_double(pt.semi->center_dir[1]));
        if (std::abs(vc[0]) > 1e-9) emit(vc[0], vc[1], sgn(pt.semi->drift_coeff) > 0);
    } else if (pt.type == LocalType::SaddleNode && pt.semi) {
        // transverse branches bound the two blown-down hyperbolic sectors
        auto vt = unit(to_double(pt.semi->transverse_dir[0]), to_double(pt.semi->transverse_dir[1]));
        if (std::abs(vt[0]) > 1e-9) emit(vt[0], vt[1], sgn(pt.semi->lambda) > 0);
    }
}

}  // namespace

SectorScan scan_infinite_sectors(const CompactFlow& flow, const KolmogorovParams& params,
                                 const std::vector<SingularPoint>& finite) {
    SectorScan scan;
    double r = 0.05;
    for (const auto& p : finite) {
        double x = p.x.value();
        if (std::abs(x) > 1e-12) r = std::min(r, std::abs(1.0 / x) / 4.0);
    }
    if (r < 1e-3)
        throw ResolutionInsufficient("a finite singular point sits too close to infinity in chart U1");
    scan.radius = r;

    // candidate directions from the desingularization of the U1 origin
    ChartSystem u1 = to_chart(build_system(params), ChartId::U1);
    BlowupNode tree = desingularize(u1.system, 6);
    std::vector<SectorCandidate> candidates;
    const BlowupNode* node = &tree;
    int chain_power = 0;
    while (!node->children.empty()) {
        node = node->children.back().get();
        if (node->transform && node->transform->kind == BlowupTransform::Kind::VerticalBlowup)
            ++chain_power;
        for (const auto& pt : node->divisor_singularities) {
            if (pt.z.is_zero() && !node->dicritical) continue;  // maps to the equator direction
            divisor_candidates(pt, chain_power, r, candidates);
        }
    }

    // the invariant vertical axis (the plane's horizontal axis at infinity)
    for (int side : {+1, -1}) {
        double fu, fv;
        flow.field(ChartId::U1, 0.0, side * r / 2, fu, fv);
        SectorCandidate axis;
        axis.theta = side > 0 ? M_PI / 2 : 3 * M_PI / 2;
        axis.u = 0;
        axis.v = side * r / 2;
        axis.converges_forward = side > 0 ? fv < 0 : fv > 0;
        axis.is_axis = true;
        candidates.push_back(axis);
    }

    std::sort(candidates.begin(), candidates.end(),
              [](const SectorCandidate& a, const SectorCandidate& b) { return a.theta < b.theta; });

    // divider list: equator directions plus the candidate angles
    struct Divider {
        double theta;
        bool equator;
        int candidate = -1;  // index into candidates
    };
    std::vector<Divider> dividers{{0.0, true}, {M_PI, true}};
    for (size_t i = 0; i < candidates.size(); ++i)
        dividers.push_back({candidates[i].theta, false, static_cast<int>(i)});
    std::sort(dividers.begin(), dividers.end(),
              [](const Divider& a, const Divider& b) { return a.theta < b.theta; });

    const size_t nd = dividers.size();
    auto gap_after = [&](size_t i) {
        double a = dividers[i].theta;
        double b = dividers[(i + 1) % nd].theta + (i + 1 == nd ? 2 * M_PI : 0);
        return std::pair{a, b};
    };

    // flank test: a candidate bounds a hyperbolic sector iff a probe just to
    // one side of it passes by the origin
    std::vector<SectorClass> gap_class(nd);
    for (size_t i = 0; i < nd; ++i) {
        auto [a, b] = gap_after(i);
        if (b - a < 1e-12) {
            gap_class[i] = SectorClass::Pass;  // degenerate gap (coincident candidates)
            continue;
        }
        double mid = normalize_angle(0.5 * (a + b));
        gap_class[i] = classify_angle(flow, r, mid);
    }
    if (std::getenv("PHASEPORT_SCAN_DEBUG")) {
        for (size_t i = 0; i < nd; ++i) {
            auto [a, b] = gap_after(i);
            const char* names[] = {"In", "Out", "Elliptic", "Pass"};
            std::fprintf(stderr, "gap %zu [%.5f, %.5f) class=%s\n", i, a, b,
                         names[static_cast<int>(gap_class[i])]);
        }
    }
    for (size_t i = 0; i < nd; ++i) {
        if (dividers[i].candidate < 0) continue;
        SectorClass before = gap_class[(i + nd - 1) % nd];
        SectorClass after = gap_class[i];
        // a branch bounds separating structure when a hyperbolic probe flanks
        // it, or when it divides an attracting from a repelling parabolic
        // family (the hyperbolic wedge there is too thin for the probes)
        bool pass_flank = before == SectorClass::Pass || after == SectorClass::Pass;
        bool in_out = (before == SectorClass::In && after == SectorClass::Out) ||
                      (before == SectorClass::Out && after == SectorClass::In);
        candidates[dividers[i].candidate].separatrix = pass_flank || in_out;
    }

    // sector counts: merge gaps across dividers that separate nothing
    int e = 0, h = 0, p = 0;
    {
        std::vector<int> breaks;
        for (size_t i = 0; i < nd; ++i) {
            const Divider& d = dividers[(i + 1) % nd];  // divider at the END of gap i
            bool is_break = d.equator;
            if (d.candidate >= 0) {
                const SectorCandidate& c = candidates[d.candidate];
                SectorClass g1 = gap_class[i], g2 = gap_class[(i + 1) % nd];
                is_break = c.separatrix || g1 != g2;
            }
            if (is_break) breaks.push_back(static_cast<int>((i + 1) % nd));
        }
        if (breaks.empty()) {
            // single run around the whole circle (cannot happen with equator dividers)
            ++p;
        } else {
            for (size_t bi = 0; bi < breaks.size(); ++bi) {
                int start = breaks[bi];
                int end = breaks[(bi + 1) % breaks.size()];
                int span = (end - start + static_cast<int>(nd)) % static_cast<int>(nd);
                if (span == 0) span = static_cast<int>(nd);
                // one merged run covering gaps start .. start+span-1
                SectorClass cls = gap_class[start % nd];
                double width = 0;
                for (int k = 0; k < span; ++k) {
                    auto [a, b] = gap_after((start + k) % nd);
                    width += b - a;
                }
                if (width < 1e-9) continue;  // zero-width run between coincident dividers
                if (cls == SectorClass::Elliptic) ++e;
                else if (cls == SectorClass::Pass) ++h;
                else ++p;
            }
        }
    }
    scan.elliptic = e;
    scan.hyperbolic = h;
    scan.parabolic = p;

    // emit the boundary orbits, deduplicating coincident launch angles
    std::vector<const SectorCandidate*> kept;
    for (const auto& c : candidates) {
        if (!c.separatrix) continue;
        kept.push_back(&c);
    }
    for (const auto* c : kept) {
        SectorBoundary sb;
        sb.theta = c->theta;
        sb.converges_forward = c->converges_forward;
        sb.u = c->u;
        sb.v = c->v;
        sb.axis = c->is_axis;
        sb.chain_power = c->chain_power;
        sb.bu = c->bu;
        sb.w_center = c->w_center;
        scan.boundaries.push_back(sb);
    }
    return scan;
}

namespace {

struct Launch {
    std::string source;                  // singular point id it emanates from
    CompactFlow::State state;            // offset start state
    TimeDirection away;                  // direction in which the orbit leaves
    DiscPoint source_disc;
};

std::vector<DiscPoint> resample(const std::vector<DiscPoint>& pl, double step) {
    std::vector<DiscPoint> out;
    if (pl.empty()) return out;
    out.push_back(pl.front());
    double carried = 0;
    for (size_t i = 1; i < pl.size(); ++i) {
        DiscPoint a = pl[i - 1], b = pl[i];
        double seg = dist(a, b);
        if (seg < 1e-15) continue;
        double t = step - carried;
        while (t < seg) {
            out.push_back({a.x + (b.x - a.x) * t / seg, a.y + (b.y - a.y) * t / seg});
            t += step;
        }
        carried = seg - (t - step);
    }
    out.push_back(pl.back());
    return out;
}

double point_segment_dist(const DiscPoint& p, const DiscPoint& a, const DiscPoint& b) {
    double vx = b.x - a.x, vy = b.y - a.y;
    double wx = p.x - a.x, wy = p.y - a.y;
    double vv = vx * vx + vy * vy;
    double t = vv > 0 ? std::clamp((wx * vx + wy * vy) / vv, 0.0, 1.0) : 0.0;
    return std::hypot(p.x - (a.x + t * vx), p.y - (a.y + t * vy));
}

double one_sided_hausdorff(const std::vector<DiscPoint>& a, const std::vector<DiscPoint>& b) {
    double worst = 0;
    for (const auto& p : a) {
        double best = 1e9;
        for (size_t i = 1; i < b.size(); ++i)
            best = std::min(best, point_segment_dist(p, b[i - 1], b[i]));
        if (b.size() == 1) best = dist(p, b[0]);
        worst = std::max(worst, best);
        if (worst > 2e-4) return worst;  // early out
    }
    return worst;
}

bool same_orbit(const std::vector<DiscPoint>& a, const std::vector<DiscPoint>& b) {
    return one_sided_hausdorff(a, b) < 1e-4 && one_sided_hausdorff(b, a) < 1e-4;
}

}  // namespace

SeparatrixConfiguration trace_separatrices(const PortraitInputs& inputs) {
    for (const auto& p : inputs.finite)
        if (p.type == LocalType::Degenerate)
            throw UnresolvedDegenerate("finite point " + p.label_string() + " is unresolved");

    SeparatrixConfiguration config;
    PlanarSystem sys = build_system(inputs.params);
    CompactFlow flow(sys);

    std::vector<NamedDiscPoint> singulars;
    for (const auto& p : inputs.finite)
        singulars.push_back({p.label_string(), disc_project(p.x.value(), p.z.value())});
    singulars.push_back({"O1", {1, 0}});
    singulars.push_back({"O2", {0, 1}});
    singulars.push_back({"V1", {-1, 0}});
    singulars.push_back({"V2", {0, -1}});

    // point separatrices
    for (const auto& p : inputs.finite)
        config.separatrices.push_back({SeparatrixItem::Kind::FinitePoint, p.label_string(),
                                       {disc_project(p.x.value(), p.z.value())}});
    for (const char* id : {"O1", "O2", "V1", "V2"}) {
        DiscPoint at = id[0] == 'O' ? (id[1] == '1' ? DiscPoint{1, 0} : DiscPoint{0, 1})
                                    : (id[1] == '1' ? DiscPoint{-1, 0} : DiscPoint{0, -1});
        config.separatrices.push_back({SeparatrixItem::Kind::InfinitePoint, id, {at}});
    }

    // the four orbits at infinity between consecutive infinite points
    const char* arc_names[4] = {"arc(O1,O2)", "arc(O2,V1)", "arc(V1,V2)", "arc(V2,O1)"};
    for (int k = 0; k < 4; ++k) {
        std::vector<DiscPoint> arc;
        for (int i = 1; i < 64; ++i) {
            double t = (M_PI / 2) * (k + i / 64.0);
            arc.push_back(disc_boundary_at_angle(t));
        }
        config.separatrices.push_back({SeparatrixItem::Kind::EquatorArc, arc_names[k], arc});
    }

    // hyperbolic-sector boundary orbits
    std::vector<Launch> launches;
    const double eps = 1e-6;

    for (const auto& p : inputs.finite) {
        DiscPoint at = disc_project(p.x.value(), p.z.value());
        double px = p.x.value(), pz = p.z.value();
        auto plane_launch = [&](std::array<double, 2> dir, double scale, TimeDirection away) {
            // the disc projection contracts, so grow the offset until the
            // launch is decisively separated from its source on the disc
            DiscPoint start = disc_project(px + scale * dir[0], pz + scale * dir[1]);
            for (int grow = 0; grow < 12 && dist(start, at) < 5e-6; ++grow) {
                scale *= 4;
                start = disc_project(px + scale * dir[0], pz + scale * dir[1]);
            }
            launches.push_back({p.label_string(), flow.make_state(start), away, at});
        };
        if (p.type == LocalType::Saddle) {
            double a = p.jac.j11.value(), b = p.jac.j12.value();
            double c = p.jac.j21.value(), d = p.jac.j22.value();
            double tr = a + d, det = a * d - b * c;
            double disc = std::sqrt(std::max(0.0, tr * tr - 4 * det));
            double lu = (tr + disc) / 2, ls = (tr - disc) / 2;  // lu > 0 > ls
            auto vu = eigenvector(a, b, c, d, lu);
            auto vs = eigenvector(a, b, c, d, ls);
            for (int s : {1, -1}) {
                plane_launch({s * vu[0], s * vu[1]}, eps, TimeDirection::Forward);
                plane_launch({s * vs[0], s * vs[1]}, eps, TimeDirection::Backward);
            }
        } else if (p.type == LocalType::TopologicalSaddle || p.type == LocalType::SaddleNode) {
            if (!p.semi) throw UnresolvedDegenerate("missing center-manifold data at " + p.label_string());
            const auto& si = *p.semi;
            auto vc = unit(to_double(si.center_dir[0]), to_double(si.center_dir[1]));
            auto vt = unit(to_double(si.transverse_dir[0]), to_double(si.transverse_dir[1]));
            const bool lambda_pos = sgn(si.lambda) > 0;
            TimeDirection t_away = lambda_pos ? TimeDirection::Forward : TimeDirection::Backward;
            plane_launch(vt, eps, t_away);
            plane_launch({-vt[0], -vt[1]}, eps, t_away);
            if (p.type == LocalType::TopologicalSaddle) {
                TimeDirection c_away =
                    sgn(si.drift_coeff) > 0 ? TimeDirection::Forward : TimeDirection::Backward;
                plane_launch(vc, eps, c_away);
                plane_launch({-vc[0], -vc[1]}, eps, c_away);
            } else {
                // saddle-node: only the center branch on the hyperbolic side
                int side = lambda_pos ? -sgn(si.drift_coeff) : sgn(si.drift_coeff);
                TimeDirection c_away = lambda_pos ? TimeDirection::Backward : TimeDirection::Forward;
                plane_launch({side * vc[0], side * vc[1]}, eps, c_away);
            }
        }
    }

    // O2 and V2: a saddle there has one interior branch along the z-axis;
    // the axis is exactly invariant, so a macroscopic chart offset is safe
    // (tiny ones collapse below the disc tolerance near the equator)
    if (inputs.o2 == LocalType::Saddle) {
        double lv = -to_double(inputs.params.c2);  // v-direction eigenvalue in chart U2
        TimeDirection away = lv > 0 ? TimeDirection::Forward : TimeDirection::Backward;
        launches.push_back({"O2", flow.make_state(ChartId::U2, 0, 0.02), away, {0, 1}});
        launches.push_back({"V2", flow.make_state(ChartId::V2, 0, 0.02), away, {0, -1}});
    }

    // O1 and V1 go through the blow-up-guided sector analysis; the family's
    // degree is odd, so the southern half of the U1 chart is V1's disc side
    // with time preserved
    SectorScan scan = scan_infinite_sectors(flow, inputs.params, inputs.finite);
    config.o1_scan = scan;
    IntegrationBudget budget;
    std::vector<std::pair<std::string, std::vector<DiscPoint>>> orbits;

    auto chart_state = [&](double u, double v) {
        return v >= 0 ? flow.make_state(ChartId::U1, u, v)
                      : flow.make_state(ChartId::V1, -u, -v);
    };
    for (const auto& sb : scan.boundaries) {
        bool north = sb.v > 0;
        std::string source = north ? "O1" : "V1";
        DiscPoint source_disc = north ? DiscPoint{1, 0} : DiscPoint{-1, 0};
        TimeDirection away = sb.converges_forward ? TimeDirection::Backward : TimeDirection::Forward;
        TimeDirection toward = sb.converges_forward ? TimeDirection::Forward : TimeDirection::Backward;

        if (sb.axis) {
            // exact invariant line, no shooting needed
            launches.push_back({source, chart_state(sb.u, sb.v), away, source_disc});
            continue;
        }

        // Tangential candidates (center-manifold and divisor-saddle branches):
        // near the infinite point every neighbour collapses into the same
        // corner, so shoot at a mid-disc gate instead. The branch is the
        // boundary of its source's basin there; bisect the transversal
        // coordinate on the toward-direction fate.
        double gate_u = (sb.bu > 0 ? 1 : -1) * 0.5;
        auto gate_state = [&](double t) {
            double w = sb.w_center + t;
            double v = sb.chain_power == 2 ? gate_u * gate_u * w : gate_u * w;
            return chart_state(gate_u, v);
        };
        auto toward_fate = [&](double t) {
            IntegrationBudget probe = budget;
            probe.max_arc_length = 12.0;
            probe.max_steps = 150000;
            Orbit o = integrate_orbit(flow, singulars, gate_state(t), toward, probe);
            return o.termination == Orbit::Termination::ReachedSingularity ? o.terminal_id
                                                                           : std::string("none");
        };
        auto emit_ride = [&](double t_star) {
            Orbit out_part = integrate_orbit(flow, singulars, gate_state(t_star), away, budget);
            IntegrationBudget approach = budget;
            approach.max_arc_length = 12.0;
            Orbit in_part = integrate_orbit(flow, singulars, gate_state(t_star), toward, approach);
            std::vector<DiscPoint> pl;
            for (auto it2 = in_part.points.rbegin(); it2 != in_part.points.rend(); ++it2)
                pl.push_back(*it2);
            for (const auto& d : out_part.points) pl.push_back(d);
            orbits.push_back({source, std::move(pl)});
        };
        auto bisect_between = [&](double lo, std::string fate_lo, double hi) {
            for (int it = 0; it < 60 && hi - lo > 1e-14 * (1 + std::abs(sb.w_center)); ++it) {
                double mid = 0.5 * (lo + hi);
                if (toward_fate(mid) == fate_lo)
                    lo = mid;
                else
                    hi = mid;
            }
            return 0.5 * (lo + hi);
        };

        double lo = 0, hi = 0;
        std::string fate_lo, fate_hi;
        bool split = false;
        for (double scale : {1.0, 0.4, 0.15, 0.05}) {
            double T = scale * (1 + std::abs(sb.w_center));
            fate_lo = toward_fate(-T);
            fate_hi = toward_fate(+T);
            if (fate_lo != fate_hi) {
                lo = -T;
                hi = +T;
                split = true;
                break;
            }
        }
        if (!split) {
            launches.push_back({source, chart_state(sb.u, sb.v), away, source_disc});
            continue;
        }
        emit_ride(bisect_between(lo, fate_lo, hi));
    }

    // integrate the remaining launches away from their source; the approach
    // side is a sub-pixel stub, so the source point itself is prepended
    for (const auto& ln : launches) {
        Orbit out_part = integrate_orbit(flow, singulars, ln.state, ln.away, budget);
        std::vector<DiscPoint> pl;
        pl.push_back(ln.source_disc);
        for (const auto& d : out_part.points) pl.push_back(d);
        orbits.push_back({ln.source, std::move(pl)});
    }

    // de-duplicate coinciding orbits (shared invariant-axis segments)
    std::vector<std::vector<DiscPoint>> kept_resampled;
    int sep_counter = 0;
    for (auto& [src, pl] : orbits) {
        std::vector<DiscPoint> rs = resample(pl, 0.005);
        bool dup = false;
        for (const auto& prev : kept_resampled)
            if (same_orbit(rs, prev)) {
                dup = true;
                break;
            }
        if (dup) continue;
        kept_resampled.push_back(rs);
        config.separatrices.push_back({SeparatrixItem::Kind::BoundaryOrbit,
                                       "sep" + std::to_string(sep_counter++) + "(" + src + ")",
                                       std::move(pl)});
    }

    config.s_count = static_cast<int>(config.separatrices.size());
    return config;
}

namespace {

struct Grid {
    int n;
    std::vector<uint8_t> barrier;
    std::vector<int> label;
    Grid(int n_) : n(n_), barrier(n_ * n_, 0), label(n_ * n_, -1) {}
    int idx(int i, int j) const { return j * n + i; }
    double coord(int i) const { return (i + 0.5) / n * 2.0 - 1.0; }
    int pix(double x) const { return std::clamp(static_cast<int>((x + 1.0) / 2.0 * n), 0, n - 1); }
    void mark(double x, double y) {
        int i = pix(x), j = pix(y);
        for (int dj = 0; dj <= 1; ++dj)
            for (int di = 0; di <= 1; ++di) {
                int ii = std::clamp(i + di, 0, n - 1), jj = std::clamp(j + dj, 0, n - 1);
                barrier[idx(ii, jj)] = 1;
            }
    }
};

int flood_count(Grid& g, std::vector<std::pair<int, int>>* interior_picks) {
    const int n = g.n;
    // outside the disc is barrier
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            double x = g.coord(i), y = g.coord(j);
            if (x * x + y * y >= 1.0) g.barrier[g.idx(i, j)] = 1;
        }
    int components = 0;
    std::deque<int> queue;
    for (int j0 = 0; j0 < n; ++j0)
        for (int i0 = 0; i0 < n; ++i0) {
            int root = g.idx(i0, j0);
            if (g.barrier[root] || g.label[root] >= 0) continue;
            int lbl = components++;
            g.label[root] = lbl;
            queue.push_back(root);
            while (!queue.empty()) {
                int cur = queue.front();
                queue.pop_front();
                int ci = cur % n, cj = cur / n;
                const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
                for (int k = 0; k < 4; ++k) {
                    int ni = ci + di[k], nj = cj + dj[k];
                    if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
                    int t = g.idx(ni, nj);
                    if (g.barrier[t] || g.label[t] >= 0) continue;
                    g.label[t] = lbl;
                    queue.push_back(t);
                }
            }
        }
    // pixel depth from the nearest barrier; components that never get off
    // the barriers are rasterization slivers, not canonical regions
    std::vector<int> depth(n * n, -1);
    std::deque<int> dq;
    for (int t = 0; t < n * n; ++t)
        if (g.barrier[t]) {
            depth[t] = 0;
            dq.push_back(t);
        }
    while (!dq.empty()) {
        int cur = dq.front();
        dq.pop_front();
        int ci = cur % n, cj = cur / n;
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
            int ni = ci + di[k], nj = cj + dj[k];
            if (ni < 0 || nj < 0 || ni >= n || nj >= n) continue;
            int t = g.idx(ni, nj);
            if (depth[t] >= 0) continue;
            depth[t] = depth[cur] + 1;
            dq.push_back(t);
        }
    }
    std::vector<int> comp_depth(components, 0);
    for (int t = 0; t < n * n; ++t)
        if (g.label[t] >= 0) comp_depth[g.label[t]] = std::max(comp_depth[g.label[t]], depth[t]);

    const int min_depth = std::max(3, n / 342);  // ~3px at 1024
    int real = 0;
    std::vector<int> remap(components, -1);
    for (int c = 0; c < components; ++c)
        if (comp_depth[c] >= min_depth) remap[c] = real++;

    if (interior_picks) {
        interior_picks->assign(real, {-1, -1});
        std::vector<int> best(real, -1);
        for (int t = 0; t < n * n; ++t) {
            int lbl = g.label[t];
            if (lbl < 0 || remap[lbl] < 0) continue;
            int r = remap[lbl];
            if (depth[t] > best[r]) {
                best[r] = depth[t];
                (*interior_picks)[r] = {t % n, t / n};
            }
        }
    }
    return real;
}

int count_once(const SeparatrixConfiguration& config, int n,
               std::vector<std::pair<int, int>>* picks, Grid* out_grid) {
    Grid g(n);
    double sub = 0.5 / n;  // sub-pixel walk keeps lines connected
    for (const auto& item : config.separatrices) {
        if (item.polyline.size() == 1) {
            g.mark(item.polyline[0].x, item.polyline[0].y);
            continue;
        }
        for (size_t i = 1; i < item.polyline.size(); ++i) {
            DiscPoint a = item.polyline[i - 1], b = item.polyline[i];
            double seg = dist(a, b);
            int steps = std::max(1, static_cast<int>(seg / sub));
            for (int s = 0; s <= steps; ++s) {
                double t = static_cast<double>(s) / steps;
                g.mark(a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t);
            }
        }
    }
    int count = flood_count(g, picks);
    if (out_grid) *out_grid = g;
    return count;
}

}  // namespace

int count_regions(SeparatrixConfiguration& config, int grid_resolution) {
    std::vector<std::pair<int, int>> picks;
    Grid grid(1);
    int r1 = count_once(config, grid_resolution, &picks, &grid);
    int r2 = count_once(config, grid_resolution * 3 / 2, nullptr, nullptr);
    if (r1 != r2)
        throw ResolutionInsufficient("region count changes with the grid (" + std::to_string(r1) +
                                     " vs " + std::to_string(r2) +
                                     "): separatrices too close to resolve");
    config.r_count = r1;
    config.region_samples.clear();
    for (const auto& [i, j] : picks)
        if (i >= 0) config.region_samples.push_back({grid.coord(i), grid.coord(j)});
    return r1;
}

std::string render_svg(const SeparatrixConfiguration& config, const SvgOptions& options) {
    const int size = options.size;
    const double margin = size * 0.05;
    const double scale = (size - 2 * margin) / 2.0;
    auto X = [&](double x) { return margin + (x + 1.0) * scale; };
    auto Y = [&](double y) { return margin + (1.0 - y) * scale; };
    char buf[64];
    auto fmt = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.3f", v);
        return std::string(buf);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
        << "\" viewBox=\"0 0 " << size << " " << size << "\">\n";
    svg << "<title>" << (options.title.empty() ? "phase portrait" : options.title) << "</title>\n";
    svg << "<rect width=\"" << size << "\" height=\"" << size << "\" fill=\"white\"/>\n";
    svg << "<circle cx=\"" << fmt(X(0)) << "\" cy=\"" << fmt(Y(0)) << "\" r=\"" << fmt(scale)
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

    auto path_of = [&](const std::vector<DiscPoint>& pl) {
        std::ostringstream d;
        for (size_t i = 0; i < pl.size(); ++i)
            d << (i == 0 ? "M" : " L") << fmt(X(pl[i].x)) << " " << fmt(Y(pl[i].y));
        return d.str();
    };
    auto arrow_at = [&](const std::vector<DiscPoint>& pl, const char* color) {
        if (pl.size() < 2) return std::string();
        size_t mid = pl.size() / 2;
        DiscPoint a = pl[mid - 1], b = pl[mid];
        double dx = b.x - a.x, dy = b.y - a.y;
        double n = std::hypot(dx, dy);
        if (n < 1e-12) return std::string();
        dx /= n;
        dy /= n;
        double cx = X(b.x), cy = Y(b.y);
        double ux = dx * 6, uy = -dy * 6;  // screen y is flipped
        double px = -uy * 0.5, py = ux * 0.5;
        std::ostringstream t;
        t << "<path d=\"M" << fmt(cx) << " " << fmt(cy) << " L" << fmt(cx - ux + px) << " "
          << fmt(cy - uy + py) << " L" << fmt(cx - ux - px) << " " << fmt(cy - uy - py)
          << " Z\" fill=\"" << color << "\"/>\n";
        return t.str();
    };

    // sample orbits first so separatrices draw above them
    for (const auto& orbit : config.region_orbits) {
        if (orbit.size() < 2) continue;
        svg << "<path d=\"" << path_of(orbit)
            << "\" fill=\"none\" stroke=\"#9a9a9a\" stroke-width=\"0.7\"/>\n";
        svg << arrow_at(orbit, "#9a9a9a");
    }
    for (const auto& item : config.separatrices) {
        if (item.kind == SeparatrixItem::Kind::FinitePoint ||
            item.kind == SeparatrixItem::Kind::InfinitePoint) {
            svg << "<circle cx=\"" << fmt(X(item.polyline[0].x)) << "\" cy=\""
                << fmt(Y(item.polyline[0].y)) << "\" r=\"3.2\" fill=\"black\"/>\n";
            continue;
        }
        svg << "<path d=\"" << path_of(item.polyline)
            << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.4\"/>\n";
        if (item.kind == SeparatrixItem::Kind::BoundaryOrbit) svg << arrow_at(item.polyline, "black");
    }
    if (options.labels && !options.title.empty()) {
        svg << "<text x=\"" << fmt(margin) << "\" y=\"" << fmt(size - margin / 3)
            << "\" font-family=\"sans-serif\" font-size=\"14\">" << options.title << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace phaseport
