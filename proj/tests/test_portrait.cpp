#include <cmath>

#include "doctest.h"
#include "phaseport/classifier.hpp"
#include "phaseport/portrait.hpp"
#include "phaseport/sampling.hpp"

using namespace phaseport;

TEST_CASE("orbits starting on the axes stay on them") {
    KolmogorovParams k{1, 1, 0, 1, 0, 1};
    Orbit on_x = integrate_orbit(k, disc_project(0.4, 0), TimeDirection::Forward);
    for (const auto& p : on_x.points) CHECK(std::abs(p.y) < 1e-9);

    Orbit on_z = integrate_orbit(k, disc_project(0, 0.3), TimeDirection::Forward);
    for (const auto& p : on_z.points) CHECK(std::abs(p.x) < 1e-9);
}

TEST_CASE("orbits never leave the closed disc") {
    DrawGenerator gen(73);
    for (int i = 0; i < 10; ++i) {
        KolmogorovParams k = gen.next();
        Orbit o = integrate_orbit(k, {0.21, 0.13}, TimeDirection::Forward);
        for (const auto& p : o.points) CHECK(p.norm() <= 1.0 + 1e-12);
    }
}

TEST_CASE("orbit termination bookkeeping") {
    KolmogorovParams k{1, 1, 0, 1, 0, 1};  // subcase 6.2, P0 unstable node
    Orbit at_p0 = integrate_orbit(k, {0, 0}, TimeDirection::Forward);
    CHECK(at_p0.termination == Orbit::Termination::ReachedSingularity);
    CHECK(at_p0.points.size() == 1);
    CHECK(at_p0.terminal_id == "P0");

    Orbit fwd = integrate_orbit(k, disc_project(0.1, 0.1), TimeDirection::Forward);
    CHECK(fwd.termination == Orbit::Termination::ReachedSingularity);
    CHECK(fwd.terminal_id != "P0");  // ends at an infinite singular point

    Orbit bwd = integrate_orbit(k, disc_project(0.1, 0.1), TimeDirection::Backward);
    CHECK(bwd.termination == Orbit::Termination::ReachedSingularity);
    CHECK(bwd.terminal_id == "P0");

    // consecutive polyline points stay within the documented disc step
    for (size_t i = 1; i < fwd.points.size(); ++i) {
        double step = std::hypot(fwd.points[i].x - fwd.points[i - 1].x,
                                 fwd.points[i].y - fwd.points[i - 1].y);
        CHECK(step <= 0.05);
    }
}

TEST_CASE("separatrix counts for the designated captions") {
    struct Expect {
        KolmogorovParams k;
        int s, r;
    };
    const Expect table[] = {
        {{1, 1, 0, 1, 0, 1}, 11, 2},   // G95
        {{1, 1, 1, 1, 0, 0}, 12, 3},   // G94
    };
    for (const auto& e : table) {
        PortraitInputs in = portrait_inputs(e.k);
        SeparatrixConfiguration cfg = trace_separatrices(in);
        CHECK(cfg.s_count == e.s);
        CHECK(count_regions(cfg) == e.r);
    }
}

TEST_CASE("counts are shared within a global-table row") {
    // two different draws in row 6.2 / c1=0, mu>-1 give the same (S, R)
    PortraitInputs a = portrait_inputs({1, 1, 0, 1, 0, 1});
    PortraitInputs b = portrait_inputs({2, Rational(1, 2), 0, 2, 1, Rational(1, 4)});
    SeparatrixConfiguration ca = trace_separatrices(a);
    SeparatrixConfiguration cb = trace_separatrices(b);
    CHECK(ca.s_count == cb.s_count);
    CHECK(count_regions(ca) == count_regions(cb));
}

TEST_CASE("separatrix set mirrors under FlipX") {
    KolmogorovParams k{1, 1, 1, 1, 0, 0};
    SymmetryOp flip{SymmetryKind::FlipX};
    PortraitReport base = full_report(k, true);
    PortraitReport other = full_report(flip.apply(k), true);
    const SeparatrixConfiguration& cfg = *base.trace;
    const SeparatrixConfiguration& mirrored = *other.trace;
    REQUIRE(cfg.s_count == mirrored.s_count);
    // every traced boundary orbit has an x-mirrored partner
    for (const auto& item : cfg.separatrices) {
        if (item.kind != SeparatrixItem::Kind::BoundaryOrbit) continue;
        double best = 1e9;
        for (const auto& other : mirrored.separatrices) {
            if (other.kind != SeparatrixItem::Kind::BoundaryOrbit) continue;
            double worst = 0;
            for (size_t s = 0; s < item.polyline.size(); s += 40) {
                DiscPoint p{-item.polyline[s].x, item.polyline[s].y};
                double near = 1e9;
                for (size_t t = 0; t < other.polyline.size(); ++t)
                    near = std::min(near, std::hypot(other.polyline[t].x - p.x,
                                                     other.polyline[t].y - p.y));
                worst = std::max(worst, near);
            }
            best = std::min(best, worst);
        }
        CHECK(best < 1e-3);
    }
}

TEST_CASE("svg output is structurally sound and labelled") {
    KolmogorovParams k{1, 1, 0, 1, 0, 1};
    SeparatrixConfiguration cfg = trace_separatrices(portrait_inputs(k));
    count_regions(cfg);
    SvgOptions opt;
    opt.title = "case 6.2 G95 [R=2, S=11]";
    std::string svg = render_svg(cfg, opt);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
    CHECK(svg.find("<title>case 6.2 G95 [R=2, S=11]</title>") != std::string::npos);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<path") != std::string::npos);
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);

    // determinism: identical inputs produce identical bytes
    std::string again = render_svg(cfg, opt);
    CHECK(svg == again);
}
