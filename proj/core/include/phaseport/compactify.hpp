#pragma once

#include <vector>

#include "phaseport/poly.hpp"

namespace phaseport {

struct InfinitelyManyInfinite : std::runtime_error {
    InfinitelyManyInfinite() : std::runtime_error("the restriction to the equator vanishes identically") {}
};

enum class ChartId { U1, U2, U3, V1, V2, V3 };

std::string chart_name(ChartId c);

struct ChartSystem {
    ChartId chart;
    PlanarSystem system;      // variables (u, v); v = 0 is the equator in U1/U2
    int degree_of_original;
};

struct DiscPoint {
    double x = 0, y = 0;
    double norm() const;
};

// Exact polynomial expression of the compactified field in a local chart.
// V-charts are the U-chart systems times (-1)^(d-1).
ChartSystem to_chart(const PlanarSystem& sys, ChartId chart);

struct InfinitePoint {
    ChartId chart;       // U1 (coordinate u on the equator) or U2 (origin)
    Rational u;          // position on v = 0; always 0 for U2
};

// Roots of the U1 chart system on v=0 plus the origin of U2 when singular.
// Antipodal points are implied; callers materialize them with degree parity.
std::vector<InfinitePoint> infinite_singular_points(const PlanarSystem& sys);

DiscPoint disc_project(double x, double y);
DiscPoint disc_boundary_at_angle(double theta);

// Sphere <-> chart conversions used by the orbit integrator. Sphere points
// are unit vectors (y1,y2,y3) with y3 >= 0 on the closed northern hemisphere.
struct SpherePoint {
    double y1 = 0, y2 = 0, y3 = 1;
};

SpherePoint chart_to_sphere(ChartId chart, double u, double v);
bool sphere_to_chart(ChartId chart, const SpherePoint& s, double& u, double& v);
DiscPoint sphere_to_disc(const SpherePoint& s);

}  // namespace phaseport
