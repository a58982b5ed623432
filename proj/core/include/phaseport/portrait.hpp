#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "phaseport/blowup.hpp"
#include "phaseport/compactify.hpp"
#include "phaseport/family.hpp"
#include "phaseport/singular.hpp"

namespace phaseport {

struct UnresolvedDegenerate : std::runtime_error {
    explicit UnresolvedDegenerate(const std::string& what) : std::runtime_error(what) {}
};
struct ResolutionInsufficient : std::runtime_error {
    explicit ResolutionInsufficient(const std::string& what) : std::runtime_error(what) {}
};

// Double-precision view of the compactified field across the five charts in
// play (U3 and the four equator charts), with shared arc-length-normalized
// adaptive stepping and chart hand-off.
class CompactFlow {
public:
    explicit CompactFlow(const PlanarSystem& sys);

    int degree() const { return degree_; }
    void field(ChartId chart, double u, double v, double& fu, double& fv) const;

    struct State {
        ChartId chart;
        double u, v;
        SpherePoint sphere() const { return chart_to_sphere(chart, u, v); }
        DiscPoint disc() const {
            SpherePoint s = sphere();
            // the disc shows the northern hemisphere; flip strays
            if (s.y3 < 0) return {-s.y1, -s.y2};
            return {s.y1, s.y2};
        }
    };

    State make_state(const DiscPoint& p) const;
    State make_state(ChartId chart, double u, double v) const;

    // One adaptive Dormand-Prince step of the normalized field; updates h.
    // h_cap bounds the step (used to resolve singular-point approaches).
    // Returns false when the step degenerates (field numerically zero).
    bool step(State& s, double& h, int time_sign, double h_cap = 1e9) const;

    // switch to the chart where the point is best conditioned
    void rebalance_chart(State& s) const;

private:
    struct TermD {
        int i, j;
        double c;
    };
    struct ChartField {
        std::vector<TermD> p, q;
    };
    ChartField u3_, u1_, u2_;
    int degree_ = 0;

    static void eval(const ChartField& f, double u, double v, double& fu, double& fv);
};

struct Orbit {
    enum class Termination { ReachedSingularity, ReachedInfinity, StepLimit };
    std::vector<DiscPoint> points;
    Termination termination = Termination::StepLimit;
    std::string terminal_id;  // singular-point label or equator arc id
};

struct NamedDiscPoint {
    std::string id;
    DiscPoint at;
};

struct IntegrationBudget {
    double max_arc_length = 40.0;
    int max_steps = 400000;
    double singular_tol = 1e-6;
    double birth_radius = 5e-3;  // source-point shield around separatrix launches
};

enum class TimeDirection { Forward, Backward };

// Orbit of the compactified flow through `start`, reported as a polyline in
// disc coordinates with consecutive points at most 0.05 apart.
Orbit integrate_orbit(const CompactFlow& flow, const std::vector<NamedDiscPoint>& singulars,
                      DiscPoint start, TimeDirection direction, const IntegrationBudget& budget);

// Same, but from an exact chart state (disc coordinates are lossy right at
// the equator, where separatrix launches live).
Orbit integrate_orbit(const CompactFlow& flow, const std::vector<NamedDiscPoint>& singulars,
                      CompactFlow::State start, TimeDirection direction,
                      const IntegrationBudget& budget);

// convenience wrapper building the flow and singular-point list from params
Orbit integrate_orbit(const KolmogorovParams& params, DiscPoint start, TimeDirection direction,
                      const IntegrationBudget& budget = {});

enum class SectorClass { In, Out, Elliptic, Pass };

struct SectorBoundary {
    double theta = 0;        // approach direction in U1 chart coordinates
    bool converges_forward = true;  // the boundary orbit tends to the point in forward time
    double u = 0, v = 0;     // launch point in U1 chart coordinates (v < 0 = antipodal side)
    bool axis = false;       // the invariant vertical direction (exact, needs no shooting)
    int chain_power = 0;     // blow-down map: v = u^chain_power * w
    double bu = 0;           // u-offset of the launch in blow-up coordinates
    double w_center = 0;     // w at the candidate in blow-up coordinates
};

struct SectorScan {
    int elliptic = 0, hyperbolic = 0, parabolic = 0;  // full chart-plane counts
    std::vector<SectorBoundary> boundaries;           // interior hyperbolic-sector boundaries
    double radius = 0;
};

// Sector structure around the origin of the U1 chart. Candidate separatrix
// directions come from the blow-up tree (divisor saddle and saddle-node
// branches plus the invariant vertical axis); small-circle orbit probes
// classify the sectors between them and decide which candidates actually
// bound hyperbolic sectors.
SectorScan scan_infinite_sectors(const CompactFlow& flow, const KolmogorovParams& params,
                                 const std::vector<SingularPoint>& finite);

struct SeparatrixItem {
    enum class Kind { FinitePoint, InfinitePoint, EquatorArc, BoundaryOrbit } kind;
    std::string id;
    std::vector<DiscPoint> polyline;
};

struct SeparatrixConfiguration {
    std::vector<SeparatrixItem> separatrices;
    int s_count = 0;
    int r_count = 0;
    std::vector<DiscPoint> region_samples;
    std::vector<std::vector<DiscPoint>> region_orbits;
    SectorScan o1_scan;
};

struct PortraitInputs {
    KolmogorovParams params;
    std::vector<SingularPoint> finite;  // classified, no Degenerate leftovers
    LLabel o1;
    LocalType o2;
};

SeparatrixConfiguration trace_separatrices(const PortraitInputs& inputs);

int count_regions(SeparatrixConfiguration& config, int grid_resolution = 1024);

struct SvgOptions {
    int size = 640;
    bool labels = true;
    std::string title;
};

std::string render_svg(const SeparatrixConfiguration& config, const SvgOptions& options);

}  // namespace phaseport
