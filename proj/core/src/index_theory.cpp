#include "phaseport/index_theory.hpp"

#include <cmath>
#include <sstream>

namespace phaseport {

int sector_index(const SectorDecomposition& s) {
    if ((s.e - s.h) % 2 != 0) throw OddSectorDifference();
    return 1 + (s.e - s.h) / 2;
}

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap_pm_pi(double d) {
    while (d > M_PI) d -= kTwoPi;
    while (d < -M_PI) d += kTwoPi;
    return d;
}

struct AngleProbe {
    const std::function<void(double, double, double&, double&)>& field;
    double cx, cy, radius;
    double at(double theta) const {
        double fx, fy;
        field(cx + radius * std::cos(theta), cy + radius * std::sin(theta), fx, fy);
        if (std::hypot(fx, fy) < 1e-14) throw SingularOnCircle();
        return std::atan2(fy, fx);
    }
};

// Accumulated turn over [ta, tb] with recursive bisection wherever the field
// angle moves fast (blown-up points have the whole rotation squeezed into a
// thin angular zone near the equator, which uniform sampling walks past).
double segment_turn(const AngleProbe& probe, double ta, double aa, double tb, double ab, int depth) {
    double d = wrap_pm_pi(ab - aa);
    if (std::abs(d) <= 0.5 || depth >= 28) return d;
    double tm = 0.5 * (ta + tb);
    double am = probe.at(tm);
    return segment_turn(probe, ta, aa, tm, am, depth + 1) +
           segment_turn(probe, tm, am, tb, ab, depth + 1);
}

double winding_angle(const std::function<void(double, double, double&, double&)>& field, double cx,
                     double cy, double radius, int samples) {
    AngleProbe probe{field, cx, cy, radius};
    double total = 0.0;
    double prev_theta = 0.0, prev_ang = probe.at(0.0);
    for (int i = 1; i <= samples; ++i) {
        double theta = kTwoPi * i / samples;
        double ang = probe.at(theta);
        total += segment_turn(probe, prev_theta, prev_ang, theta, ang, 0);
        prev_theta = theta;
        prev_ang = ang;
    }
    return total / kTwoPi;
}

}  // namespace

int winding_index_fn(const std::function<void(double, double, double&, double&)>& field, double cx,
                     double cy, double radius, int samples) {
    if (samples < 16) samples = 16;
    double turns = winding_angle(field, cx, cy, radius, samples);
    for (int iter = 0; iter < 8; ++iter) {
        double refined = winding_angle(field, cx, cy, radius, samples * 2);
        samples *= 2;
        if (std::lround(refined) == std::lround(turns) &&
            std::abs(refined - std::lround(refined)) < 0.05) {
            turns = refined;
            break;
        }
        turns = refined;
    }
    double residue = std::abs(turns - std::lround(turns));
    if (residue >= 0.05) throw NonIntegerWinding(residue);
    return static_cast<int>(std::lround(turns));
}

int winding_index(const PlanarSystem& sys, double cx, double cy, double radius, int samples) {
    auto field = [&sys](double x, double y, double& fx, double& fy) {
        fx = poly_eval(sys.p, x, y);
        fy = poly_eval(sys.q, x, y);
    };
    return winding_index_fn(field, cx, cy, radius, samples);
}

std::string IndexLedger::to_string() const {
    std::ostringstream os;
    for (const auto& e : entries)
        os << "  " << e.name << (e.at_infinity ? " (infinite)" : " (finite)") << ": index "
           << e.index << " x " << e.weight << "\n";
    os << "  total " << total << (balanced ? " == 2, balanced" : " != 2, NOT balanced");
    return os.str();
}

IndexLedger poincare_hopf_check(const std::vector<std::pair<std::string, int>>& finite,
                                const std::vector<std::pair<std::string, int>>& infinite) {
    IndexLedger ledger;
    for (const auto& [name, idx] : finite) {
        ledger.entries.push_back({name, false, idx, 2});
        ledger.total += 2 * idx;
    }
    for (const auto& [name, idx] : infinite) {
        ledger.entries.push_back({name, true, idx, 2});
        ledger.total += 2 * idx;
    }
    ledger.balanced = ledger.total == 2;
    return ledger;
}

}  // namespace phaseport
