#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "phaseport/family.hpp"
#include "phaseport/singular.hpp"

namespace phaseport {

struct NotSingularAtOrigin : std::runtime_error {
    NotSingularAtOrigin() : std::runtime_error("origin is not a singular point") {}
};
struct DepthExceeded : std::runtime_error {
    DepthExceeded() : std::runtime_error("blow-up recursion exceeded max_depth") {}
};
struct NoMatchingCase : std::runtime_error {
    explicit NoMatchingCase(const std::string& what) : std::runtime_error(what) {}
};

// F = x Q_m - y P_m from the lowest-degree homogeneous parts; identically
// zero exactly when the singularity is dicritical.
Poly2 characteristic_poly(const PlanarSystem& sys);

// The raw directional blow-up: substitute (x, x z) and divide the second
// component by x. No common factor is cancelled yet.
PlanarSystem blowup_substitution(const PlanarSystem& sys);

// One directional blow-up in the vertical direction: blowup_substitution
// followed by cancelling the common factor x^(m-1) (x^m when dicritical).
// Returns the reduced system and the cancelled power.
std::pair<PlanarSystem, int> vertical_blowup(const PlanarSystem& sys);

struct BlowupTransform {
    enum class Kind { VerticalBlowup, Translation } kind;
    std::string new_var;     // for blow-ups
    Rational offset;         // for translations along the divisor
};

struct BlowupNode {
    PlanarSystem system;
    std::optional<BlowupTransform> transform;  // how this node was reached
    int cancelled_power = 0;
    bool dicritical = false;
    bool quadrant_swap = false;  // vertical blow-ups swap the 2nd and 3rd quadrants
    std::vector<SingularPoint> divisor_singularities;
    std::vector<std::unique_ptr<BlowupNode>> children;  // one per linearly-zero divisor point

    std::string to_json(int indent = 0) const;
};

// Recursive desingularization of a linearly-zero singularity at the origin.
BlowupNode desingularize(const PlanarSystem& sys, int max_depth);

struct LLabel {
    int tag = 0;  // 1..47
    std::string name() const { return "L" + std::to_string(tag); }
    bool operator==(const LLabel&) const = default;
};

// Local phase portrait label of the infinite singular point at the origin of
// chart U1, decided by the published condition sets of the blow-up analysis.
LLabel o1_label(const KolmogorovParams& params);

// Hyperbolic classification of the origin of chart U2 from its linearization.
LocalType o2_classify(const KolmogorovParams& params);

// Published per-point condition sets for the divisor singularities, used to
// cross-check the generic desingularization (tests and full_report).
LocalType q0_published_type(const KolmogorovParams& params);   // c1 != 0 chain
LocalType q1_published_type(const KolmogorovParams& params);   // c1 != 0 chain
LocalType dicritical_r_published_type(const KolmogorovParams& params);  // mu = -2
struct SPointTypes {
    std::optional<LocalType> s0, s1, s2, s3, s4;
};
SPointTypes s_points_published_types(const KolmogorovParams& params);  // c1 = 0 chain

// Sector counts (elliptic, hyperbolic) implied for the designated label set;
// empty when the label is outside that set. Elliptic-vs-hyperbolic ambiguity
// is resolved to elliptic, which the index checks re-verify per run.
std::optional<std::pair<int, int>> label_sector_counts(const LLabel& label);

// index implied by sector counts, 1 + (e-h)/2
int label_index(const LLabel& label);

}  // namespace phaseport
