#pragma once

#include <functional>
#include <string>
#include <vector>

#include "phaseport/family.hpp"
#include "phaseport/poly.hpp"

namespace phaseport {

struct SingularOnCircle : std::runtime_error {
    SingularOnCircle() : std::runtime_error("vector field vanishes on the winding circle") {}
};
struct NonIntegerWinding : std::runtime_error {
    explicit NonIntegerWinding(double residue)
        : std::runtime_error("winding residue " + std::to_string(residue) +
                             " exceeds the 0.05 gate (radius too large or degenerate center)") {}
};
struct OddSectorDifference : std::runtime_error {
    OddSectorDifference() : std::runtime_error("e - h must be even for an isolated singularity") {}
};

struct SectorDecomposition {
    int e = 0, h = 0, p = 0;
};

int sector_index(const SectorDecomposition& s);

// Winding number of the field along a circle around `center`; the angle is
// accumulated with increments clamped to (-pi, pi) and the sample count is
// doubled from `samples` until two consecutive counts agree.
int winding_index(const PlanarSystem& sys, double cx, double cy, double radius, int samples = 1024);

// Same but for an arbitrary callable field (used in chart coordinates).
int winding_index_fn(const std::function<void(double, double, double&, double&)>& field, double cx,
                     double cy, double radius, int samples = 1024);

struct IndexEntry {
    std::string name;
    bool at_infinity = false;
    int index = 0;
    int weight = 0;  // contribution multiplier in the sphere sum
};

struct IndexLedger {
    std::vector<IndexEntry> entries;
    int total = 0;      // sum of weight * index
    bool balanced = false;  // total == 2

    std::string to_string() const;
};

// Poincare-Hopf bookkeeping: finite points count twice (both hemispheres),
// each stored infinite point stands for an antipodal pair and also counts
// twice its index.
IndexLedger poincare_hopf_check(const std::vector<std::pair<std::string, int>>& finite,
                                const std::vector<std::pair<std::string, int>>& infinite);

}  // namespace phaseport
