#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "phaseport/family.hpp"
#include "phaseport/poly.hpp"

namespace phaseport {

struct NotHyperbolic : std::runtime_error {
    NotHyperbolic() : std::runtime_error("zero eigenvalue: not a hyperbolic point") {}
};
struct NotSemiHyperbolic : std::runtime_error {
    NotSemiHyperbolic() : std::runtime_error("point is not semi-hyperbolic (needs exactly one zero eigenvalue)") {}
};
struct OrderInsufficient : std::runtime_error {
    explicit OrderInsufficient(int order)
        : std::runtime_error("center-manifold drift vanishes to order " + std::to_string(order)) {}
};
struct NoMatchingRow : std::runtime_error {
    explicit NoMatchingRow(const std::string& what) : std::runtime_error(what) {}
};

enum class LocalType {
    Saddle,
    StableNode,
    UnstableNode,
    SaddleNode,
    TopologicalSaddle,
    TopologicalStableNode,
    TopologicalUnstableNode,
    StableFocus,
    UnstableFocus,
    CenterOrFocus,
    Degenerate,
};

std::string local_type_name(LocalType t);
bool is_saddle_like(LocalType t);   // Saddle or TopologicalSaddle
bool is_node_like(LocalType t);     // any node, focus, or CenterOrFocus
int local_type_index(LocalType t);  // -1 saddle, 0 saddle-node, +1 node-like

// Exact 2x2 Jacobian over Q[sqrt(D)]
struct JacobianQ {
    QuadExt j11, j12, j21, j22;
    QuadExt det() const { return j11 * j22 - j12 * j21; }
    QuadExt tr() const { return j11 + j22; }
};

// Outcome of the center-manifold reduction at a semi-hyperbolic point:
// drift a_m xi^m along the center direction, transverse eigenvalue lambda.
struct SemiHyperbolicData {
    LocalType type;
    int drift_order = 0;
    Rational drift_coeff;
    Rational lambda;
    std::array<Rational, 2> center_dir{};      // eigenvector of the zero eigenvalue
    std::array<Rational, 2> transverse_dir{};  // eigenvector of lambda
};

struct SingularPoint {
    std::vector<std::string> labels;  // {"P0"} or merged like {"P0","P1"}
    QuadExt x, z;
    LocalType type = LocalType::Degenerate;
    JacobianQ jac;
    std::optional<SemiHyperbolicData> semi;
    std::string multiplicity_note;

    std::string label_string() const;
    bool has_label(const std::string& l) const;
};

// Locations only; collisions merged and noted (P1 with P0 when c0 = 0,
// P3 with P0 when c3 = 0, P4 with P0 when a0 = 0). Requires H1.
std::vector<SingularPoint> finite_points(const KolmogorovParams& params);

// Classification of a hyperbolic point from its (real) linearization
LocalType classify_hyperbolic(const std::array<std::array<double, 2>, 2>& jacobian);
LocalType classify_hyperbolic_exact(const JacobianQ& jacobian);

// Full linear classification including foci and centers (used on blow-up
// divisor points, which can be foci); center reported as CenterOrFocus.
LocalType classify_nondegenerate_exact(const JacobianQ& jacobian);

// Center-manifold reduction at a rational singular point of an exact system.
// order is the truncation order for the drift; raised internally from 4 to
// max_order on OrderInsufficient by the callers that allow it.
SemiHyperbolicData classify_semi_hyperbolic(const PlanarSystem& sys, const Rational& x0,
                                            const Rational& z0, int order);

JacobianQ jacobian_at(const PlanarSystem& sys, const QuadExt& x, const QuadExt& z);

// generic route: locations -> exact eigenvalues / center manifold, no tables
std::vector<SingularPoint> classify_finite_generic(const KolmogorovParams& params);

struct FiniteClassification {
    int major_case = 0;        // 1..6
    std::string subcase;       // "1.9", ...
    std::vector<std::pair<std::vector<std::string>, LocalType>> types;
};

// closed-form route: Table-1 case plus the per-case condition rows
FiniteClassification classify_finite_closed_form(const KolmogorovParams& params);

// declarative row data (auditable against the printed tables)
enum class Qty { A0, C0, C1, C2, C3, Mu, Disc, Apc, RcMinusC3, C2Mu, MuApc, C2Apc, C1Mu };
enum class Rel { LT, EQ, GT, NE };

struct Atom {
    Qty qty;
    Rel rel;
    Rational rhs;          // threshold, almost always 0
    bool implicit = false; // true when the condition is implied rather than printed
};

struct FiniteRow {
    int major_case;
    std::string subcase;
    std::vector<Atom> conditions;
    std::vector<std::pair<std::vector<std::string>, LocalType>> types;
};

const std::vector<FiniteRow>& finite_rows();
Rational atom_quantity(const KolmogorovParams& params, Qty qty);
bool atom_holds(const KolmogorovParams& params, const Atom& atom);
bool row_matches(const KolmogorovParams& params, const std::vector<Atom>& conditions);
int table1_case(const KolmogorovParams& params);

}  // namespace phaseport
