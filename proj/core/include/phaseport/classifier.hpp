#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phaseport/blowup.hpp"
#include "phaseport/family.hpp"
#include "phaseport/index_theory.hpp"
#include "phaseport/portrait.hpp"
#include "phaseport/singular.hpp"

namespace phaseport {

struct DegenerateFamily : std::runtime_error {
    explicit DegenerateFamily(const std::string& what) : std::runtime_error(what) {}
};
struct CrossCheckMismatch : std::runtime_error {
    explicit CrossCheckMismatch(const std::string& what) : std::runtime_error(what) {}
};
struct WitnessNotFound : std::runtime_error {
    explicit WitnessNotFound(const std::string& what) : std::runtime_error(what) {}
};

struct CaseLabel {
    int major = 0;
    std::string subcase;
    std::string mu_branch;  // sub-row condition, "" when the row has none
};

// One sub-row of the global classification table, encoded as printed.
struct Table8Row {
    int row_id = 0;
    std::string subcase;
    std::string branch;                 // printed condition text ("" if none)
    std::vector<Atom> branch_conditions;
    int o1 = 0;                         // printed L tag
    LocalType o2 = LocalType::Saddle;   // printed O2 type
    std::string g;                      // printed G label
};

struct ErratumNote {
    std::string subcase;
    std::string branch;
    std::string field;      // "O2" or "G"
    std::string printed;
    std::string expected;   // computed (O2) or suspected (G)
    std::string note;
};

const std::vector<Table8Row>& table8_rows();
const std::vector<ErratumNote>& errata();
std::string errata_json();

// published (R, S) caption for a G label
std::pair<int, int> g_caption(const std::string& g);

struct PortraitReport {
    KolmogorovParams input_params;
    KolmogorovParams params;  // normalized
    std::vector<SymmetryOp> ops;
    HypothesisReport hypothesis;
    CaseLabel case_label;
    std::vector<std::pair<std::vector<std::string>, LocalType>> finite_types;
    LLabel o1;                 // computed via the blow-up condition sets
    LocalType o2 = LocalType::Saddle;  // computed via Lemma-style eigenvalues
    int printed_o1 = 0;
    LocalType printed_o2 = LocalType::Saddle;
    std::string g_label;       // printed
    std::pair<int, int> caption{0, 0};  // published (R, S) of g_label
    std::vector<ErratumNote> row_errata;

    bool generic_checked = false;
    bool ledger_done = false;
    IndexLedger ledger;
    std::optional<int> s_count, r_count;
    std::optional<SeparatrixConfiguration> trace;
};

// Table lookup only: hypotheses, Table-1 case, finite subcase, O1/O2, G.
PortraitReport classify(const KolmogorovParams& raw);

// classify + generic-pipeline cross-checks (eigen/center-manifold finite
// classification, blow-up divisor types, winding-index ledger) and optional
// separatrix tracing with S/R counts.
PortraitReport full_report(const KolmogorovParams& raw, bool trace);

// generic finite/infinite data packaged for the tracer
PortraitInputs portrait_inputs(const KolmogorovParams& normalized);

// numerical winding-index ledger over all finite and infinite points
IndexLedger index_ledger(const KolmogorovParams& normalized);

// generic desingularization vs the published divisor-point condition sets;
// an error description on mismatch, nullopt when everything agrees
std::optional<std::string> divisor_types_mismatch(const KolmogorovParams& normalized);

// one exact-rational witness per Table-8 sub-row, found by search over small
// rationals; throws WitnessNotFound if some row has none
std::vector<std::pair<const Table8Row*, KolmogorovParams>> enumerate_representatives();

std::string report_to_json(const PortraitReport& report, bool pretty);

}  // namespace phaseport
