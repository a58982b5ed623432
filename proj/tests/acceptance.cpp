// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances and thresholds are pinned here, not configurable.

#include <chrono>
#include <cstdio>
#include <map>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "phaseport/classifier.hpp"
#include "phaseport/portrait.hpp"
#include "phaseport/sampling.hpp"
#include "phaseport/verify.hpp"

using namespace phaseport;

namespace {

struct Criterion {
    const char* name;
    std::function<std::string()> run;  // empty string = pass
};

// 1. Every non-erratum row of the finite tables and the global table
//    reproduces from its witness under the closed-form classifier.
std::string criterion_tables() {
    auto reps = enumerate_representatives();
    int finite_checked = 0;
    std::map<std::string, KolmogorovParams> subcase_witness;
    for (const auto& [row, k] : reps)
        subcase_witness.insert({row->subcase, k});
    for (const auto& frow : finite_rows()) {
        auto it = subcase_witness.find(frow.subcase);
        if (it == subcase_witness.end()) return "no witness for finite row " + frow.subcase;
        FiniteClassification fin = classify_finite_closed_form(it->second);
        if (fin.subcase != frow.subcase)
            return "witness for " + frow.subcase + " classified as " + fin.subcase;
        if (fin.types.size() != frow.types.size()) return "type list mismatch at " + frow.subcase;
        for (size_t i = 0; i < fin.types.size(); ++i)
            if (fin.types[i] != frow.types[i]) return "type mismatch at " + frow.subcase;
        ++finite_checked;
    }
    if (finite_checked != 50) return "expected 50 finite rows, saw " + std::to_string(finite_checked);

    int global_pass = 0, erratum_rows = 0;
    for (const auto& [row, k] : reps) {
        PortraitReport rep = classify(k);
        bool o2_annotated = false;
        for (const auto& e : rep.row_errata)
            if (e.field == "O2") o2_annotated = true;
        if (rep.o1.tag != row->o1)
            return "O1 mismatch at " + row->subcase + "/" + row->branch;
        if (rep.o2 != row->o2 && !o2_annotated)
            return "O2 mismatch at " + row->subcase + "/" + row->branch;
        if (rep.g_label != row->g) return "G mismatch at " + row->subcase;
        if (!rep.row_errata.empty())
            ++erratum_rows;
        else
            ++global_pass;
    }
    std::printf("        (finite rows: 50/50, global rows: %d pass + %d erratum-annotated)\n",
                global_pass, erratum_rows);
    return {};
}

// 2. Closed-form finite classifier == generic eigenvalue/center-manifold
//    classifier on 1000 seeded draws, zero mismatches.
std::string criterion_oracle() {
    SuiteResult r = suite_oracle_equivalence(20260810, 1000);
    if (!r.passed()) return r.summary();
    return {};
}

// 3. Index ledger balances to exactly 2 for one witness per global-table
//    sub-row plus 200 random draws; winding residues gate at 0.05 internally.
std::string criterion_poincare_hopf() {
    for (const auto& [row, k] : enumerate_representatives()) {
        IndexLedger ledger = index_ledger(k);
        if (!ledger.balanced)
            return "unbalanced ledger at witness " + k.to_string() + " (row " + row->subcase + ")";
    }
    SuiteResult r = suite_poincare_hopf(20260810, 200);
    if (!r.passed()) return r.summary();
    return {};
}

// 4. The blow-up chains reproduce the printed systems coefficient-for-
//    coefficient, including the mu=-2 dicritical and c1=0 branches.
std::string criterion_blowup_chain() {
    SuiteResult r = suite_blowup_chain(20260810, 64);  // variant cycle covers all branches
    if (!r.passed()) return r.summary();
    return {};
}

// 5. Traced portraits reproduce the published (R, S) for the designated
//    witness set exactly. The full 102-label sweep is a stretch target:
//    run it with PHASEPORT_ACCEPTANCE_FULL_SR=1; its failures are reported,
//    not fatal.
std::string criterion_sr_captions() {
    struct Designated {
        const char* g;
        KolmogorovParams k;
        int r, s;
    };
    const std::vector<Designated> designated = {
        {"G1", {1, 0, 1, -1, 1, 1}, 8, 21},
        {"G19", {1, -1, 1, 1, 3, 2}, 7, 22},
        {"G50", {1, 1, 1, 1, 3, 0}, 5, 18},
        {"G94", {1, 1, 1, 1, 0, 0}, 3, 12},
        {"G95", {1, 1, 0, 1, 0, 1}, 2, 11},
    };
    for (const auto& d : designated) {
        PortraitReport rep = full_report(d.k, true);
        if (rep.g_label != d.g)
            return std::string("witness for ") + d.g + " classified as " + rep.g_label;
        if (!rep.s_count || !rep.r_count) return std::string("tracing failed for ") + d.g;
        if (*rep.s_count != d.s || *rep.r_count != d.r)
            return std::string(d.g) + " traced [R=" + std::to_string(*rep.r_count) +
                   ", S=" + std::to_string(*rep.s_count) + "], published [R=" +
                   std::to_string(d.r) + ", S=" + std::to_string(d.s) + "]";
    }
    if (std::getenv("PHASEPORT_ACCEPTANCE_FULL_SR")) {
        int ok = 0, off = 0, failed = 0;
        for (const auto& [row, k] : enumerate_representatives()) {
            try {
                PortraitReport rep = full_report(k, true);
                auto [cr, cs] = rep.caption;
                if (rep.s_count && rep.r_count && *rep.s_count == cs && *rep.r_count == cr)
                    ++ok;
                else {
                    ++off;
                    std::printf("        (stretch) %s %s/%s traced [R=%d,S=%d] caption [R=%d,S=%d]\n",
                                rep.g_label.c_str(), row->subcase.c_str(), row->branch.c_str(),
                                rep.r_count.value_or(-1), rep.s_count.value_or(-1), cr, cs);
                }
            } catch (const std::exception& e) {
                ++failed;
                std::printf("        (stretch) %s/%s: %s\n", row->subcase.c_str(),
                            row->branch.c_str(), e.what());
            }
        }
        std::printf("        (stretch sweep: %d match, %d differ, %d error; reported, not fatal)\n",
                    ok, off, failed);
    }
    return {};
}

// 6. Darboux residual is identically zero for 1000 draws, exact arithmetic.
std::string criterion_darboux() {
    DrawGenerator gen(20260810);
    for (int i = 0; i < 1000; ++i) {
        KolmogorovParams k = gen.next();
        DarbouxCertificate cert = darboux_certificate(k);
        if (!cert.residual.is_zero()) return "nonzero residual at " + k.to_string();
    }
    return {};
}

// 7. Mirror/time-reversal trajectory agreement within 1e-8 sup-norm on
//    t in [0,5] for 50 draws per operation.
std::string criterion_symmetry() {
    SuiteResult r = suite_symmetry(20260810, 50);
    if (!r.passed()) return r.summary();
    return {};
}

// 8. Contact points: exactly one sign change per line for c1 != 0 (20 lines
//    per draw, 100 draws); exact invariant-line detection for c1 = 0.
std::string criterion_contact() {
    SuiteResult r = suite_contact_points(20260810, 100);
    if (!r.passed()) return r.summary();
    return {};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"1 table reproduction (Tables 2-7 and the global table)", criterion_tables},
        {"2 oracle equivalence (closed-form vs generic, 1000 draws)", criterion_oracle},
        {"3 Poincare-Hopf ledger (all witnesses + 200 draws)", criterion_poincare_hopf},
        {"4 blow-up chain fidelity (printed systems, all branches)", criterion_blowup_chain},
        {"5 S/R caption reproduction (designated witness set)", criterion_sr_captions},
        {"6 Darboux identity (1000 draws, exact)", criterion_darboux},
        {"7 symmetry trajectories (FlipX/FlipZ/TimeReverse, 1e-8)", criterion_symmetry},
        {"8 contact points (Theorem-level sign counts)", criterion_contact},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string err;
        try {
            err = c.run();
        } catch (const std::exception& e) {
            err = e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (err.empty()) {
            std::printf("[PASS] criterion %s (%.1fs)\n", c.name, secs);
        } else {
            std::printf("[FAIL] criterion %s (%.1fs): %s\n", c.name, secs, err.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures;
}
