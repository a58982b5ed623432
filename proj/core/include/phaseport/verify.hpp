#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "phaseport/family.hpp"

namespace phaseport {

struct SuiteResult {
    std::string name;
    int checked = 0;
    std::vector<std::pair<KolmogorovParams, std::string>> failures;
    bool passed() const { return failures.empty(); }
    std::string summary() const;
};

// Cross-module property suites shared by `phaseport verify` and the tests.
// All are deterministic under (seed, draws); draw work fans out over
// `threads` workers (0 = read PHASEPORT_THREADS, default 1).
SuiteResult suite_oracle_equivalence(uint64_t seed, int draws, int threads = 0);
SuiteResult suite_poincare_hopf(uint64_t seed, int draws, int threads = 0);
SuiteResult suite_darboux(uint64_t seed, int draws, int threads = 0);
SuiteResult suite_symmetry(uint64_t seed, int draws, int threads = 0);
SuiteResult suite_contact_points(uint64_t seed, int draws, int threads = 0);
SuiteResult suite_blowup_chain(uint64_t seed, int draws, int threads = 0);
SuiteResult suite_partition(uint64_t seed, int draws, int threads = 0);
SuiteResult suite_divisor_types(uint64_t seed, int draws, int threads = 0);

std::vector<SuiteResult> run_all_suites(uint64_t seed, int draws, int threads = 0);

int resolve_thread_count(int requested);

// deterministic parallel map: results land in draw order
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace phaseport
