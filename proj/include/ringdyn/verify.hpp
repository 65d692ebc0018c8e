// verify.hpp — the full acceptance checklist (12 checks)
//
// Expected symbolic forms are embedded as expression strings and parsed at
// runtime so the golden data stays human-auditable.

#pragma once

#include <string>
#include <vector>

namespace ringdyn {

struct CheckResult {
    int id{0};
    std::string name;
    bool pass{false};
    std::string detail; // measured values / first mismatch
};

// Runs all twelve checks over the standard benchmark models; each result is
// independent (one failing check does not abort the rest).
std::vector<CheckResult> run_verification();

std::string verification_report_json(const std::vector<CheckResult>& results);

} // namespace ringdyn
