#pragma once

#include <string>
#include <vector>

namespace smtrace {

struct SuiteResult {
    std::string name;
    bool passed = false;
    std::string detail;  // first failure, or summary of checks run
    double seconds = 0;
};

// Reduced-size oracle suites covering each module; `inject_fault` names a
// suite that is forced to fail (test hook for the failure-reporting path).
std::vector<SuiteResult> run_selftest(const std::string& inject_fault = "");

bool all_passed(const std::vector<SuiteResult>& results);

}  // namespace smtrace
