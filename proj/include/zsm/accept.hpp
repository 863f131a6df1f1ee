#pragma once

#include <functional>
#include <string>
#include <vector>

namespace zsm {

struct CheckOutcome {
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct Criterion {
    int id = 0;
    std::string name;
    std::function<CheckOutcome()> fn;
};

// The acceptance suite: one entry per gate criterion, each self-contained
// with its tolerances pinned in code.
const std::vector<Criterion>& acceptance_criteria();

// Run every criterion, print one pass/fail line each; returns the number of
// failures.
int run_acceptance(bool verbose = true);

} // namespace zsm
