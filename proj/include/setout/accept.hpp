#pragma once

#include <string>
#include <vector>

namespace setout {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double seconds = 0.0;
    std::string detail;
};

// Runs the full acceptance suite: one result per criterion, fixed seeds, no
// network. Budgeted criteria fail when they overrun.
std::vector<CriterionResult> run_acceptance();

// Prints one line per criterion; returns a nonzero exit code on any failure.
int acceptance_main();

}  // namespace setout
