#pragma once

#include <stdexcept>
#include <string>

namespace fcalc {

// Input or structural problem (bad JSON, d^2 != 0, ring mismatch, ...).
// CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// An assembly or iteration exceeded its configured budget before reaching a
// verdict.  CLI maps this to exit code 3 together with a partial report.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& msg) : std::runtime_error(msg) {}
};

// Knobs shared by the tower/stabilization operators.
struct Options {
    long budget = 200000;  // max generators in one assembled complex
    int cap = 8;           // max suspension/tower iterations
    int window = 6;        // degrees of certified agreement for stabilization
    int degree_cap = 6;    // truncation degree for bar resolutions
    unsigned long seed = 1;
};

inline void check_budget(long generators, long budget, const char* what) {
    if (generators > budget)
        throw BudgetError(std::string(what) + ": assembly needs " +
                          std::to_string(generators) + " generators, budget is " +
                          std::to_string(budget));
}

}  // namespace fcalc
