#pragma once

#include <utility>

#include "rtnep/recourse.hpp"

namespace rtnep {

struct OracleCaps {
    unsigned long long max_vertices = 1'000'000;
    unsigned long long max_plans = 1'000'000;
    double time_limit_s = kInf;
};

// Exact worst case by full vertex enumeration; ties resolved toward the
// lexicographically smallest deviation vector. Ground truth for the inner loop.
std::pair<Realization, double> exact_worst_case(const GridCase& c, const ExpansionPlan& plan,
                                                const Budgets& b, unsigned long long vertex_cap,
                                                const LpTolerances& tol = {});

struct ExactPlanResult {
    ExpansionPlan plan;
    double total_cost = 0.0;  // investment + sigma * worst operating cost
    double worst_cost = 0.0;
    Realization worst;
};

// Exact robust plan by plan-times-vertex enumeration over budget-feasible
// plans. Ground truth for the full algorithm on desk-size cases.
ExactPlanResult exact_robust_plan(const GridCase& c, const Budgets& b, const OracleCaps& caps = {},
                                  const LpTolerances& tol = {});

}  // namespace rtnep
