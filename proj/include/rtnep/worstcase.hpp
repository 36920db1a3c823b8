#pragma once

#include <vector>

#include "rtnep/recourse.hpp"

namespace rtnep {

struct InnerIterate {
    int nu = 0;
    double cost = 0.0;  // dispatch optimum at this iterate's realization
    Realization realization;
};

struct InnerState {
    int nu = 0;
    Realization realization;
    DispatchResult dispatch;
    double c_il = 0.0;           // converged inner-loop operating cost
    bool converged = false;      // false when max_iter stopped the loop
    std::vector<InnerIterate> trace;
};

// Closed-form maximizer of the first-order model of the operating cost over
// the uncertainty set: deviating load j gains mu_d[j]*delta_j, deviating unit
// i gains -mu_g[i]*delta_i; the largest strictly positive gains are taken up
// to each budget, ties to the lowest index.
Realization taylor_argmax(const GridCase& c, const Budgets& b, const DispatchResult& dispatch,
                          const Realization& prev);

// Alternates the dispatch solve and the linearized maximization until the
// operating cost is stable within eps_il (relative, denominator floored at 1).
InnerState coordinate_descent(const GridCase& c, const ExpansionPlan& plan, const Budgets& b,
                              const Realization& init, double eps_il, int max_iter = 200,
                              const LpTolerances& tol = {});

struct WorstCaseResult {
    Realization realization;
    DispatchResult dispatch;
    int winner_start = 0;
    int total_inner_iterations = 0;
    std::vector<InnerIterate> winner_trace;
    bool all_converged = true;
};

// Default start set: nominal, the largest deviation-times-cost extremes
// truncated to the budgets, and k_random random vertices.
std::vector<Realization> default_starts(const GridCase& c, const Budgets& b, int k_random,
                                        uint64_t seed);

WorstCaseResult multistart_worst_case(const GridCase& c, const ExpansionPlan& plan,
                                      const Budgets& b, const std::vector<Realization>& starts,
                                      double eps_il, int max_iter = 200,
                                      const LpTolerances& tol = {});

}  // namespace rtnep
