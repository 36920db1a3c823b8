#pragma once

#include <memory>
#include <vector>

#include "rtnep/grid.hpp"
#include "rtnep/linsolve.hpp"
#include "rtnep/uncertainty.hpp"

namespace rtnep {

struct ExpansionPlan {
    std::vector<uint8_t> built;  // per candidate, aligned with GridCase::candidate_idx
    double investment_cost = 0.0;
};

ExpansionPlan make_plan(const GridCase& c, std::vector<uint8_t> built);
ExpansionPlan empty_plan(const GridCase& c);

// Operation outcome for a fixed plan and realization. Flows cover all lines in
// case order; unbuilt candidates carry zero flow. mu_d / mu_g are the duals of
// the demand / capacity fixing rows: subgradients of the operating cost in the
// realized demands and capacities.
struct DispatchResult {
    double operating_cost = 0.0;
    std::vector<double> generation;
    std::vector<double> shedding;
    std::vector<double> flows;
    std::vector<double> angles;
    std::vector<double> mu_d;
    std::vector<double> mu_g;
};

// Row/variable layout of the dispatch LP, for dual extraction and reuse.
struct DispatchIndex {
    int var_theta = 0, var_pg = 0, var_pbar = 0, var_pu = 0, var_pd = 0, var_flow = 0;
    std::vector<int> active_lines;  // line indices with a flow-definition row
    int row_balance = 0, row_flowdef = 0, row_genlim = 0, row_shedlim = 0;
    int row_fixdem = 0, row_fixcap = 0, row_ref = 0;
    int num_components = 0;
};

LinearProgram build_dispatch_lp(const GridCase& c, const ExpansionPlan& plan,
                                const Realization& r, DispatchIndex* index = nullptr);

DispatchResult solve_dispatch(const GridCase& c, const ExpansionPlan& plan, const Realization& r,
                              const LpTolerances& tol = {});

// Re-solvable dispatch problem for a fixed plan: only the fixing-row targets
// change across realizations, so repeated solves warm-start from the previous
// basis. Not shareable across threads.
class DispatchSolver {
public:
    DispatchSolver(const GridCase& c, const ExpansionPlan& plan);
    ~DispatchSolver();
    DispatchSolver(DispatchSolver&&) noexcept;

    DispatchResult solve(const Realization& r, const LpTolerances& tol = {});
    const LinearProgram& lp() const { return lp_; }

private:
    const GridCase& case_;
    LinearProgram lp_;
    DispatchIndex index_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace rtnep
