#pragma once

#include <iosfwd>
#include <vector>

#include "rtnep/master.hpp"
#include "rtnep/worstcase.hpp"

namespace rtnep {

struct SolveConfig {
    Budgets budgets;
    double eps_ol = 1e-6;
    double eps_il = 1e-12;
    int multistart = 10;  // random coordinate-descent starts beyond nominal + heuristic
    uint64_t seed = 0;
    int max_outer = 50;
    int inner_max_iter = 200;
    double time_limit_s = kInf;
    BigMPolicy big_m;
    MipTolerances mip_tol;
    LpTolerances lp_tol;

    void check() const;
};

struct OuterIterate {
    int k = 0;                  // outer round, 1-based
    ExpansionPlan plan;         // plan produced by this round's master
    double lower_bound = 0.0;   // master total cost c_ol
    double sub_cost = 0.0;      // worst-case operating cost found by the inner loop
    double upper_bound = 0.0;   // plan investment + sigma * sub_cost
    double gap = 0.0;           // |upper - lower| / max(|lower|, 1)
    int inner_iterations = 0;
    bool inner_all_converged = true;
    bool master_big_m_valid = true;
    int master_big_m_doublings = 0;
    long master_nodes = 0;
    double wall_ms = 0.0;
    Realization worst;
    std::vector<InnerIterate> inner_trace;
};

struct SolveLog {
    std::vector<OuterIterate> iterations;
    bool converged = false;
    bool stalled = false;         // duplicate worst case with residual gap
    bool limit_exceeded = false;  // outer iteration or time limit
    double total_wall_ms = 0.0;
};

struct RobustSolveResult {
    ExpansionPlan plan;
    Realization worst;
    double total_cost = 0.0;  // investment + sigma * worst-case operating cost
    SolveLog log;
};

RobustSolveResult solve_robust_tnep(const GridCase& c, const SolveConfig& config);

// Expansion against the nominal operating point only: a single master solve
// with one nominal block. Matches solve_robust_tnep at zero budgets.
std::pair<ExpansionPlan, double> deterministic_plan(const GridCase& c,
                                                    const SolveConfig& config = {});

// Flat per-iteration CSV: k, lower_bound, upper_bound, gap, inner_iters, wall_ms.
// Wall times are zeroed unless `with_timings` (reproducible outputs by default).
void write_log_csv(const SolveLog& log, std::ostream& os, bool with_timings = false);

// Full structured log including inner traces.
std::string log_to_json(const GridCase& c, const SolveLog& log, bool with_timings = false);

}  // namespace rtnep
