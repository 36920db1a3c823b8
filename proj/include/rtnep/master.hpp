#pragma once

#include <vector>

#include "rtnep/recourse.hpp"

namespace rtnep {

// Disjunctive linearization of the candidate flow-definition rows. The span
// bounds the physical angle difference across one line (radians); per-unit
// angles scale by base MVA, so M_l = theta_span * base_mva / x_l. After each
// solve the Ms are checked against the solution and doubled when binding, at
// most max_doublings times.
struct BigMPolicy {
    double theta_span = 2.0 * 3.14159265358979323846 / 5.0;
    double cap = 1e9;
    int max_doublings = 3;
};

std::vector<double> initial_big_m(const GridCase& c, const BigMPolicy& policy);

// Layout bookkeeping for checks and tests.
struct MasterIndex {
    int var_v = 0;      // candidate build binaries
    int var_alpha = 0;  // worst-case operating cost surrogate
    struct Block {
        int var_theta, var_pg, var_pu, var_flow;
        int row_alpha, row_balance, row_flowdef;
    };
    std::vector<Block> blocks;
};

MixedIntegerProgram build_master(const GridCase& c, const std::vector<Realization>& realizations,
                                 const std::vector<double>& big_m, MasterIndex* index = nullptr);

struct MasterSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    ExpansionPlan plan;
    double alpha = 0.0;
    double total_cost = 0.0;  // investment + sigma * alpha
    double mip_gap = 0.0;
    bool big_m_valid = false;  // validity check passed without exhausting doublings
    int big_m_doublings = 0;
    long nodes = 0;
};

MasterSolution solve_master(const GridCase& c, const std::vector<Realization>& realizations,
                            const BigMPolicy& policy = {}, const MipTolerances& tol = {},
                            const ExpansionPlan* warm_hint = nullptr);

}  // namespace rtnep
