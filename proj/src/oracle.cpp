#include "rtnep/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "bigcount.hpp"

namespace rtnep {

namespace {

// exact_worst_case body with an optional early abort: once the running worst
// cost pushes the plan's total past `abort_total`, the caller cannot prefer
// this plan and enumeration stops.
struct WorstScan {
    Realization best;
    double cost = -kInf;
    bool aborted = false;
};

WorstScan scan_worst(const GridCase& c, const ExpansionPlan& plan, const Budgets& b,
                     unsigned long long vertex_cap, const LpTolerances& tol, double sigma_abort,
                     double abort_total) {
    DispatchSolver solver(c, plan);
    WorstScan out;
    struct Abort {};
    try {
        enumerate_vertices(c, b, vertex_cap, [&](const Realization& r) {
            DispatchResult d = solver.solve(r, tol);
            if (d.operating_cost > out.cost) {  // first strict max wins: lex order
                out.cost = d.operating_cost;
                out.best = r;
                if (plan.investment_cost + sigma_abort * out.cost >= abort_total) {
                    out.aborted = true;
                    throw Abort{};
                }
            }
        });
    } catch (const Abort&) {
    }
    return out;
}

}  // namespace

std::pair<Realization, double> exact_worst_case(const GridCase& c, const ExpansionPlan& plan,
                                                const Budgets& b, unsigned long long vertex_cap,
                                                const LpTolerances& tol) {
    WorstScan s = scan_worst(c, plan, b, vertex_cap, tol, 0.0, kInf);
    return {std::move(s.best), s.cost};
}

ExactPlanResult exact_robust_plan(const GridCase& c, const Budgets& b, const OracleCaps& caps,
                                  const LpTolerances& tol) {
    const int nc = static_cast<int>(c.candidate_idx.size());
    if (nc > 62) {
        throw CapExceededError(detail::pow2(nc).str(),
                               "plan count 2^" + std::to_string(nc) + " exceeds cap");
    }
    unsigned long long nplans = 1ull << nc;
    if (nplans > caps.max_plans)
        throw CapExceededError(std::to_string(nplans),
                               "plan count " + std::to_string(nplans) + " exceeds cap " +
                                   std::to_string(caps.max_plans));
    VertexCount vc = count_vertices(c, b);
    if (vc.exceeds(caps.max_vertices))
        throw CapExceededError(vc.decimal, "vertex count " + vc.decimal + " exceeds cap " +
                                               std::to_string(caps.max_vertices));

    // budget-feasible plans in ascending investment order; once the investment
    // alone reaches the best total, nothing later can win
    std::vector<double> cand_cost(nc);
    for (int k = 0; k < nc; ++k) cand_cost[k] = c.lines[c.candidate_idx[k]].build_cost;
    std::vector<std::pair<double, unsigned long long>> plans;
    plans.reserve(nplans);
    for (unsigned long long mask = 0; mask < nplans; ++mask) {
        double inv = 0.0;
        for (int k = 0; k < nc; ++k)
            if (mask >> k & 1ull) inv += cand_cost[k];
        if (inv <= c.investment_budget) plans.push_back({inv, mask});
    }
    std::sort(plans.begin(), plans.end());

    auto t0 = std::chrono::steady_clock::now();
    ExactPlanResult best;
    best.total_cost = kInf;
    bool have = false;
    for (const auto& [inv, mask] : plans) {
        if (have && inv >= best.total_cost) break;
        if (std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() >
            caps.time_limit_s)
            throw CapExceededError("time", "oracle time limit exceeded");
        std::vector<uint8_t> built(nc, 0);
        for (int k = 0; k < nc; ++k) built[k] = (mask >> k & 1ull) ? 1 : 0;
        ExpansionPlan plan = make_plan(c, std::move(built));
        WorstScan s = scan_worst(c, plan, b, caps.max_vertices, tol, c.sigma,
                                 have ? best.total_cost : kInf);
        if (s.aborted) continue;
        double total = plan.investment_cost + c.sigma * s.cost;
        if (!have || total < best.total_cost) {
            have = true;
            best.plan = std::move(plan);
            best.total_cost = total;
            best.worst_cost = s.cost;
            best.worst = std::move(s.best);
        }
    }
    if (!have) throw std::runtime_error("no budget-feasible plan exists");
    return best;
}

}  // namespace rtnep
