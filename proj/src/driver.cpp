#include "rtnep/driver.hpp"

#include <chrono>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace rtnep {

void SolveConfig::check() const {
    if (!(eps_ol > 0.0)) throw std::invalid_argument("eps_ol must be strictly positive");
    if (!(eps_il > 0.0)) throw std::invalid_argument("eps_il must be strictly positive");
    if (multistart < 0) throw std::invalid_argument("multistart must be nonnegative");
    if (max_outer < 1) throw std::invalid_argument("max_outer must be at least 1");
    if (inner_max_iter < 1) throw std::invalid_argument("inner_max_iter must be at least 1");
}

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

RobustSolveResult solve_robust_tnep(const GridCase& c, const SolveConfig& config) {
    config.check();
    require_valid(c);
    check_budgets(c, config.budgets);

    auto t_start = std::chrono::steady_clock::now();
    RobustSolveResult res;
    SolveLog& log = res.log;

    ExpansionPlan plan = empty_plan(c);  // step 1
    double c_ol = 0.0;
    std::vector<Realization> realizations;

    for (int round = 1; round <= config.max_outer; ++round) {
        auto t_round = std::chrono::steady_clock::now();

        // steps 2-6: worst case for the current plan
        auto starts = default_starts(c, config.budgets, config.multistart, config.seed);
        WorstCaseResult wc = multistart_worst_case(c, plan, config.budgets, starts, config.eps_il,
                                                   config.inner_max_iter, config.lp_tol);
        double c_cd = wc.dispatch.operating_cost;

        bool duplicate = false;
        for (const auto& r : realizations)
            if (r.same_vertex(wc.realization)) { duplicate = true; break; }

        if (duplicate) {
            // the master already guards against this vertex; the bounds are final
            OuterIterate it;
            it.k = round;
            it.plan = plan;
            it.lower_bound = c_ol;
            it.sub_cost = c_cd;
            it.upper_bound = plan.investment_cost + c.sigma * c_cd;
            it.gap = std::abs(it.upper_bound - c_ol) / std::max(std::abs(c_ol), 1.0);
            it.inner_iterations = wc.total_inner_iterations;
            it.inner_all_converged = wc.all_converged;
            it.worst = wc.realization;
            it.inner_trace = wc.winner_trace;
            it.wall_ms = ms_since(t_round);
            bool ok = it.gap <= config.eps_ol;
            log.converged = ok;
            log.stalled = !ok;
            res.plan = plan;
            res.worst = wc.realization;
            res.total_cost = it.upper_bound;
            log.iterations.push_back(std::move(it));
            break;
        }
        realizations.push_back(wc.realization);

        // steps 7-8: master over all stored realizations
        MasterSolution ms = solve_master(c, realizations, config.big_m, config.mip_tol, &plan);
        if (ms.status == SolveStatus::LimitExceeded) {
            log.limit_exceeded = true;
            res.plan = ms.plan;
            res.worst = wc.realization;
            res.total_cost = ms.plan.investment_cost + c.sigma * c_cd;
            break;
        }
        if (ms.status != SolveStatus::Optimal)
            throw NumericalError(0, 0.0, std::string("master solve: ") + to_string(ms.status));

        plan = ms.plan;
        c_ol = ms.total_cost;

        OuterIterate it;
        it.k = round;
        it.plan = plan;
        it.lower_bound = c_ol;
        it.sub_cost = c_cd;
        it.upper_bound = plan.investment_cost + c.sigma * c_cd;  // step 9 left-hand side
        it.gap = std::abs(it.upper_bound - c_ol) / std::max(std::abs(c_ol), 1.0);
        it.inner_iterations = wc.total_inner_iterations;
        it.inner_all_converged = wc.all_converged;
        it.master_big_m_valid = ms.big_m_valid;
        it.master_big_m_doublings = ms.big_m_doublings;
        it.master_nodes = ms.nodes;
        it.worst = wc.realization;
        it.inner_trace = wc.winner_trace;
        it.wall_ms = ms_since(t_round);
        double gap = it.gap;
        res.plan = plan;
        res.worst = wc.realization;
        res.total_cost = it.upper_bound;
        log.iterations.push_back(std::move(it));

        if (gap <= config.eps_ol) {  // step 9
            log.converged = true;
            break;
        }
        if (round == config.max_outer) log.limit_exceeded = true;
        if (ms_since(t_start) / 1000.0 > config.time_limit_s) {
            log.limit_exceeded = true;
            break;
        }
    }

    log.total_wall_ms = ms_since(t_start);
    return res;
}

std::pair<ExpansionPlan, double> deterministic_plan(const GridCase& c, const SolveConfig& config) {
    require_valid(c);
    std::vector<Realization> blocks{nominal_realization(c)};
    MasterSolution ms = solve_master(c, blocks, config.big_m, config.mip_tol, nullptr);
    if (ms.status != SolveStatus::Optimal)
        throw NumericalError(0, 0.0, std::string("deterministic master: ") + to_string(ms.status));
    return {ms.plan, ms.total_cost};
}

void write_log_csv(const SolveLog& log, std::ostream& os, bool with_timings) {
    os << "k,lower_bound,upper_bound,gap,inner_iters,wall_ms\n";
    char buf[256];
    for (const auto& it : log.iterations) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%d,%.0f\n", it.k, it.lower_bound,
                      it.upper_bound, it.gap, it.inner_iterations,
                      with_timings ? it.wall_ms : 0.0);
        os << buf;
    }
}

std::string log_to_json(const GridCase& c, const SolveLog& log, bool with_timings) {
    nlohmann::json doc;
    doc["converged"] = log.converged;
    doc["stalled"] = log.stalled;
    doc["limit_exceeded"] = log.limit_exceeded;
    doc["total_wall_ms"] = with_timings ? log.total_wall_ms : 0.0;
    doc["iterations"] = nlohmann::json::array();
    for (const auto& it : log.iterations) {
        nlohmann::json ji;
        ji["k"] = it.k;
        ji["lower_bound"] = it.lower_bound;
        ji["upper_bound"] = it.upper_bound;
        ji["gap"] = it.gap;
        ji["sub_cost"] = it.sub_cost;
        ji["inner_iterations"] = it.inner_iterations;
        ji["inner_all_converged"] = it.inner_all_converged;
        ji["wall_ms"] = with_timings ? it.wall_ms : 0.0;
        ji["built"] = nlohmann::json::array();
        for (size_t k = 0; k < it.plan.built.size(); ++k)
            if (it.plan.built[k]) ji["built"].push_back(c.lines[c.candidate_idx[k]].id);
        ji["inner_trace"] = nlohmann::json::array();
        for (const auto& tr : it.inner_trace)
            ji["inner_trace"].push_back({{"nu", tr.nu}, {"cost", tr.cost}});
        doc["iterations"].push_back(std::move(ji));
    }
    return doc.dump(2) + "\n";
}

}  // namespace rtnep
