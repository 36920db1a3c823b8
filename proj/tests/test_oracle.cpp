#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "rtnep/case_io.hpp"
#include "rtnep/oracle.hpp"
#include "rtnep/synth.hpp"

using namespace rtnep;

namespace {
GridCase garver() { return load_case(std::string(RTNEP_DATA_DIR) + "/garver6.json"); }
}

TEST_CASE("zero budgets: the worst case is the nominal point") {
    GridCase c = garver();
    auto [worst, cost] = exact_worst_case(c, empty_plan(c), Budgets{0, 0}, 10);
    CHECK(worst.same_vertex(nominal_realization(c)));
    DispatchResult d = solve_dispatch(c, empty_plan(c), nominal_realization(c));
    CHECK(cost == doctest::Approx(d.operating_cost).epsilon(1e-12));
}

TEST_CASE("single uncertain load deviates exactly when that raises the cost") {
    GridCase c = garver();
    for (size_t j = 1; j < c.loads.size(); ++j) c.loads[j].demand_deviation = 0.0;
    for (auto& g : c.generators) g.capacity_deviation = 0.0;
    c.rebuild_indices();
    auto [worst, cost] = exact_worst_case(c, empty_plan(c), Budgets{1, 0}, 10);
    DispatchResult nominal = solve_dispatch(c, empty_plan(c), nominal_realization(c));
    CHECK(worst.z_d[0] == (cost > nominal.operating_cost ? 1 : 0));
    CHECK(cost >= nominal.operating_cost - 1e-9);
}

TEST_CASE("worst case always dominates arbitrary in-budget realizations") {
    GridCase c = garver();
    auto [worst, cost] = exact_worst_case(c, empty_plan(c), Budgets{2, 1}, 1000);
    DispatchSolver ds(c, empty_plan(c));
    for (const auto& r : sample_realizations(c, Budgets{2, 1}, 25, 3, SampleMode::WithinBudget))
        CHECK(ds.solve(r).operating_cost <= cost + 1e-9 * (1.0 + cost));
}

TEST_CASE("vertex cap propagates with the exact count") {
    GridCase c = garver();
    try {
        exact_worst_case(c, empty_plan(c), Budgets{5, 3}, 100);
        FAIL("expected cap error");
    } catch (const CapExceededError& e) {
        CHECK(e.exact_count == "256");
    }
}

TEST_CASE("no candidates collapses to the worst-case dispatch of the fixed grid") {
    GridCase c = garver();
    c.lines.resize(6);  // drop every candidate
    c.rebuild_indices();
    ExactPlanResult res = exact_robust_plan(c, Budgets{1, 1});
    CHECK(res.plan.built.empty());
    auto [worst, cost] = exact_worst_case(c, empty_plan(c), Budgets{1, 1}, 1000);
    CHECK(res.total_cost == doctest::Approx(c.sigma * cost).epsilon(1e-12));
}

TEST_CASE("budget below the cheapest candidate forces the empty plan") {
    GridCase c = garver();
    c.investment_budget = 10.0;  // cheapest candidate costs 20
    ExactPlanResult res = exact_robust_plan(c, Budgets{1, 0});
    for (auto v : res.plan.built) CHECK(v == 0);
}

TEST_CASE("plan cap triggers before any enumeration") {
    GridCase c = garver();
    OracleCaps caps;
    caps.max_plans = 100;  // 2^15 plans exist
    CHECK_THROWS_AS(exact_robust_plan(c, Budgets{0, 0}, caps), CapExceededError);
}

TEST_CASE("exact robust cost is nondecreasing in the budgets") {
    GridCase c = garver();
    double prev = -1.0;
    for (Budgets b : {Budgets{0, 0}, Budgets{1, 1}, Budgets{2, 1}, Budgets{5, 3}}) {
        ExactPlanResult res = exact_robust_plan(c, b);
        CHECK(res.total_cost >= prev - 1e-9 * (1.0 + std::abs(res.total_cost)));
        prev = res.total_cost;
    }
}

TEST_CASE("oracle plan beats spot-checked alternatives on garver") {
    GridCase c = garver();
    OracleCaps caps;
    ExactPlanResult res = exact_robust_plan(c, Budgets{1, 1}, caps);
    CHECK(res.plan.investment_cost <= c.investment_budget + 1e-9);
    // any specific feasible plan must not be cheaper
    for (uint64_t probe : {0ull, 1ull << 8, (1ull << 8) | (1ull << 13), 1ull << 5}) {
        std::vector<uint8_t> built(15, 0);
        double inv = 0.0;
        for (int k = 0; k < 15; ++k) {
            built[k] = (probe >> k) & 1ull ? 1 : 0;
            if (built[k]) inv += c.lines[c.candidate_idx[k]].build_cost;
        }
        if (inv > c.investment_budget) continue;
        ExpansionPlan plan = make_plan(c, built);
        auto [w, cost] = exact_worst_case(c, plan, Budgets{1, 1}, 1000);
        CHECK(res.total_cost <= plan.investment_cost + c.sigma * cost + 1e-7);
    }
}
