#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "rtnep/case_io.hpp"
#include "rtnep/oracle.hpp"
#include "rtnep/synth.hpp"
#include "rtnep/worstcase.hpp"

using namespace rtnep;

namespace {

GridCase garver() { return load_case(std::string(RTNEP_DATA_DIR) + "/garver6.json"); }

GridCase two_bus_symmetric() {
    GridCase c;
    c.base_mva = 100.0;
    c.sigma = 1.0;
    c.investment_budget = 0.0;
    c.buses = {{1}, {2}};
    Line l;
    l.id = 1;
    l.from_bus = 0;
    l.to_bus = 1;
    l.reactance = 0.2;
    l.capacity = 500.0;
    c.lines.push_back(l);
    Generator g;
    g.id = 1;
    g.bus = 0;
    g.marginal_cost = 10.0;
    g.nominal_capacity = 300.0;
    c.generators.push_back(g);
    c.loads.push_back({1, 0, 1000.0, 100.0, 20.0, 1.0});
    c.loads.push_back({2, 1, 1000.0, 100.0, 20.0, 1.0});
    c.rebuild_indices();
    return c;
}

// linear objective of the middle-level model, shared by greedy and oracle
double taylor_objective(const GridCase& c, const DispatchResult& d, const Realization& prev,
                        const Realization& r) {
    double v = d.operating_cost;
    for (size_t j = 0; j < c.loads.size(); ++j) v += d.mu_d[j] * (r.demand[j] - prev.demand[j]);
    for (size_t i = 0; i < c.generators.size(); ++i)
        v += d.mu_g[i] * (r.capacity[i] - prev.capacity[i]);
    return v;
}

}  // namespace

TEST_CASE("zero sensitivities select the nominal realization") {
    GridCase c = garver();
    DispatchResult d;
    d.mu_d.assign(c.loads.size(), 0.0);
    d.mu_g.assign(c.generators.size(), 0.0);
    Realization r = taylor_argmax(c, Budgets{3, 2}, d, nominal_realization(c));
    CHECK(r.same_vertex(nominal_realization(c)));
}

TEST_CASE("argmax picks the single largest gain, ties to the lowest index") {
    GridCase c = garver();
    for (auto& d : c.loads) d.demand_deviation = 1.0;  // gains equal mu_d
    c.rebuild_indices();
    DispatchResult d;
    d.mu_d = {5.0, 3.0, 3.0, 0.0, 0.0};
    d.mu_g.assign(c.generators.size(), 0.0);
    Realization r = taylor_argmax(c, Budgets{1, 0}, d, nominal_realization(c));
    CHECK(r.z_d == std::vector<uint8_t>{1, 0, 0, 0, 0});
    Realization r2 = taylor_argmax(c, Budgets{2, 0}, d, nominal_realization(c));
    CHECK(r2.z_d == std::vector<uint8_t>{1, 1, 0, 0, 0});
}

TEST_CASE("zero or negative gains are never selected") {
    GridCase c = garver();
    DispatchResult d;
    d.mu_d = {0.0, -2.0, 0.0, 0.0, 0.0};
    d.mu_g = {3.0, 0.0, 0.0};  // positive mu_g means capacity drop would lower cost
    Realization r = taylor_argmax(c, Budgets{5, 3}, d, nominal_realization(c));
    CHECK(r.same_vertex(nominal_realization(c)));
}

TEST_CASE("greedy equals exhaustive maximization on random instances") {
    std::mt19937_64 rng(314);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    for (int t = 0; t < 200; ++t) {
        GridCase c = make_random_small_case(400 + t);
        Budgets b{std::min<int>(static_cast<int>(rng() % 4), static_cast<int>(c.loads.size())),
                  std::min<int>(static_cast<int>(rng() % 4), static_cast<int>(c.generators.size()))};
        check_budgets(c, b);
        DispatchResult d;
        d.operating_cost = uni(100, 1000);
        for (size_t j = 0; j < c.loads.size(); ++j) d.mu_d.push_back(uni(-5, 10));
        for (size_t i = 0; i < c.generators.size(); ++i) d.mu_g.push_back(uni(-10, 5));
        Realization prev = nominal_realization(c);
        Realization greedy = taylor_argmax(c, b, d, prev);
        double best = -kInf;
        enumerate_vertices(c, b, 100000, [&](const Realization& r) {
            best = std::max(best, taylor_objective(c, d, prev, r));
        });
        CHECK(taylor_objective(c, d, prev, greedy) == best);
    }
}

TEST_CASE("zero budgets: the loop settles at the nominal cost in two passes") {
    GridCase c = garver();
    InnerState st = coordinate_descent(c, empty_plan(c), Budgets{0, 0}, nominal_realization(c),
                                       1e-12, 200);
    CHECK(st.converged);
    CHECK(st.nu == 2);
    DispatchResult ref = solve_dispatch(c, empty_plan(c), nominal_realization(c));
    CHECK(st.c_il == doctest::Approx(ref.operating_cost).epsilon(1e-12));
}

TEST_CASE("every iterate is a budget-feasible vertex and the trace is monotone") {
    GridCase c = garver();
    for (uint64_t seed = 0; seed < 6; ++seed) {
        auto starts = sample_realizations(c, Budgets{2, 1}, 1, seed, SampleMode::WithinBudget);
        InnerState st =
            coordinate_descent(c, empty_plan(c), Budgets{2, 1}, starts[0], 1e-12, 200);
        REQUIRE(st.converged);
        for (size_t k = 0; k < st.trace.size(); ++k) {
            long zd = 0, zg = 0;
            for (auto v : st.trace[k].realization.z_d) zd += v;
            for (auto v : st.trace[k].realization.z_g) zg += v;
            CHECK(zd <= 2);
            CHECK(zg <= 1);
            if (k > 0)
                CHECK(st.trace[k].cost >=
                      st.trace[k - 1].cost - 1e-9 * (1.0 + std::abs(st.trace[k].cost)));
        }
    }
}

TEST_CASE("fixed point: repeating argmax output means exact convergence") {
    GridCase c = garver();
    InnerState st = coordinate_descent(c, empty_plan(c), Budgets{2, 1}, nominal_realization(c),
                                       1e-12, 200);
    REQUIRE(st.converged);
    REQUIRE(st.trace.size() >= 2);
    const auto& last = st.trace.back();
    const auto& prev = st.trace[st.trace.size() - 2];
    if (last.realization.same_vertex(prev.realization)) CHECK(last.cost == prev.cost);
}

TEST_CASE("symmetric two-load tie resolves to the lowest index at equal cost") {
    GridCase c = two_bus_symmetric();
    InnerState st = coordinate_descent(c, empty_plan(c), Budgets{1, 0}, nominal_realization(c),
                                       1e-12, 200);
    REQUIRE(st.converged);
    CHECK(st.realization.z_d == std::vector<uint8_t>{1, 0});
    CHECK(st.c_il == doctest::Approx(10.0 * 220.0).epsilon(1e-12));
    auto [worst, cost] = exact_worst_case(c, empty_plan(c), Budgets{1, 0}, 100);
    CHECK(cost == doctest::Approx(st.c_il).epsilon(1e-12));
    CHECK(worst.z_d == std::vector<uint8_t>{0, 1});  // oracle tie-break: lex smallest
}

TEST_CASE("coordinate descent never exceeds the enumeration worst case") {
    GridCase c = garver();
    auto [worst, oracle_cost] = exact_worst_case(c, empty_plan(c), Budgets{2, 1}, 1000);
    for (uint64_t seed = 0; seed < 5; ++seed) {
        auto starts = sample_realizations(c, Budgets{2, 1}, 1, 100 + seed, SampleMode::WithinBudget);
        InnerState st = coordinate_descent(c, empty_plan(c), Budgets{2, 1}, starts[0], 1e-12, 200);
        CHECK(st.c_il <= oracle_cost + 1e-9 * (1.0 + oracle_cost));
    }
}

TEST_CASE("multistart recovers the enumeration worst case on garver") {
    GridCase c = garver();
    auto [worst, oracle_cost] = exact_worst_case(c, empty_plan(c), Budgets{2, 1}, 1000);
    auto starts = default_starts(c, Budgets{2, 1}, 10, 7);
    WorstCaseResult ws = multistart_worst_case(c, empty_plan(c), Budgets{2, 1}, starts, 1e-12);
    CHECK(ws.dispatch.operating_cost <= oracle_cost + 1e-9 * (1.0 + oracle_cost));
    CHECK(ws.dispatch.operating_cost == doctest::Approx(oracle_cost).epsilon(1e-9));
}

TEST_CASE("single nominal start equals plain coordinate descent") {
    GridCase c = garver();
    std::vector<Realization> starts{nominal_realization(c)};
    WorstCaseResult ws = multistart_worst_case(c, empty_plan(c), Budgets{1, 1}, starts, 1e-12);
    InnerState st = coordinate_descent(c, empty_plan(c), Budgets{1, 1}, nominal_realization(c),
                                       1e-12, 200);
    CHECK(ws.dispatch.operating_cost == st.c_il);
    CHECK(ws.realization.same_vertex(st.realization));
}

TEST_CASE("adding the true worst vertex as a start can only help") {
    GridCase c = garver();
    auto [worst, oracle_cost] = exact_worst_case(c, empty_plan(c), Budgets{2, 1}, 1000);
    std::vector<Realization> base{nominal_realization(c)};
    WorstCaseResult a = multistart_worst_case(c, empty_plan(c), Budgets{2, 1}, base, 1e-12);
    std::vector<Realization> more = base;
    more.push_back(worst);
    WorstCaseResult b = multistart_worst_case(c, empty_plan(c), Budgets{2, 1}, more, 1e-12);
    CHECK(b.dispatch.operating_cost >= a.dispatch.operating_cost - 1e-12);
    CHECK(b.dispatch.operating_cost == doctest::Approx(oracle_cost).epsilon(1e-9));
}

TEST_CASE("multistart attainment rate on randomized small instances") {
    int attained = 0, flagged = 0, total = 0;
    for (uint64_t seed = 1000; seed < 1200; ++seed) {
        GridCase c = make_random_small_case(seed);
        Budgets b{std::min<int>(2, static_cast<int>(c.uncertain_loads.size())),
                  std::min<int>(1, static_cast<int>(c.uncertain_gens.size()))};
        auto [worst, oracle_cost] = exact_worst_case(c, empty_plan(c), b, 100000);
        auto starts = default_starts(c, b, 10, seed);
        WorstCaseResult ws = multistart_worst_case(c, empty_plan(c), b, starts, 1e-12);
        double tol = 1e-7 * (1.0 + std::abs(oracle_cost));
        REQUIRE(ws.dispatch.operating_cost <= oracle_cost + tol);
        ++total;
        if (std::abs(ws.dispatch.operating_cost - oracle_cost) <= tol) ++attained;
        else ++flagged;
    }
    INFO("attained ", attained, " of ", total, " (flagged ", flagged, ")");
    CHECK(attained >= 0.95 * total);
}
