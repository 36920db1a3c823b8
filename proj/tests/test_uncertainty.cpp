#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <set>

#include "doctest.h"
#include "rtnep/case_io.hpp"
#include "rtnep/uncertainty.hpp"

using namespace rtnep;

namespace {
GridCase garver() { return load_case(std::string(RTNEP_DATA_DIR) + "/garver6.json"); }
}

TEST_CASE("all-zero z reproduces the nominal point") {
    GridCase c = garver();
    Realization r = nominal_realization(c);
    for (size_t j = 0; j < c.loads.size(); ++j) CHECK(r.demand[j] == c.loads[j].nominal_demand);
    for (size_t i = 0; i < c.generators.size(); ++i)
        CHECK(r.capacity[i] == c.generators[i].nominal_capacity);
}

TEST_CASE("single deviation lands at 120 percent of nominal") {
    GridCase c = garver();
    std::vector<uint8_t> z_d(c.loads.size(), 0), z_g(c.generators.size(), 0);
    z_d[1] = 1;  // load 2: nominal 240, delta 48 = 20%
    Realization r = realize(c, z_d, z_g, Budgets{1, 0});
    CHECK(r.demand[1] == doctest::Approx(1.2 * 240.0).epsilon(1e-15));
    CHECK(r.demand[0] == 80.0);
    CHECK(r.capacity[0] == 150.0);
}

TEST_CASE("budget violation names the violated budget") {
    GridCase c = garver();
    std::vector<uint8_t> z_d(c.loads.size(), 0), z_g(c.generators.size(), 0);
    z_d[0] = z_d[1] = 1;
    try {
        realize(c, z_d, z_g, Budgets{1, 0});
        FAIL("expected budget violation");
    } catch (const BudgetViolationError& e) {
        CHECK(e.budget == "gamma_d");
    }
}

TEST_CASE("interval membership and realized formulas hold on every vertex") {
    GridCase c = garver();
    enumerate_vertices(c, Budgets{2, 1}, 1000, [&](const Realization& r) {
        long zd = 0, zg = 0;
        for (size_t j = 0; j < c.loads.size(); ++j) {
            CHECK(r.demand[j] ==
                  c.loads[j].nominal_demand + c.loads[j].demand_deviation * r.z_d[j]);
            CHECK(r.demand[j] >= c.loads[j].nominal_demand - c.loads[j].demand_deviation);
            CHECK(r.demand[j] <= c.loads[j].nominal_demand + c.loads[j].demand_deviation);
            zd += r.z_d[j];
        }
        for (size_t i = 0; i < c.generators.size(); ++i) {
            CHECK(r.capacity[i] ==
                  c.generators[i].nominal_capacity - c.generators[i].capacity_deviation * r.z_g[i]);
            zg += r.z_g[i];
        }
        CHECK(zd <= 2);
        CHECK(zg <= 1);
    });
}

TEST_CASE("enumeration count: two loads one unit") {
    GridCase c = garver();
    // silence deviations except loads 1,2 and unit 1
    for (size_t j = 2; j < c.loads.size(); ++j) c.loads[j].demand_deviation = 0.0;
    c.generators[1].capacity_deviation = 0.0;
    c.generators[2].capacity_deviation = 0.0;
    c.rebuild_indices();
    int count = 0;
    enumerate_vertices(c, Budgets{1, 1}, 100, [&](const Realization&) { ++count; });
    CHECK(count == 6);  // (1 + 2) * (1 + 1)
}

TEST_CASE("zero budgets enumerate exactly the nominal realization") {
    GridCase c = garver();
    int count = 0;
    enumerate_vertices(c, Budgets{0, 0}, 10, [&](const Realization& r) {
        ++count;
        CHECK(r.same_vertex(nominal_realization(c)));
    });
    CHECK(count == 1);
}

TEST_CASE("vertex counting matches the binomial sum and trips the cap") {
    GridCase c = garver();
    VertexCount vc = count_vertices(c, Budgets{5, 3});
    CHECK(vc.decimal == "256");  // 2^5 * 2^3
    CHECK(!vc.exceeds(256));
    CHECK(vc.exceeds(255));
    try {
        enumerate_vertices(c, Budgets{5, 3}, 100, [](const Realization&) {});
        FAIL("expected cap error");
    } catch (const CapExceededError& e) {
        CHECK(e.exact_count == "256");
    }
    VertexCount partial = count_vertices(c, Budgets{2, 1});
    CHECK(partial.decimal == "64");  // (1+5+10) * (1+3)
}

TEST_CASE("enumeration is lexicographic and duplicate free") {
    GridCase c = garver();
    std::vector<std::vector<uint8_t>> seen;
    enumerate_vertices(c, Budgets{2, 1}, 1000, [&](const Realization& r) {
        std::vector<uint8_t> key = r.z_d;
        key.insert(key.end(), r.z_g.begin(), r.z_g.end());
        if (!seen.empty()) CHECK(seen.back() < key);  // strictly increasing lex order
        seen.push_back(std::move(key));
    });
    CHECK(seen.size() == 64);
}

TEST_CASE("sampling determinism and exact-budget counts") {
    GridCase c = garver();
    auto a = sample_realizations(c, Budgets{2, 1}, 50, 123, SampleMode::ExactBudget);
    auto b = sample_realizations(c, Budgets{2, 1}, 50, 123, SampleMode::ExactBudget);
    REQUIRE(a.size() == 50);
    for (size_t s = 0; s < a.size(); ++s) {
        CHECK(a[s].same_vertex(b[s]));
        long zd = 0, zg = 0;
        for (auto v : a[s].z_d) zd += v;
        for (auto v : a[s].z_g) zg += v;
        CHECK(zd == 2);
        CHECK(zg == 1);
    }
    auto w = sample_realizations(c, Budgets{2, 1}, 50, 123, SampleMode::WithinBudget);
    for (const auto& r : w) {
        long zd = 0;
        for (auto v : r.z_d) zd += v;
        CHECK(zd <= 2);
    }
}

TEST_CASE("count zero gives an empty sample list") {
    GridCase c = garver();
    CHECK(sample_realizations(c, Budgets{1, 1}, 0, 9, SampleMode::ExactBudget).empty());
}

TEST_CASE("full demand budget forces every load to deviate") {
    GridCase c = garver();
    auto s = sample_realizations(c, Budgets{5, 0}, 10, 4, SampleMode::ExactBudget);
    for (const auto& r : s)
        for (size_t j = 0; j < c.loads.size(); ++j) CHECK(r.z_d[j] == 1);
}

TEST_CASE("empirical selection frequency under exact budgets") {
    // 10 uncertain loads, gamma 3: each load should appear with frequency 0.3
    GridCase c;
    c.base_mva = 100;
    c.sigma = 1.0;
    c.investment_budget = 0.0;
    for (int n = 0; n < 2; ++n) c.buses.push_back({n + 1});
    Line l;
    l.id = 1;
    l.from_bus = 0;
    l.to_bus = 1;
    l.reactance = 0.1;
    l.capacity = 10.0;
    c.lines.push_back(l);
    for (int j = 0; j < 10; ++j) {
        Load d;
        d.id = j + 1;
        d.bus = j % 2;
        d.marginal_shed_cost = 100.0;
        d.nominal_demand = 10.0;
        d.demand_deviation = 1.0;
        d.shed_fraction = 1.0;
        c.loads.push_back(d);
    }
    c.rebuild_indices();
    const long N = 100000;
    auto samples = sample_realizations(c, Budgets{3, 0}, N, 2718, SampleMode::ExactBudget);
    std::vector<long> hits(10, 0);
    for (const auto& r : samples)
        for (int j = 0; j < 10; ++j) hits[j] += r.z_d[j];
    for (int j = 0; j < 10; ++j) {
        double freq = static_cast<double>(hits[j]) / N;
        CHECK(std::abs(freq - 0.3) < 0.01);
    }
}

TEST_CASE("zero-deviation elements are excluded from z vectors") {
    GridCase c = garver();
    c.loads[0].demand_deviation = 0.0;
    c.rebuild_indices();
    CHECK(c.uncertain_loads.size() == 4);
    std::vector<uint8_t> z_d(c.loads.size(), 0), z_g(c.generators.size(), 0);
    z_d[0] = 1;
    CHECK_THROWS(realize(c, z_d, z_g, Budgets{1, 0}));
    // enumeration never selects it
    enumerate_vertices(c, Budgets{4, 0}, 100, [&](const Realization& r) { CHECK(r.z_d[0] == 0); });
}

TEST_CASE("realization json round trip") {
    GridCase c = garver();
    std::vector<uint8_t> z_d(c.loads.size(), 0), z_g(c.generators.size(), 0);
    z_d[2] = 1;
    z_g[0] = 1;
    Realization r = realize(c, z_d, z_g, Budgets{1, 1});
    std::string text = realization_to_json(c, r);
    Realization r2 = realization_from_json(c, text, "mem");
    CHECK(r2.same_vertex(r));
    CHECK(r2.demand == r.demand);
    CHECK(r2.capacity == r.capacity);
}
