#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "rtnep/errors.hpp"
#include "rtnep/linsolve.hpp"
#include "support/tableau_simplex.hpp"

using namespace rtnep;

namespace {

LinearProgram random_lp(std::mt19937_64& rng, int nvars, int nrows) {
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    LinearProgram lp;
    for (int j = 0; j < nvars; ++j) {
        double pick = uni(0, 1);
        if (pick < 0.1) lp.add_variable(-kInf, kInf, uni(-5, 5));
        else if (pick < 0.3) lp.add_variable(uni(-8, 0), kInf, uni(-5, 5));
        else if (pick < 0.5) lp.add_variable(-kInf, uni(0, 8), uni(-5, 5));
        else lp.add_variable(uni(-4, 0), uni(0, 6), uni(-5, 5));
    }
    for (int i = 0; i < nrows; ++i) {
        std::vector<std::pair<int, double>> coefs;
        for (int j = 0; j < nvars; ++j)
            if (uni(0, 1) < 0.3) coefs.push_back({j, uni(-3, 3)});
        if (coefs.empty()) coefs.push_back({static_cast<int>(rng() % nvars), uni(1, 3)});
        double pick = uni(0, 1);
        RowKind kind = pick < 0.45 ? RowKind::LessEqual
                                   : (pick < 0.9 ? RowKind::GreaterEqual : RowKind::Equal);
        double rhs = uni(-10, 10);
        lp.add_row(kind, rhs, coefs);
        // occasionally contradict the row outright so the suite also covers
        // infeasible instances
        if (uni(0, 1) < 0.012) {
            RowKind opposite = kind == RowKind::LessEqual ? RowKind::GreaterEqual : RowKind::LessEqual;
            double shift = kind == RowKind::LessEqual ? uni(1, 5) : -uni(1, 5);
            lp.add_row(opposite, rhs + shift, coefs);
        }
    }
    return lp;
}

}  // namespace

TEST_CASE("one variable, duals of binding rows") {
    LinearProgram lp;
    int x = lp.add_variable(-kInf, kInf, 1.0);
    int r_ge = lp.add_row(RowKind::GreaterEqual, 3.0, {{x, 1.0}});
    int r_le = lp.add_row(RowKind::LessEqual, 10.0, {{x, 1.0}});
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(sol.x[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(sol.row_duals[r_ge] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sol.row_duals[r_le] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("symmetric lp: objective and row dual") {
    LinearProgram lp;
    int x = lp.add_variable(0.0, 1.0, -1.0);
    int y = lp.add_variable(0.0, 1.0, -1.0);
    int r = lp.add_row(RowKind::LessEqual, 1.0, {{x, 1.0}, {y, 1.0}});
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(sol.row_duals[r] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("solution invariants: residuals and strong duality") {
    LinearProgram lp;
    int a = lp.add_variable(0.0, 4.0, 2.0);
    int b = lp.add_variable(-1.0, 5.0, -3.0);
    int c = lp.add_variable(-kInf, kInf, 0.5);
    lp.add_row(RowKind::LessEqual, 6.0, {{a, 1.0}, {b, 2.0}, {c, 1.0}});
    lp.add_row(RowKind::GreaterEqual, -2.0, {{a, -1.0}, {c, 2.0}});
    lp.add_row(RowKind::Equal, 1.0, {{b, 1.0}, {c, -1.0}});
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.max_primal_residual <= 1e-9);
    CHECK(sol.cs_residual <= 1e-9);
    CHECK(sol.duality_gap <= 1e-9 * (1.0 + std::abs(sol.objective)));
}

TEST_CASE("random lps match the tableau reference") {
    std::mt19937_64 rng(42);
    int optimal = 0, infeasible = 0, unbounded = 0;
    for (int t = 0; t < 120; ++t) {
        LinearProgram lp = random_lp(rng, 40, 20);
        auto ref = testsupport::tableau_solve(lp);
        auto sol = solve_lp(lp);
        INFO("instance ", t);
        REQUIRE(sol.status == ref.status);
        if (ref.status == SolveStatus::Optimal) {
            ++optimal;
            CHECK(std::abs(sol.objective - ref.objective) <=
                  1e-9 * (1.0 + std::abs(ref.objective)));
        } else if (ref.status == SolveStatus::Infeasible) {
            ++infeasible;
        } else {
            ++unbounded;
        }
    }
    // the suite must actually exercise all three outcomes
    CHECK(optimal > 25);
    CHECK(infeasible >= 5);
    CHECK(unbounded >= 5);
}

TEST_CASE("dual feasibility at bounds on random suite") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        LinearProgram lp = random_lp(rng, 25, 12);
        LpSolution sol;
        try {
            sol = solve_lp(lp);
        } catch (const NumericalError&) {
            continue;
        }
        if (sol.status != SolveStatus::Optimal) continue;
        for (int j = 0; j < lp.num_vars(); ++j) {
            if (lp.lower[j] != -kInf && std::abs(sol.x[j] - lp.lower[j]) <= 1e-7)
                CHECK(sol.reduced_costs[j] >= -1e-7);
            if (lp.upper[j] != kInf && std::abs(sol.x[j] - lp.upper[j]) <= 1e-7)
                CHECK(sol.reduced_costs[j] <= 1e-7);
        }
    }
}

TEST_CASE("deterministic resolve") {
    std::mt19937_64 rng(99);
    LinearProgram lp = random_lp(rng, 30, 15);
    auto a = solve_lp(lp);
    auto b = solve_lp(lp);
    CHECK(a.status == b.status);
    CHECK(a.objective == b.objective);  // bitwise
    CHECK(a.x == b.x);
    CHECK(a.row_duals == b.row_duals);
}

TEST_CASE("beale degeneracy example terminates at its optimum") {
    LinearProgram lp;
    int x1 = lp.add_variable(0.0, kInf, -0.75);
    int x2 = lp.add_variable(0.0, kInf, 150.0);
    int x3 = lp.add_variable(0.0, kInf, -0.02);
    int x4 = lp.add_variable(0.0, kInf, 6.0);
    lp.add_row(RowKind::LessEqual, 0.0, {{x1, 0.25}, {x2, -60.0}, {x3, -0.04}, {x4, 9.0}});
    lp.add_row(RowKind::LessEqual, 0.0, {{x1, 0.5}, {x2, -90.0}, {x3, -0.02}, {x4, 3.0}});
    lp.add_row(RowKind::LessEqual, 1.0, {{x3, 1.0}});
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-0.05).epsilon(1e-9));
}

TEST_CASE("row-free lp settles at the cost-minimizing bounds") {
    LinearProgram lp;
    int a = lp.add_variable(0.0, 5.0, -1.0);
    int b = lp.add_variable(-2.0, 7.0, 2.0);
    int c = lp.add_variable(-1.0, 1.0, 0.0);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.x[a] == 5.0);
    CHECK(sol.x[b] == -2.0);
    CHECK(sol.objective == doctest::Approx(-9.0));
    (void)c;

    LinearProgram unb;
    unb.add_variable(0.0, kInf, -1.0);
    CHECK(solve_lp(unb).status == SolveStatus::Unbounded);
}

TEST_CASE("knapsack mip") {
    MixedIntegerProgram mip;
    int a = mip.lp.add_variable(0.0, 1.0, -3.0);
    int b = mip.lp.add_variable(0.0, 1.0, -2.0);
    mip.lp.add_row(RowKind::LessEqual, 1.0, {{a, 1.0}, {b, 1.0}});
    mip.binary_vars = {a, b};
    auto sol = solve_mip(mip);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(sol.x[a] == doctest::Approx(1.0));
    CHECK(sol.x[b] == doctest::Approx(0.0));
}

TEST_CASE("mip without binaries equals the lp") {
    std::mt19937_64 rng(5);
    LinearProgram lp = random_lp(rng, 12, 8);
    auto ref = testsupport::tableau_solve(lp);
    MixedIntegerProgram mip;
    mip.lp = lp;
    auto sol = solve_mip(mip);
    CHECK(sol.status == ref.status);
    if (ref.status == SolveStatus::Optimal)
        CHECK(std::abs(sol.objective - ref.objective) <= 1e-9 * (1.0 + std::abs(ref.objective)));
}

namespace {

// exhaustive reference: try all 2^k binary assignments, solve the continuous
// remainder with the independent tableau oracle
double enumerate_mip(const MixedIntegerProgram& mip, bool& feasible) {
    int k = static_cast<int>(mip.binary_vars.size());
    double best = kInf;
    feasible = false;
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
        LinearProgram fixed = mip.lp;
        for (int t = 0; t < k; ++t) {
            double v = (mask >> t) & 1u ? 1.0 : 0.0;
            fixed.lower[mip.binary_vars[t]] = v;
            fixed.upper[mip.binary_vars[t]] = v;
        }
        auto r = testsupport::tableau_solve(fixed);
        if (r.status == SolveStatus::Optimal && r.objective < best) {
            best = r.objective;
            feasible = true;
        }
    }
    return best;
}

}  // namespace

TEST_CASE("random 10-binary mips match exhaustive enumeration") {
    std::mt19937_64 rng(2024);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    for (int t = 0; t < 25; ++t) {
        MixedIntegerProgram mip;
        for (int j = 0; j < 10; ++j) mip.binary_vars.push_back(mip.lp.add_variable(0.0, 1.0, uni(-5, 5)));
        for (int j = 0; j < 3; ++j) mip.lp.add_variable(0.0, uni(1, 4), uni(-2, 2));
        for (int i = 0; i < 6; ++i) {
            std::vector<std::pair<int, double>> coefs;
            for (int j = 0; j < mip.lp.num_vars(); ++j)
                if (uni(0, 1) < 0.4) coefs.push_back({j, uni(-3, 3)});
            if (coefs.empty()) coefs.push_back({0, 1.0});
            mip.lp.add_row(uni(0, 1) < 0.7 ? RowKind::LessEqual : RowKind::GreaterEqual,
                           uni(-4, 8), std::move(coefs));
        }
        bool ref_feasible = false;
        double ref = enumerate_mip(mip, ref_feasible);
        auto sol = solve_mip(mip);
        INFO("instance ", t);
        if (!ref_feasible) {
            CHECK(sol.status == SolveStatus::Infeasible);
        } else {
            REQUIRE(sol.status == SolveStatus::Optimal);
            CHECK(std::abs(sol.objective - ref) <= 1e-7 * (1.0 + std::abs(ref)));
        }
    }
}

TEST_CASE("branch and bound node order does not change the optimum") {
    std::mt19937_64 rng(77);
    auto uni = [&](double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
    };
    for (int t = 0; t < 10; ++t) {
        MixedIntegerProgram mip;
        for (int j = 0; j < 8; ++j) mip.binary_vars.push_back(mip.lp.add_variable(0.0, 1.0, uni(-5, 5)));
        for (int i = 0; i < 4; ++i) {
            std::vector<std::pair<int, double>> coefs;
            for (int j = 0; j < 8; ++j)
                if (uni(0, 1) < 0.5) coefs.push_back({j, uni(-3, 3)});
            if (coefs.empty()) coefs.push_back({0, 1.0});
            mip.lp.add_row(RowKind::LessEqual, uni(0, 6), std::move(coefs));
        }
        MipTolerances t1, t2, t3;
        t1.best_bound_restart_interval = 1;
        t2.best_bound_restart_interval = 7;
        t3.best_bound_restart_interval = 0;  // pure depth-first
        auto s1 = solve_mip(mip, t1);
        auto s2 = solve_mip(mip, t2);
        auto s3 = solve_mip(mip, t3);
        CHECK(s1.status == s2.status);
        CHECK(s2.status == s3.status);
        if (s1.status == SolveStatus::Optimal) {
            CHECK(std::abs(s1.objective - s2.objective) <= 1e-9 * (1.0 + std::abs(s1.objective)));
            CHECK(std::abs(s1.objective - s3.objective) <= 1e-9 * (1.0 + std::abs(s1.objective)));
        }
    }
}

TEST_CASE("mip gap fields are consistent") {
    MixedIntegerProgram mip;
    for (int j = 0; j < 6; ++j) mip.binary_vars.push_back(mip.lp.add_variable(0.0, 1.0, -(j + 1.0)));
    mip.lp.add_row(RowKind::LessEqual, 3.0, {{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}, {5, 1.0}});
    auto sol = solve_mip(mip);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-15.0));  // take the three largest
    CHECK(sol.relative_gap <= 1e-8);
}

TEST_CASE("lp dump emits the fixed interchange format") {
    LinearProgram lp;
    int x = lp.add_variable(0.0, 2.0, 1.5);
    lp.add_variable(-kInf, kInf, 0.0);
    lp.add_row(RowKind::GreaterEqual, 1.0, {{x, 1.0}}, "demand");
    std::ostringstream os;
    std::vector<int> bins{0};
    dump_lp(lp, os, &bins);
    auto text = os.str();
    CHECK(text.find("Minimize") != std::string::npos);
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find("demand:") != std::string::npos);
    CHECK(text.find("Binaries") != std::string::npos);
    CHECK(text.find("End") != std::string::npos);
}
