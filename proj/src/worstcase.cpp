#include "rtnep/worstcase.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rtnep {

namespace {

std::vector<uint8_t> pick_top(const std::vector<int>& candidates, const std::vector<double>& gain,
                              int budget, size_t vec_size, bool positive_only) {
    std::vector<int> order(candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (gain[a] != gain[b]) return gain[a] > gain[b];
        return candidates[a] < candidates[b];
    });
    std::vector<uint8_t> z(vec_size, 0);
    int taken = 0;
    for (int k : order) {
        if (taken >= budget) break;
        if (positive_only && !(gain[k] > 0.0)) break;
        z[candidates[k]] = 1;
        ++taken;
    }
    return z;
}

}  // namespace

Realization taylor_argmax(const GridCase& c, const Budgets& b, const DispatchResult& dispatch,
                          const Realization& prev) {
    (void)prev;  // the linear model's argmax does not depend on the expansion point
    std::vector<double> gain_d(c.uncertain_loads.size());
    for (size_t k = 0; k < c.uncertain_loads.size(); ++k) {
        int j = c.uncertain_loads[k];
        gain_d[k] = dispatch.mu_d[j] * c.loads[j].demand_deviation;
    }
    std::vector<double> gain_g(c.uncertain_gens.size());
    for (size_t k = 0; k < c.uncertain_gens.size(); ++k) {
        int i = c.uncertain_gens[k];
        gain_g[k] = -dispatch.mu_g[i] * c.generators[i].capacity_deviation;
    }
    auto z_d = pick_top(c.uncertain_loads, gain_d, b.gamma_d, c.loads.size(), true);
    auto z_g = pick_top(c.uncertain_gens, gain_g, b.gamma_g, c.generators.size(), true);
    return realize(c, z_d, z_g, b);
}

InnerState coordinate_descent(const GridCase& c, const ExpansionPlan& plan, const Budgets& b,
                              const Realization& init, double eps_il, int max_iter,
                              const LpTolerances& tol) {
    if (!(eps_il > 0.0)) throw std::invalid_argument("eps_il must be strictly positive");
    check_budgets(c, b);

    InnerState st;
    st.realization = init;
    double c_il = kInf;
    DispatchSolver ds(c, plan);

    int nu = 1;
    while (true) {
        st.dispatch = ds.solve(st.realization, tol);
        double cost = st.dispatch.operating_cost;
        st.trace.push_back({nu, cost, st.realization});
        st.nu = nu;

        if (std::isfinite(c_il) && std::abs(c_il - cost) / std::max(std::abs(c_il), 1.0) <= eps_il) {
            st.converged = true;
            st.c_il = cost;
            return st;
        }
        c_il = cost;
        if (nu >= max_iter) {
            st.converged = false;
            st.c_il = cost;
            return st;
        }
        ++nu;
        Realization next = taylor_argmax(c, b, st.dispatch, st.realization);
        st.realization = std::move(next);
    }
}

std::vector<Realization> default_starts(const GridCase& c, const Budgets& b, int k_random,
                                        uint64_t seed) {
    std::vector<Realization> starts;
    starts.push_back(nominal_realization(c));

    // all extremes truncated to budget, weighted by deviation size times cost
    std::vector<double> wd(c.uncertain_loads.size());
    for (size_t k = 0; k < c.uncertain_loads.size(); ++k) {
        const Load& d = c.loads[c.uncertain_loads[k]];
        wd[k] = d.demand_deviation * d.marginal_shed_cost;
    }
    std::vector<double> wg(c.uncertain_gens.size());
    for (size_t k = 0; k < c.uncertain_gens.size(); ++k) {
        const Generator& g = c.generators[c.uncertain_gens[k]];
        wg[k] = g.capacity_deviation * g.marginal_cost;
    }
    auto z_d = pick_top(c.uncertain_loads, wd, b.gamma_d, c.loads.size(), false);
    auto z_g = pick_top(c.uncertain_gens, wg, b.gamma_g, c.generators.size(), false);
    starts.push_back(realize(c, z_d, z_g, b));

    for (auto& r : sample_realizations(c, b, k_random, seed, SampleMode::ExactBudget))
        starts.push_back(std::move(r));

    // drop duplicate vertices, keeping first occurrences
    std::vector<Realization> unique;
    for (auto& r : starts) {
        bool dup = false;
        for (const auto& u : unique)
            if (u.same_vertex(r)) { dup = true; break; }
        if (!dup) unique.push_back(std::move(r));
    }
    return unique;
}

WorstCaseResult multistart_worst_case(const GridCase& c, const ExpansionPlan& plan,
                                      const Budgets& b, const std::vector<Realization>& starts,
                                      double eps_il, int max_iter, const LpTolerances& tol) {
    if (starts.empty()) throw std::invalid_argument("multistart requires at least one start");
    WorstCaseResult best;
    bool have = false;
    for (size_t s = 0; s < starts.size(); ++s) {
        InnerState st = coordinate_descent(c, plan, b, starts[s], eps_il, max_iter, tol);
        best.total_inner_iterations += st.nu;
        best.all_converged = best.all_converged && st.converged;
        if (!have || st.c_il > best.dispatch.operating_cost) {
            have = true;
            best.realization = std::move(st.realization);
            best.dispatch = std::move(st.dispatch);
            best.winner_start = static_cast<int>(s);
            best.winner_trace = std::move(st.trace);
        }
    }
    return best;
}

}  // namespace rtnep
