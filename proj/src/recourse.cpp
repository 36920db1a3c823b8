#include "rtnep/recourse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "simplex.hpp"

namespace rtnep {

ExpansionPlan make_plan(const GridCase& c, std::vector<uint8_t> built) {
    if (built.size() != c.candidate_idx.size())
        throw std::invalid_argument("plan size does not match candidate count");
    ExpansionPlan p;
    p.built = std::move(built);
    p.investment_cost = 0.0;
    for (size_t k = 0; k < p.built.size(); ++k)
        if (p.built[k]) p.investment_cost += c.lines[c.candidate_idx[k]].build_cost;
    return p;
}

ExpansionPlan empty_plan(const GridCase& c) {
    return make_plan(c, std::vector<uint8_t>(c.candidate_idx.size(), 0));
}

LinearProgram build_dispatch_lp(const GridCase& c, const ExpansionPlan& plan,
                                const Realization& r, DispatchIndex* index) {
    if (plan.built.size() != c.candidate_idx.size())
        throw std::invalid_argument("plan size does not match candidate count");
    if (r.demand.size() != c.loads.size() || r.capacity.size() != c.generators.size())
        throw std::invalid_argument("realization does not match case dimensions");

    const int nb = static_cast<int>(c.buses.size());
    const int ng = static_cast<int>(c.generators.size());
    const int nd = static_cast<int>(c.loads.size());
    const int nl = static_cast<int>(c.lines.size());

    std::vector<uint8_t> built_mask(nl, 0);
    for (int l : c.existing_idx) built_mask[l] = 1;
    for (size_t k = 0; k < plan.built.size(); ++k)
        if (plan.built[k]) built_mask[c.candidate_idx[k]] = 1;

    LinearProgram lp;
    DispatchIndex idx;
    idx.var_theta = 0;
    for (int n = 0; n < nb; ++n) lp.add_variable(-kInf, kInf, 0.0);
    idx.var_pg = lp.num_vars();
    for (int i = 0; i < ng; ++i) lp.add_variable(0.0, kInf, c.generators[i].marginal_cost);
    idx.var_pbar = lp.num_vars();
    for (int i = 0; i < ng; ++i) lp.add_variable(0.0, kInf, 0.0);
    idx.var_pu = lp.num_vars();
    for (int j = 0; j < nd; ++j) lp.add_variable(0.0, kInf, c.loads[j].marginal_shed_cost);
    idx.var_pd = lp.num_vars();
    for (int j = 0; j < nd; ++j) lp.add_variable(0.0, kInf, 0.0);
    idx.var_flow = lp.num_vars();
    for (int l = 0; l < nl; ++l) {
        if (built_mask[l]) lp.add_variable(-c.lines[l].capacity, c.lines[l].capacity, 0.0);
        else lp.add_variable(0.0, 0.0, 0.0);  // unbuilt candidate: flow pinned, no coupling
    }

    // nodal balance
    idx.row_balance = lp.num_rows();
    {
        std::vector<std::vector<std::pair<int, double>>> rows(nb);
        for (int i = 0; i < ng; ++i) rows[c.generators[i].bus].push_back({idx.var_pg + i, 1.0});
        for (int j = 0; j < nd; ++j) {
            rows[c.loads[j].bus].push_back({idx.var_pu + j, 1.0});
            rows[c.loads[j].bus].push_back({idx.var_pd + j, -1.0});
        }
        for (int l = 0; l < nl; ++l) {
            if (!built_mask[l]) continue;
            rows[c.lines[l].to_bus].push_back({idx.var_flow + l, 1.0});
            rows[c.lines[l].from_bus].push_back({idx.var_flow + l, -1.0});
        }
        for (int n = 0; n < nb; ++n) lp.add_row(RowKind::Equal, 0.0, std::move(rows[n]));
    }

    // flow definition for in-service lines
    idx.row_flowdef = lp.num_rows();
    for (int l = 0; l < nl; ++l) {
        if (!built_mask[l]) continue;
        double binv = 1.0 / c.lines[l].reactance;
        lp.add_row(RowKind::Equal, 0.0,
                   {{idx.var_flow + l, 1.0},
                    {idx.var_theta + c.lines[l].from_bus, -binv},
                    {idx.var_theta + c.lines[l].to_bus, binv}});
        idx.active_lines.push_back(l);
    }

    idx.row_genlim = lp.num_rows();
    for (int i = 0; i < ng; ++i)
        lp.add_row(RowKind::LessEqual, 0.0, {{idx.var_pg + i, 1.0}, {idx.var_pbar + i, -1.0}});

    idx.row_shedlim = lp.num_rows();
    for (int j = 0; j < nd; ++j)
        lp.add_row(RowKind::LessEqual, 0.0,
                   {{idx.var_pu + j, 1.0}, {idx.var_pd + j, -c.loads[j].shed_fraction}});

    idx.row_fixdem = lp.num_rows();
    for (int j = 0; j < nd; ++j) lp.add_row(RowKind::Equal, r.demand[j], {{idx.var_pd + j, 1.0}});

    idx.row_fixcap = lp.num_rows();
    for (int i = 0; i < ng; ++i) lp.add_row(RowKind::Equal, r.capacity[i], {{idx.var_pbar + i, 1.0}});

    // one angle reference per connected component of the built topology
    idx.row_ref = lp.num_rows();
    std::vector<int> comp = connected_components(c, plan.built);
    idx.num_components = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<int> seen(idx.num_components, 0);
    for (int n = 0; n < nb; ++n) {
        if (seen[comp[n]]) continue;
        seen[comp[n]] = 1;
        lp.add_row(RowKind::Equal, 0.0, {{idx.var_theta + n, 1.0}});
    }

    if (index) *index = idx;
    return lp;
}

struct DispatchSolver::Impl {
    detail::SimplexSolver solver;
    bool solved_once = false;
    explicit Impl(const LinearProgram& lp) : solver(lp) {}
};

DispatchSolver::DispatchSolver(const GridCase& c, const ExpansionPlan& plan) : case_(c) {
    lp_ = build_dispatch_lp(c, plan, nominal_realization(c), &index_);
    impl_ = std::make_unique<Impl>(lp_);
}

DispatchSolver::~DispatchSolver() = default;
DispatchSolver::DispatchSolver(DispatchSolver&&) noexcept = default;

DispatchResult DispatchSolver::solve(const Realization& r, const LpTolerances& tol) {
    const auto& c = case_;
    const int ng = static_cast<int>(c.generators.size());
    const int nd = static_cast<int>(c.loads.size());
    auto& solver = impl_->solver;

    for (int j = 0; j < nd; ++j) solver.set_rhs(index_.row_fixdem + j, r.demand[j]);
    for (int i = 0; i < ng; ++i) solver.set_rhs(index_.row_fixcap + i, r.capacity[i]);

    auto info = solver.solve(tol);
    if (info.status == SolveStatus::NumericalFailure) {
        solver.clear_basis();
        info = solver.solve(tol, /*force_bland=*/true);
    }
    impl_->solved_once = true;

    if (info.status == SolveStatus::Infeasible) {
        // with every load fully sheddable the problem is feasible by
        // construction, so an infeasible status there is a solver defect
        bool all_sheddable = true;
        for (const auto& d : c.loads)
            if (d.shed_fraction < 1.0) all_sheddable = false;
        if (all_sheddable)
            throw NumericalError(info.iterations, info.primal_residual,
                                 "dispatch reported infeasible despite full sheddability");
        std::vector<long long> buses;
        for (int row : solver.infeasible_rows()) {
            if (row >= index_.row_balance && row < index_.row_balance + static_cast<int>(c.buses.size()))
                buses.push_back(c.buses[row - index_.row_balance].id);
        }
        throw InfeasibleDispatchError(std::move(buses), "dispatch infeasible for the given plan/realization");
    }
    if (info.status != SolveStatus::Optimal)
        throw NumericalError(info.iterations, info.primal_residual,
                             std::string("dispatch lp: ") + to_string(info.status));

    DispatchResult out;
    out.operating_cost = info.objective;
    const auto& x = solver.column_values();
    const auto& y = solver.duals();
    out.angles.assign(x.begin() + index_.var_theta, x.begin() + index_.var_theta + c.buses.size());
    out.generation.assign(x.begin() + index_.var_pg, x.begin() + index_.var_pg + ng);
    out.shedding.assign(x.begin() + index_.var_pu, x.begin() + index_.var_pu + nd);
    out.flows.assign(x.begin() + index_.var_flow, x.begin() + index_.var_flow + c.lines.size());
    out.mu_d.assign(y.begin() + index_.row_fixdem, y.begin() + index_.row_fixdem + nd);
    out.mu_g.assign(y.begin() + index_.row_fixcap, y.begin() + index_.row_fixcap + ng);

    // nodal balance self-check
    double worst = 0.0;
    std::vector<double> resid(c.buses.size(), 0.0);
    for (int i = 0; i < ng; ++i) resid[c.generators[i].bus] += out.generation[i];
    for (int j = 0; j < nd; ++j) resid[c.loads[j].bus] += out.shedding[j] - r.demand[j];
    for (size_t l = 0; l < c.lines.size(); ++l) {
        if (out.flows[l] == 0.0) continue;
        resid[c.lines[l].to_bus] += out.flows[l];
        resid[c.lines[l].from_bus] -= out.flows[l];
    }
    double scale = 1.0;
    for (int j = 0; j < nd; ++j) scale = std::max(scale, r.demand[j]);
    for (double v : resid) worst = std::max(worst, std::abs(v));
    if (worst > tol.feas_tol * scale * 10.0)
        throw NumericalError(info.iterations, worst, "dispatch balance residual out of tolerance");
    return out;
}

DispatchResult solve_dispatch(const GridCase& c, const ExpansionPlan& plan, const Realization& r,
                              const LpTolerances& tol) {
    DispatchSolver s(c, plan);
    return s.solve(r, tol);
}

}  // namespace rtnep
