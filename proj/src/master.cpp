#include "rtnep/master.hpp"

#include <algorithm>
#include <cmath>

namespace rtnep {

std::vector<double> initial_big_m(const GridCase& c, const BigMPolicy& policy) {
    std::vector<double> m(c.candidate_idx.size());
    for (size_t k = 0; k < c.candidate_idx.size(); ++k) {
        const Line& l = c.lines[c.candidate_idx[k]];
        double v = policy.theta_span * c.base_mva / l.reactance;
        if (v > policy.cap)
            throw BigMOverflowError(l.id, v, "big-M for line " + std::to_string(l.id) +
                                                 " exceeds policy cap");
        m[k] = v;
    }
    return m;
}

MixedIntegerProgram build_master(const GridCase& c, const std::vector<Realization>& realizations,
                                 const std::vector<double>& big_m, MasterIndex* index) {
    const int nb = static_cast<int>(c.buses.size());
    const int ng = static_cast<int>(c.generators.size());
    const int nd = static_cast<int>(c.loads.size());
    const int nl = static_cast<int>(c.lines.size());
    const int nc = static_cast<int>(c.candidate_idx.size());
    if (static_cast<int>(big_m.size()) != nc)
        throw std::invalid_argument("big_m size does not match candidate count");
    for (const auto& r : realizations)
        if (r.demand.size() != c.loads.size() || r.capacity.size() != c.generators.size())
            throw std::invalid_argument("realization does not match case dimensions");

    MixedIntegerProgram mip;
    LinearProgram& lp = mip.lp;
    MasterIndex idx;

    idx.var_v = lp.num_vars();
    for (int k = 0; k < nc; ++k) {
        lp.add_variable(0.0, 1.0, c.lines[c.candidate_idx[k]].build_cost);
        mip.binary_vars.push_back(idx.var_v + k);
    }
    idx.var_alpha = lp.add_variable(0.0, kInf, c.sigma);

    if (c.investment_budget < 1e299) {
        std::vector<std::pair<int, double>> coefs;
        for (int k = 0; k < nc; ++k) coefs.push_back({idx.var_v + k, c.lines[c.candidate_idx[k]].build_cost});
        lp.add_row(RowKind::LessEqual, c.investment_budget, std::move(coefs), "budget");
    }

    // angle references: one per component of the fully expandable topology
    std::vector<int> comp = connected_components(c, std::vector<uint8_t>(nc, 1));
    int num_comp = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;

    for (size_t m = 0; m < realizations.size(); ++m) {
        const Realization& r = realizations[m];
        MasterIndex::Block blk;
        blk.var_theta = lp.num_vars();
        for (int n = 0; n < nb; ++n) lp.add_variable(-kInf, kInf, 0.0);
        blk.var_pg = lp.num_vars();
        for (int i = 0; i < ng; ++i) lp.add_variable(0.0, r.capacity[i], 0.0);
        blk.var_pu = lp.num_vars();
        for (int j = 0; j < nd; ++j)
            lp.add_variable(0.0, c.loads[j].shed_fraction * r.demand[j], 0.0);
        blk.var_flow = lp.num_vars();
        for (int l = 0; l < nl; ++l) lp.add_variable(-c.lines[l].capacity, c.lines[l].capacity, 0.0);

        // alpha bounds this block's operating cost from above
        blk.row_alpha = lp.num_rows();
        {
            std::vector<std::pair<int, double>> coefs{{idx.var_alpha, 1.0}};
            for (int i = 0; i < ng; ++i) coefs.push_back({blk.var_pg + i, -c.generators[i].marginal_cost});
            for (int j = 0; j < nd; ++j) coefs.push_back({blk.var_pu + j, -c.loads[j].marginal_shed_cost});
            lp.add_row(RowKind::GreaterEqual, 0.0, std::move(coefs));
        }

        blk.row_balance = lp.num_rows();
        {
            std::vector<std::vector<std::pair<int, double>>> rows(nb);
            std::vector<double> rhs(nb, 0.0);
            for (int i = 0; i < ng; ++i) rows[c.generators[i].bus].push_back({blk.var_pg + i, 1.0});
            for (int j = 0; j < nd; ++j) {
                rows[c.loads[j].bus].push_back({blk.var_pu + j, 1.0});
                rhs[c.loads[j].bus] += r.demand[j];
            }
            for (int l = 0; l < nl; ++l) {
                rows[c.lines[l].to_bus].push_back({blk.var_flow + l, 1.0});
                rows[c.lines[l].from_bus].push_back({blk.var_flow + l, -1.0});
            }
            for (int n = 0; n < nb; ++n) lp.add_row(RowKind::Equal, rhs[n], std::move(rows[n]));
        }

        blk.row_flowdef = lp.num_rows();
        for (int li : c.existing_idx) {
            double binv = 1.0 / c.lines[li].reactance;
            lp.add_row(RowKind::Equal, 0.0,
                       {{blk.var_flow + li, 1.0},
                        {blk.var_theta + c.lines[li].from_bus, -binv},
                        {blk.var_theta + c.lines[li].to_bus, binv}});
        }
        for (int k = 0; k < nc; ++k) {
            int li = c.candidate_idx[k];
            const Line& line = c.lines[li];
            double binv = 1.0 / line.reactance;
            double M = big_m[k];
            // |flow - angle difference / x| <= M (1 - v)
            lp.add_row(RowKind::LessEqual, M,
                       {{blk.var_flow + li, 1.0},
                        {blk.var_theta + line.from_bus, -binv},
                        {blk.var_theta + line.to_bus, binv},
                        {idx.var_v + k, M}});
            lp.add_row(RowKind::LessEqual, M,
                       {{blk.var_flow + li, -1.0},
                        {blk.var_theta + line.from_bus, binv},
                        {blk.var_theta + line.to_bus, -binv},
                        {idx.var_v + k, M}});
            // |flow| <= capacity * v
            lp.add_row(RowKind::LessEqual, 0.0,
                       {{blk.var_flow + li, 1.0}, {idx.var_v + k, -line.capacity}});
            lp.add_row(RowKind::LessEqual, 0.0,
                       {{blk.var_flow + li, -1.0}, {idx.var_v + k, -line.capacity}});
        }

        {
            std::vector<int> seen(num_comp, 0);
            for (int n = 0; n < nb; ++n) {
                if (seen[comp[n]]) continue;
                seen[comp[n]] = 1;
                lp.add_row(RowKind::Equal, 0.0, {{blk.var_theta + n, 1.0}});
            }
        }
        idx.blocks.push_back(blk);
    }

    if (index) *index = idx;
    return mip;
}

MasterSolution solve_master(const GridCase& c, const std::vector<Realization>& realizations,
                            const BigMPolicy& policy, const MipTolerances& tol,
                            const ExpansionPlan* warm_hint) {
    std::vector<double> big_m = initial_big_m(c, policy);
    const int nc = static_cast<int>(c.candidate_idx.size());

    MasterSolution out;
    for (int attempt = 0; attempt <= policy.max_doublings; ++attempt) {
        MasterIndex idx;
        MixedIntegerProgram mip = build_master(c, realizations, big_m, &idx);

        std::vector<double> hint;
        const std::vector<double>* hint_ptr = nullptr;
        if (warm_hint && static_cast<int>(warm_hint->built.size()) == nc) {
            hint.assign(mip.lp.num_vars(), 0.0);
            for (int k = 0; k < nc; ++k) hint[idx.var_v + k] = warm_hint->built[k];
            hint_ptr = &hint;
        }

        MipSolution sol = solve_mip(mip, tol, hint_ptr);
        out.status = sol.status;
        out.nodes = sol.nodes;
        out.big_m_doublings = attempt;
        if (sol.status != SolveStatus::Optimal) return out;

        std::vector<uint8_t> built(nc, 0);
        for (int k = 0; k < nc; ++k) built[k] = sol.x[idx.var_v + k] > 0.5 ? 1 : 0;
        out.plan = make_plan(c, built);
        out.alpha = sol.x[idx.var_alpha];
        out.total_cost = sol.objective;
        out.mip_gap = sol.relative_gap;

        // validity: the true recourse cost of every stored realization must not
        // exceed alpha, and no unbuilt candidate's disjunction may be binding
        bool tripped = false;
        double tol_v = 1e-6 * (1.0 + std::abs(out.alpha));
        for (size_t m = 0; m < realizations.size() && !tripped; ++m) {
            DispatchResult dr = solve_dispatch(c, out.plan, realizations[m], tol.lp);
            if (dr.operating_cost > out.alpha + tol_v) tripped = true;
        }
        for (size_t m = 0; m < realizations.size() && !tripped; ++m) {
            const auto& blk = idx.blocks[m];
            for (int k = 0; k < nc; ++k) {
                if (built[k]) continue;
                const Line& line = c.lines[c.candidate_idx[k]];
                double spread = std::abs(sol.x[blk.var_theta + line.from_bus] -
                                         sol.x[blk.var_theta + line.to_bus]) / line.reactance;
                if (spread >= big_m[k] * (1.0 - 1e-6)) {
                    tripped = true;
                    break;
                }
            }
        }
        if (!tripped) {
            out.big_m_valid = true;
            return out;
        }
        if (attempt == policy.max_doublings) {
            out.big_m_valid = false;  // exhausted; caller decides
            return out;
        }
        bool can_grow = false;
        for (int k = 0; k < nc; ++k) {
            double doubled = std::min(big_m[k] * 2.0, policy.cap);
            if (doubled > big_m[k]) can_grow = true;
            big_m[k] = doubled;
        }
        if (!can_grow) {
            out.big_m_valid = false;  // every M sits at the policy cap
            return out;
        }
    }
    return out;
}

}  // namespace rtnep
