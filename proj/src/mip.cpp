#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "rtnep/errors.hpp"
#include "rtnep/linsolve.hpp"
#include "simplex.hpp"

namespace rtnep {

namespace {

struct Node {
    std::vector<std::pair<int, uint8_t>> fixings;  // (binary var, value)
    double bound;
    long order;
    detail::BasisSnapshot basis;
};

}  // namespace

MipSolution solve_mip(const MixedIntegerProgram& mip, const MipTolerances& tol,
                      const std::vector<double>* incumbent_hint) {
    mip.check_well_formed();
    MipSolution out;

    detail::SimplexSolver solver(mip.lp);
    const auto& bins = mip.binary_vars;

    auto apply_fixings = [&](const std::vector<std::pair<int, uint8_t>>& fixings) {
        for (int j : bins) solver.set_bounds(j, std::max(0.0, mip.lp.lower[j]), std::min(1.0, mip.lp.upper[j]));
        for (const auto& [j, v] : fixings) solver.set_bounds(j, v, v);
    };

    bool have_inc = false;
    double inc_obj = kInf;
    std::vector<double> inc_x;

    auto try_incumbent = [&](double obj, const std::vector<double>& colvals) {
        if (have_inc && obj >= inc_obj - 1e-12 * (1.0 + std::abs(inc_obj))) return;
        have_inc = true;
        inc_obj = obj;
        inc_x.assign(colvals.begin(), colvals.begin() + mip.lp.num_vars());
        for (int j : bins) inc_x[j] = std::round(inc_x[j]);
    };

    // incumbent hint: fix binaries to the hint's rounding and solve the rest
    if (incumbent_hint && static_cast<int>(incumbent_hint->size()) == mip.lp.num_vars() && !bins.empty()) {
        std::vector<std::pair<int, uint8_t>> fx;
        for (int j : bins) fx.push_back({j, static_cast<uint8_t>(std::round((*incumbent_hint)[j]) != 0.0)});
        apply_fixings(fx);
        solver.clear_basis();
        auto info = solver.solve(tol.lp);
        if (info.status == SolveStatus::Optimal) try_incumbent(info.objective, solver.column_values());
    }

    std::vector<Node> open;
    {
        Node root;
        root.bound = -kInf;
        root.order = 0;
        open.push_back(std::move(root));
    }

    long nodes = 0;
    long next_order = 1;
    bool limited = false;
    double pruned_min = kInf;  // lowest bound discarded within gap tolerance
    auto t_start = std::chrono::steady_clock::now();

    while (!open.empty()) {
        if (nodes >= tol.node_limit ||
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count() >
                tol.time_limit_s) {
            limited = true;
            break;
        }
        size_t pick = open.size() - 1;  // depth first
        if (tol.best_bound_restart_interval > 0 && nodes > 0 &&
            nodes % tol.best_bound_restart_interval == 0) {
            for (size_t i = 0; i < open.size(); ++i) {
                if (open[i].bound < open[pick].bound ||
                    (open[i].bound == open[pick].bound && open[i].order < open[pick].order))
                    pick = i;
            }
        }
        Node node = std::move(open[pick]);
        open.erase(open.begin() + pick);
        ++nodes;

        // prune against the incumbent before solving
        if (have_inc && node.bound >= inc_obj - tol.mip_gap_tol * std::max(1.0, std::abs(inc_obj))) {
            pruned_min = std::min(pruned_min, node.bound);
            continue;
        }

        apply_fixings(node.fixings);
        if (node.basis.empty()) solver.clear_basis();
        else solver.load_basis(node.basis);
        auto info = solver.solve(tol.lp);

        if (info.status == SolveStatus::Infeasible) continue;
        if (info.status == SolveStatus::Unbounded) {
            out.status = SolveStatus::Unbounded;
            out.nodes = nodes;
            return out;
        }
        if (info.status != SolveStatus::Optimal) {
            // one deterministic retry from scratch, then give up on the node
            solver.clear_basis();
            info = solver.solve(tol.lp, /*force_bland=*/true);
            if (info.status == SolveStatus::Infeasible) continue;
            if (info.status != SolveStatus::Optimal)
                throw NumericalError(info.iterations, info.primal_residual, "node lp failed");
        }
        double bound = info.objective;
        if (have_inc && bound >= inc_obj - tol.mip_gap_tol * std::max(1.0, std::abs(inc_obj))) {
            pruned_min = std::min(pruned_min, bound);
            continue;
        }

        const auto& vals = solver.column_values();
        int frac_var = -1;
        double frac_score = -1.0;
        for (int j : bins) {
            double f = vals[j] - std::floor(vals[j]);
            double dist = std::min(f, 1.0 - f);
            if (dist <= tol.integrality_tol) continue;
            double score = dist;  // most fractional
            if (score > frac_score + 1e-15) {
                frac_score = score;
                frac_var = j;
            }
        }
        if (frac_var < 0) {
            try_incumbent(bound, vals);
            continue;
        }

        uint8_t preferred = vals[frac_var] >= 0.5 ? 1 : 0;
        auto basis = solver.save_basis();
        Node other;
        other.fixings = node.fixings;
        other.fixings.push_back({frac_var, static_cast<uint8_t>(1 - preferred)});
        other.bound = bound;
        other.order = next_order++;
        other.basis = basis;
        Node pref;
        pref.fixings = std::move(node.fixings);
        pref.fixings.push_back({frac_var, preferred});
        pref.bound = bound;
        pref.order = next_order++;
        pref.basis = std::move(basis);
        open.push_back(std::move(other));
        open.push_back(std::move(pref));  // explored first
    }

    double open_bound = kInf;
    for (const auto& nd : open) open_bound = std::min(open_bound, nd.bound);

    out.nodes = nodes;
    if (!have_inc) {
        out.status = limited ? SolveStatus::LimitExceeded : SolveStatus::Infeasible;
        out.best_bound = limited ? (open.empty() ? -kInf : open_bound) : kInf;
        return out;
    }
    out.objective = inc_obj;
    out.x = inc_x;
    if (limited && open_bound < inc_obj) {
        out.status = SolveStatus::LimitExceeded;
        out.best_bound = open_bound == kInf ? -kInf : open_bound;
    } else {
        out.status = SolveStatus::Optimal;
        // remaining bound information: pruned nodes were within gap tolerance
        out.best_bound = std::min({inc_obj, pruned_min, open_bound});
    }
    out.absolute_gap = inc_obj - out.best_bound;
    out.relative_gap = out.absolute_gap / std::max(1.0, std::abs(inc_obj));
    return out;
}

}  // namespace rtnep
