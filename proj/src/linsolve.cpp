#include "rtnep/linsolve.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "rtnep/errors.hpp"
#include "simplex.hpp"

namespace rtnep {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "optimal";
        case SolveStatus::Infeasible: return "infeasible";
        case SolveStatus::Unbounded: return "unbounded";
        case SolveStatus::LimitExceeded: return "limit_exceeded";
        case SolveStatus::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

int LinearProgram::add_variable(double lo, double up, double obj, std::string name) {
    lower.push_back(lo);
    upper.push_back(up);
    objective.push_back(obj);
    var_names.push_back(std::move(name));
    return static_cast<int>(lower.size()) - 1;
}

int LinearProgram::add_row(RowKind kind, double rhs, std::vector<std::pair<int, double>> coefs,
                           std::string name) {
    rows.push_back({kind, rhs, std::move(coefs), std::move(name)});
    return static_cast<int>(rows.size()) - 1;
}

void LinearProgram::check_well_formed() const {
    const int n = num_vars();
    for (int j = 0; j < n; ++j) {
        if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j])
            throw std::invalid_argument("variable " + std::to_string(j) + ": inconsistent bounds");
        if (!std::isfinite(objective[j]))
            throw std::invalid_argument("variable " + std::to_string(j) + ": non-finite objective");
    }
    for (size_t i = 0; i < rows.size(); ++i) {
        if (!std::isfinite(rows[i].rhs))
            throw std::invalid_argument("row " + std::to_string(i) + ": non-finite rhs");
        for (const auto& [j, v] : rows[i].coefs) {
            if (j < 0 || j >= n) throw std::invalid_argument("row " + std::to_string(i) + ": bad variable index");
            if (!std::isfinite(v)) throw std::invalid_argument("row " + std::to_string(i) + ": non-finite coefficient");
        }
    }
}

void MixedIntegerProgram::check_well_formed() const {
    lp.check_well_formed();
    for (int j : binary_vars) {
        if (j < 0 || j >= lp.num_vars()) throw std::invalid_argument("binary index out of range");
        if (lp.lower[j] < 0.0 || lp.upper[j] > 1.0)
            throw std::invalid_argument("binary variable " + std::to_string(j) + " has bounds outside [0,1]");
    }
}

namespace {

LpSolution extract(const detail::SimplexSolver& solver, const detail::SimplexSolver::SolveInfo& info) {
    LpSolution out;
    out.status = info.status;
    out.objective = info.objective;
    out.iterations = info.iterations;
    out.max_primal_residual = info.primal_residual;
    out.cs_residual = info.cs_residual;
    out.duality_gap = info.dual_gap;
    out.x.assign(solver.column_values().begin(), solver.column_values().begin() + solver.num_vars());
    out.row_duals = solver.duals();
    out.reduced_costs = solver.reduced_costs();
    return out;
}

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpTolerances& tol) {
    lp.check_well_formed();
    detail::SimplexSolver solver(lp);
    auto info = solver.solve(tol);

    bool suspect = info.status == SolveStatus::NumericalFailure ||
                   (info.status == SolveStatus::Optimal &&
                    (info.primal_residual > tol.feas_tol * 10 ||
                     info.dual_gap > tol.duality_gap_tol * (1.0 + std::abs(info.objective))));
    if (suspect) {
        detail::SimplexSolver retry(lp);
        auto info2 = retry.solve(tol, /*force_bland=*/true);
        if (info2.status == SolveStatus::NumericalFailure ||
            (info2.status == SolveStatus::Optimal &&
             (info2.primal_residual > tol.feas_tol * 10 ||
              info2.dual_gap > tol.duality_gap_tol * (1.0 + std::abs(info2.objective))))) {
            throw NumericalError(info2.iterations, std::max(info2.primal_residual, info2.dual_gap),
                                 "lp solve failed numerically");
        }
        return extract(retry, info2);
    }
    return extract(solver, info);
}

void dump_lp(const LinearProgram& lp, std::ostream& os, const std::vector<int>* binaries) {
    auto var = [&](int j) { return "x" + std::to_string(j); };
    os << "\\ rtnep lp dump\nMinimize\n obj:";
    bool first = true;
    for (int j = 0; j < lp.num_vars(); ++j) {
        if (lp.objective[j] == 0.0) continue;
        char buf[64];
        std::snprintf(buf, sizeof(buf), " %+.17g ", lp.objective[j]);
        os << buf << var(j);
        first = false;
    }
    if (first) os << " 0 " << var(0);
    os << "\nSubject To\n";
    for (int i = 0; i < lp.num_rows(); ++i) {
        const auto& row = lp.rows[i];
        os << " " << (row.name.empty() ? "r" + std::to_string(i) : row.name) << ":";
        for (const auto& [j, v] : row.coefs) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), " %+.17g ", v);
            os << buf << var(j);
        }
        const char* rel = row.kind == RowKind::Equal ? "=" : (row.kind == RowKind::LessEqual ? "<=" : ">=");
        char buf[64];
        std::snprintf(buf, sizeof(buf), " %s %.17g\n", rel, row.rhs);
        os << buf;
    }
    os << "Bounds\n";
    for (int j = 0; j < lp.num_vars(); ++j) {
        if (lp.lower[j] == -kInf && lp.upper[j] == kInf) {
            os << " " << var(j) << " free\n";
        } else {
            char buf[128];
            if (lp.lower[j] == -kInf) std::snprintf(buf, sizeof(buf), " -inf <= %s <= %.17g\n", var(j).c_str(), lp.upper[j]);
            else if (lp.upper[j] == kInf) std::snprintf(buf, sizeof(buf), " %.17g <= %s\n", lp.lower[j], var(j).c_str());
            else std::snprintf(buf, sizeof(buf), " %.17g <= %s <= %.17g\n", lp.lower[j], var(j).c_str(), lp.upper[j]);
            os << buf;
        }
    }
    if (binaries && !binaries->empty()) {
        os << "Binaries\n";
        for (int j : *binaries) os << " " << var(j);
        os << "\n";
    }
    os << "End\n";
}

}  // namespace rtnep
