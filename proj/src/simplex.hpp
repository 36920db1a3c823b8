#pragma once

#include <cstdint>
#include <vector>

#include "rtnep/linsolve.hpp"

namespace rtnep::detail {

enum VStat : uint8_t { kAtLower = 0, kAtUpper = 1, kFreeNonbasic = 2, kBasic = 3 };

struct BasisSnapshot {
    std::vector<int32_t> basic;
    std::vector<uint8_t> vstat;
    bool empty() const { return basic.empty() && vstat.empty(); }
};

// Bounded-variable primal simplex over the row-slack computational form
// min c'x  s.t.  Ax + s = b,  lo <= (x,s) <= up. Feasibility is restored by a
// piecewise-linear (long-step) phase 1 on the same basis machinery; the basis
// inverse is kept as a sparse LU refreshed periodically plus product-form etas.
class SimplexSolver {
public:
    explicit SimplexSolver(const LinearProgram& lp);

    // Structural variable bounds may be changed between solves (used by
    // branch-and-bound); reset_bounds restores the constructed values.
    void set_bounds(int var, double lo, double up);
    void reset_bounds();

    // Row right-hand sides may be retargeted between solves (used to re-solve
    // the dispatch problem across uncertainty realizations).
    void set_rhs(int row, double v) { rhs_[row] = v; }

    struct SolveInfo {
        SolveStatus status = SolveStatus::NumericalFailure;
        double objective = 0.0;
        long iterations = 0;
        double primal_residual = 0.0;
        double cs_residual = 0.0;
        double dual_gap = 0.0;
    };

    SolveInfo solve(const LpTolerances& tol, bool force_bland = false);

    int num_vars() const { return n_; }
    int num_rows() const { return m_; }

    // Valid after solve(); column_values covers structurals then slacks.
    const std::vector<double>& column_values() const { return xval_; }
    const std::vector<double>& duals() const { return y_out_; }
    const std::vector<double>& reduced_costs() const { return d_out_; }
    // Rows carrying a nonzero multiplier in the phase-1 certificate when the
    // problem is infeasible.
    const std::vector<int>& infeasible_rows() const { return farkas_rows_; }

    BasisSnapshot save_basis() const { return {basic_, vstat_}; }
    void load_basis(const BasisSnapshot& b);
    void clear_basis();

private:
    int n_ = 0, m_ = 0, ncol_ = 0;

    // column-major matrix over structural + slack columns
    std::vector<int> col_start_;
    std::vector<int> col_row_;
    std::vector<double> col_val_;
    std::vector<double> cost_, lo_, up_, orig_lo_, orig_up_, rhs_;

    bool has_basis_ = false;
    std::vector<int32_t> basic_;  // position -> column
    std::vector<uint8_t> vstat_;  // column -> VStat
    std::vector<double> xval_;    // column -> value

    // LU of the basis: elimination step t pivots matrix row lu_pivrow_[t] for
    // the column at basis position lu_order_[t].
    std::vector<int> lu_pivrow_, lu_rowpos_, lu_order_;
    std::vector<std::vector<std::pair<int, double>>> lu_lcols_;  // (matrix row, multiplier)
    std::vector<std::vector<std::pair<int, double>>> lu_ucols_;  // (earlier step, value)
    std::vector<double> lu_udiag_;

    struct Eta {
        int pos;
        double wp;
        std::vector<std::pair<int, double>> ent;  // (position, value), pos excluded
    };
    std::vector<Eta> etas_;

    std::vector<double> y_out_, d_out_;
    std::vector<int> farkas_rows_;

    // scratch
    mutable std::vector<double> work_, zstep_;
    std::vector<int> imark_;
    int mark_version_ = 0;

    void cold_basis();
    bool factorize();  // one repair round inside; false on unrecoverable failure
    void compute_basic_values();
    void ftran(std::vector<double>& v) const;
    void btran(std::vector<double>& v) const;
    double nonbasic_value(int col, uint8_t st) const;
    double infeas_tol(int col, double feas_tol) const;
};

}  // namespace rtnep::detail
