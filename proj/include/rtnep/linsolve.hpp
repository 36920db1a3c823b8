#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace rtnep {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowKind { Equal, LessEqual, GreaterEqual };

enum class SolveStatus { Optimal, Infeasible, Unbounded, LimitExceeded, NumericalFailure };

const char* to_string(SolveStatus s);

// Minimization LP over bounded variables. Rows are built incrementally and
// kept in insertion order; duals are reported in the same order.
struct LinearProgram {
    struct Row {
        RowKind kind;
        double rhs;
        std::vector<std::pair<int, double>> coefs;  // (variable, coefficient)
        std::string name;
    };

    std::vector<double> lower, upper, objective;
    std::vector<std::string> var_names;
    std::vector<Row> rows;

    int add_variable(double lo, double up, double obj, std::string name = {});
    int add_row(RowKind kind, double rhs, std::vector<std::pair<int, double>> coefs,
                std::string name = {});

    int num_vars() const { return static_cast<int>(lower.size()); }
    int num_rows() const { return static_cast<int>(rows.size()); }

    // Throws std::invalid_argument on non-finite coefficients or crossed bounds.
    void check_well_formed() const;
};

struct LpTolerances {
    double feas_tol = 1e-9;
    double duality_gap_tol = 1e-9;
    long max_iterations = 2'000'000;
};

struct LpSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    double objective = 0.0;
    std::vector<double> x;
    std::vector<double> row_duals;      // d(objective)/d(rhs)
    std::vector<double> reduced_costs;  // d(objective)/d(bound) for nonbasic variables
    long iterations = 0;
    double max_primal_residual = 0.0;
    double cs_residual = 0.0;  // worst scaled complementary-slackness violation
    double duality_gap = 0.0;
};

LpSolution solve_lp(const LinearProgram& lp, const LpTolerances& tol = {});

struct MixedIntegerProgram {
    LinearProgram lp;
    std::vector<int> binary_vars;  // indices restricted to {0,1}

    void check_well_formed() const;
};

struct MipTolerances {
    LpTolerances lp;
    double mip_gap_tol = 1e-8;
    double integrality_tol = 1e-7;
    long node_limit = 5'000'000;
    double time_limit_s = kInf;
    int best_bound_restart_interval = 1000;  // depth-first with periodic best-bound node selection
};

struct MipSolution {
    SolveStatus status = SolveStatus::NumericalFailure;
    double objective = 0.0;
    std::vector<double> x;
    double best_bound = -kInf;
    double absolute_gap = kInf;
    double relative_gap = kInf;
    long nodes = 0;
};

// Branch-and-bound over the declared binaries; `incumbent_hint`, when given,
// seeds the search with a feasible point obtained by fixing binaries to the
// hint's rounded values.
MipSolution solve_mip(const MixedIntegerProgram& mip, const MipTolerances& tol = {},
                      const std::vector<double>* incumbent_hint = nullptr);

// Fixed-format interchange dump (LP file format) for external cross-checking.
void dump_lp(const LinearProgram& lp, std::ostream& os, const std::vector<int>* binaries = nullptr);

}  // namespace rtnep
