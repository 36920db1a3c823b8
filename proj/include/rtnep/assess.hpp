#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rtnep/recourse.hpp"

namespace rtnep {

// Out-of-sample Monte Carlo picture of a fixed plan: per-sample recourse cost
// plus summary statistics. Statistics cover feasible samples and are computed
// over sorted costs, so they do not depend on sample order.
struct AssessmentReport {
    long samples = 0;
    std::vector<double> costs;      // per sample, NaN when infeasible
    std::vector<uint8_t> feasible;  // per sample
    double min_cost = 0.0;
    double max_cost = 0.0;
    double mean_cost = 0.0;
    double stddev_cost = 0.0;  // sample standard deviation
    double worst_case_reference = 0.0;
    long exceedances = 0;  // samples with cost strictly above the reference
    long infeasible_count = 0;
};

AssessmentReport assess_plan(const GridCase& c, const ExpansionPlan& plan, const Budgets& b,
                             long samples, uint64_t seed, SampleMode mode,
                             double worst_case_reference, const LpTolerances& tol = {});

// sample_id, cost, feasible
void write_assess_csv(const AssessmentReport& report, std::ostream& os);

// Freedman-Diaconis bins over the feasible costs: bin_left, bin_right, count.
void write_histogram_csv(const AssessmentReport& report, std::ostream& os);

std::string assess_summary_json(const AssessmentReport& report);

}  // namespace rtnep
