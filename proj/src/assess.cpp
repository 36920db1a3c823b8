#include "rtnep/assess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "json.hpp"

namespace rtnep {

AssessmentReport assess_plan(const GridCase& c, const ExpansionPlan& plan, const Budgets& b,
                             long samples, uint64_t seed, SampleMode mode,
                             double worst_case_reference, const LpTolerances& tol) {
    if (samples < 1) throw std::invalid_argument("samples must be at least 1");
    AssessmentReport rep;
    rep.samples = samples;
    rep.worst_case_reference = worst_case_reference;
    rep.costs.resize(samples, std::numeric_limits<double>::quiet_NaN());
    rep.feasible.assign(samples, 0);

    auto realizations = sample_realizations(c, b, samples, seed, mode);
    DispatchSolver solver(c, plan);
    for (long s = 0; s < samples; ++s) {
        try {
            DispatchResult d = solver.solve(realizations[s], tol);
            rep.costs[s] = d.operating_cost;
            rep.feasible[s] = 1;
        } catch (const InfeasibleDispatchError&) {
            ++rep.infeasible_count;
        }
    }

    std::vector<double> ok;
    ok.reserve(samples);
    for (long s = 0; s < samples; ++s)
        if (rep.feasible[s]) ok.push_back(rep.costs[s]);
    if (!ok.empty()) {
        std::sort(ok.begin(), ok.end());
        rep.min_cost = ok.front();
        rep.max_cost = ok.back();
        double sum = 0.0;
        for (double v : ok) sum += v;
        rep.mean_cost = sum / ok.size();
        double ss = 0.0;
        for (double v : ok) ss += (v - rep.mean_cost) * (v - rep.mean_cost);
        rep.stddev_cost = ok.size() > 1 ? std::sqrt(ss / (ok.size() - 1)) : 0.0;
        // strictly above the reference beyond lp solver tolerance
        double margin = 1e-9 * (1.0 + std::abs(worst_case_reference));
        for (double v : ok)
            if (v > worst_case_reference + margin) ++rep.exceedances;
    }
    return rep;
}

void write_assess_csv(const AssessmentReport& report, std::ostream& os) {
    os << "sample_id,cost,feasible\n";
    char buf[96];
    for (long s = 0; s < report.samples; ++s) {
        if (report.feasible[s]) std::snprintf(buf, sizeof(buf), "%ld,%.17g,1\n", s, report.costs[s]);
        else std::snprintf(buf, sizeof(buf), "%ld,,0\n", s);
        os << buf;
    }
}

void write_histogram_csv(const AssessmentReport& report, std::ostream& os) {
    os << "bin_left,bin_right,count\n";
    std::vector<double> ok;
    for (long s = 0; s < report.samples; ++s)
        if (report.feasible[s]) ok.push_back(report.costs[s]);
    if (ok.empty()) return;
    std::sort(ok.begin(), ok.end());
    double lo = ok.front(), hi = ok.back();
    double iqr = ok[static_cast<size_t>(0.75 * (ok.size() - 1))] -
                 ok[static_cast<size_t>(0.25 * (ok.size() - 1))];
    double width = 2.0 * iqr / std::cbrt(static_cast<double>(ok.size()));
    char buf[128];
    if (width <= 0.0 || hi <= lo) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%zu\n", lo, hi, ok.size());
        os << buf;
        return;
    }
    int nbins = std::max(1, static_cast<int>(std::ceil((hi - lo) / width)));
    width = (hi - lo) / nbins;
    std::vector<long> counts(nbins, 0);
    for (double v : ok) {
        int bin = std::min(nbins - 1, static_cast<int>((v - lo) / width));
        ++counts[bin];
    }
    for (int bn = 0; bn < nbins; ++bn) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%ld\n", lo + bn * width, lo + (bn + 1) * width,
                      counts[bn]);
        os << buf;
    }
}

std::string assess_summary_json(const AssessmentReport& report) {
    nlohmann::json doc;
    doc["samples"] = report.samples;
    doc["min"] = report.min_cost;
    doc["max"] = report.max_cost;
    doc["mean"] = report.mean_cost;
    doc["stddev"] = report.stddev_cost;
    doc["worst_case_reference"] = report.worst_case_reference;
    doc["exceedances"] = report.exceedances;
    doc["infeasible"] = report.infeasible_count;
    return doc.dump(2) + "\n";
}

}  // namespace rtnep
