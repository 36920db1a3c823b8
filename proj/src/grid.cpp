#include "rtnep/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rtnep {

std::string format_violations(const std::vector<Violation>& violations) {
    std::ostringstream os;
    os << violations.size() << " validation finding(s):";
    for (const auto& v : violations) {
        os << "\n  [" << (v.severity == Violation::Severity::Error ? "error" : "warning") << "] "
           << v.element;
        if (v.id >= 0) os << " " << v.id;
        os << ": " << v.message;
    }
    return os.str();
}

void GridCase::rebuild_indices() {
    bus_index.clear();
    for (int n = 0; n < static_cast<int>(buses.size()); ++n) bus_index[buses[n].id] = n;
    existing_idx.clear();
    candidate_idx.clear();
    for (int l = 0; l < static_cast<int>(lines.size()); ++l) {
        (lines[l].status == LineStatus::Existing ? existing_idx : candidate_idx).push_back(l);
    }
    uncertain_loads.clear();
    for (int j = 0; j < static_cast<int>(loads.size()); ++j)
        if (loads[j].demand_deviation > 0.0) uncertain_loads.push_back(j);
    uncertain_gens.clear();
    for (int i = 0; i < static_cast<int>(generators.size()); ++i)
        if (generators[i].capacity_deviation > 0.0) uncertain_gens.push_back(i);
}

namespace {

bool finite(double x) { return std::isfinite(x); }

int element_rank(const std::string& e) {
    if (e == "case") return 0;
    if (e == "bus") return 1;
    if (e == "line") return 2;
    if (e == "generator") return 3;
    return 4;
}

}  // namespace

std::vector<Violation> validate(const GridCase& c) {
    std::vector<Violation> out;
    auto err = [&](const std::string& el, long long id, const std::string& msg) {
        out.push_back({Violation::Severity::Error, el, id, msg});
    };
    auto warn = [&](const std::string& el, long long id, const std::string& msg) {
        out.push_back({Violation::Severity::Warning, el, id, msg});
    };

    if (!(c.sigma > 0.0) || !finite(c.sigma)) err("case", -1, "sigma must be strictly positive");
    if (c.investment_budget < 0.0 || std::isnan(c.investment_budget))
        err("case", -1, "investment_budget must be nonnegative");
    if (!(c.base_mva > 0.0) || !finite(c.base_mva)) err("case", -1, "base_mva must be strictly positive");

    {
        std::unordered_map<long long, int> seen;
        for (const auto& b : c.buses) {
            if (++seen[b.id] == 2) err("bus", b.id, "duplicate bus id");
        }
    }
    auto check_unique = [&](const std::string& el, auto const& items) {
        std::unordered_map<long long, int> seen;
        for (const auto& it : items)
            if (++seen[it.id] == 2) err(el, it.id, "duplicate id");
    };
    check_unique("line", c.lines);
    check_unique("generator", c.generators);
    check_unique("load", c.loads);

    const int nb = static_cast<int>(c.buses.size());
    auto bus_ok = [&](int n) { return n >= 0 && n < nb; };

    for (const auto& l : c.lines) {
        if (!bus_ok(l.from_bus) || !bus_ok(l.to_bus))
            err("line", l.id, "endpoint references unknown bus");
        else if (l.from_bus == l.to_bus)
            err("line", l.id, "from and to bus coincide");
        if (!(l.reactance > 0.0) || !finite(l.reactance)) err("line", l.id, "nonpositive reactance");
        if (l.capacity < 0.0 || !finite(l.capacity)) err("line", l.id, "capacity must be finite and nonnegative");
        if (l.status == LineStatus::Candidate) {
            if (std::isnan(l.build_cost)) err("line", l.id, "candidate line missing build_cost");
            else if (l.build_cost < 0.0 || !finite(l.build_cost))
                err("line", l.id, "build_cost must be finite and nonnegative");
        } else if (!std::isnan(l.build_cost) && l.build_cost != 0.0) {
            err("line", l.id, "build_cost only allowed on candidate lines");
        }
    }

    double max_gen_cost = 0.0;
    for (const auto& g : c.generators) {
        if (!bus_ok(g.bus)) err("generator", g.id, "references unknown bus");
        if (g.marginal_cost < 0.0 || !finite(g.marginal_cost)) err("generator", g.id, "negative marginal_cost");
        if (g.nominal_capacity < 0.0 || !finite(g.nominal_capacity))
            err("generator", g.id, "negative nominal_capacity");
        if (g.capacity_deviation < 0.0 || g.capacity_deviation > g.nominal_capacity)
            err("generator", g.id, "capacity_deviation outside [0, nominal_capacity]");
        max_gen_cost = std::max(max_gen_cost, g.marginal_cost);
    }

    for (const auto& d : c.loads) {
        if (!bus_ok(d.bus)) err("load", d.id, "references unknown bus");
        if (d.marginal_shed_cost < 0.0 || !finite(d.marginal_shed_cost))
            err("load", d.id, "negative marginal_shed_cost");
        if (d.nominal_demand < 0.0 || !finite(d.nominal_demand)) err("load", d.id, "negative nominal_demand");
        if (d.demand_deviation < 0.0 || !finite(d.demand_deviation))
            err("load", d.id, "negative demand_deviation");
        if (d.shed_fraction < 0.0 || d.shed_fraction > 1.0 || !finite(d.shed_fraction))
            err("load", d.id, "shed_fraction outside [0,1]");
        if (d.marginal_shed_cost <= max_gen_cost)
            warn("load", d.id, "shed cost does not exceed every generator marginal cost");
    }

    std::stable_sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
        int ra = element_rank(a.element), rb = element_rank(b.element);
        if (ra != rb) return ra < rb;
        return a.id < b.id;
    });
    return out;
}

void require_valid(const GridCase& c) {
    auto all = validate(c);
    std::vector<Violation> errors;
    for (auto& v : all)
        if (v.severity == Violation::Severity::Error) errors.push_back(v);
    if (!errors.empty()) throw ValidationError(std::move(errors));
}

std::vector<int> connected_components(const GridCase& c, const std::vector<uint8_t>& built_candidates) {
    const int nb = static_cast<int>(c.buses.size());
    std::vector<std::vector<int>> adj(nb);
    auto connect = [&](const Line& l) {
        adj[l.from_bus].push_back(l.to_bus);
        adj[l.to_bus].push_back(l.from_bus);
    };
    for (int idx : c.existing_idx) connect(c.lines[idx]);
    for (int k = 0; k < static_cast<int>(c.candidate_idx.size()); ++k) {
        if (k < static_cast<int>(built_candidates.size()) && built_candidates[k])
            connect(c.lines[c.candidate_idx[k]]);
    }
    std::vector<int> comp(nb, -1);
    int next = 0;
    std::vector<int> stack;
    for (int start = 0; start < nb; ++start) {
        if (comp[start] >= 0) continue;
        comp[start] = next;
        stack.push_back(start);
        while (!stack.empty()) {
            int n = stack.back();
            stack.pop_back();
            for (int m : adj[n]) {
                if (comp[m] < 0) {
                    comp[m] = next;
                    stack.push_back(m);
                }
            }
        }
        ++next;
    }
    return comp;
}

}  // namespace rtnep
