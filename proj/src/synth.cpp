#include "rtnep/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace rtnep {

namespace {

double round2(double v) { return std::round(v * 100.0) / 100.0; }

uint64_t bounded(std::mt19937_64& rng, uint64_t n) {
    uint64_t limit = std::numeric_limits<uint64_t>::max() - std::numeric_limits<uint64_t>::max() % n;
    uint64_t v;
    do {
        v = rng();
    } while (v >= limit);
    return v % n;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

}  // namespace

GridCase make_scale_case(int buses, int lines, int candidates, uint64_t seed) {
    if (buses < 8 || lines < buses || candidates < 1)
        throw std::invalid_argument("make_scale_case: need buses >= 8, lines >= buses, candidates >= 1");
    std::mt19937_64 rng(seed);
    GridCase c;
    c.name = "synthetic-" + std::to_string(buses);
    c.base_mva = 100.0;
    c.sigma = 0.001;

    for (int n = 0; n < buses; ++n) c.buses.push_back({n + 1});

    // region A: first half, generation heavy; region B: second half, load heavy
    const int half = buses / 2;

    // generators: bulk of capacity in region A
    int ngen = std::max(8, buses / 8);
    for (int i = 0; i < ngen; ++i) {
        Generator g;
        g.id = i + 1;
        bool region_a = i % 4 != 3;  // 3 of 4 units in region A
        int n = static_cast<int>(bounded(rng, half));
        g.bus = region_a ? n : half + n;
        g.marginal_cost = round2(region_a ? uniform(rng, 5.0, 15.0) : uniform(rng, 18.0, 30.0));
        g.nominal_capacity = round2(uniform(rng, 150.0, 500.0));
        g.capacity_deviation = 0.0;
        c.generators.push_back(g);
    }
    // loads: bulk of demand in region B
    int nload = std::max(8, buses / 2);
    double total_demand = 0.0;
    for (int j = 0; j < nload; ++j) {
        Load d;
        d.id = j + 1;
        bool region_b = j % 4 != 3;
        int n = static_cast<int>(bounded(rng, half));
        d.bus = region_b ? half + n : n;
        d.nominal_demand = round2(uniform(rng, 2.0, 12.0));
        d.marginal_shed_cost = round2(uniform(rng, 800.0, 1500.0));
        d.demand_deviation = 0.0;
        d.shed_fraction = 1.0;
        total_demand += d.nominal_demand;
        c.loads.push_back(d);
    }
    // scale generation to 1.4x nominal demand
    double total_cap = 0.0;
    for (const auto& g : c.generators) total_cap += g.nominal_capacity;
    double f = 1.4 * total_demand / total_cap;
    for (auto& g : c.generators) g.nominal_capacity = round2(g.nominal_capacity * f);

    // region-B deficit fixes the cut capacity so the boundary is congested at
    // every size: the two crossing ring links carry half the deficit together
    double b_demand = 0.0, b_cap = 0.0;
    for (const auto& d : c.loads)
        if (d.bus >= half) b_demand += d.nominal_demand;
    for (const auto& g : c.generators)
        if (g.bus >= half) b_cap += g.nominal_capacity;
    double deficit = b_demand - b_cap;
    double cut_cap = deficit > 0.0 ? std::max(10.0, round2(0.25 * deficit)) : 400.0;

    // ring backbone; the two ring links crossing the region boundary are the
    // only existing transfer corridor
    long long line_id = 1;
    for (int n = 0; n < buses; ++n) {
        Line l;
        l.id = line_id++;
        l.from_bus = n;
        l.to_bus = (n + 1) % buses;
        l.reactance = round2(uniform(rng, 0.05, 0.25));
        bool crossing = (l.from_bus < half) != (l.to_bus < half);
        l.capacity = crossing ? cut_cap : 800.0;
        l.status = LineStatus::Existing;
        c.lines.push_back(l);
    }
    // chords stay inside a region so the cut capacity is the ring's alone
    for (int e = buses; e < lines; ++e) {
        Line l;
        l.id = line_id++;
        bool region_b = e % 2 != 0;
        int base = region_b ? half : 0;
        int width = region_b ? buses - half : half;
        int a = base + static_cast<int>(bounded(rng, width));
        int b = base + static_cast<int>(bounded(rng, width));
        if (a == b) b = base + (b - base + 1) % width;
        l.from_bus = a;
        l.to_bus = b;
        l.reactance = round2(uniform(rng, 0.1, 0.5));
        l.capacity = round2(uniform(rng, 200.0, 500.0));
        l.status = LineStatus::Existing;
        c.lines.push_back(l);
    }

    // uncertainty: the 100 largest loads (or all), +/-20%; capacity for the
    // quarter of units with the smallest capacity, down to zero
    {
        std::vector<int> order(c.loads.size());
        for (size_t j = 0; j < order.size(); ++j) order[j] = static_cast<int>(j);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (c.loads[a].nominal_demand != c.loads[b].nominal_demand)
                return c.loads[a].nominal_demand > c.loads[b].nominal_demand;
            return a < b;
        });
        int nu = std::min<int>(100, static_cast<int>(order.size()));
        for (int k = 0; k < nu; ++k)
            c.loads[order[k]].demand_deviation = round2(0.2 * c.loads[order[k]].nominal_demand);
    }
    {
        std::vector<int> order(c.generators.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            if (c.generators[a].nominal_capacity != c.generators[b].nominal_capacity)
                return c.generators[a].nominal_capacity < c.generators[b].nominal_capacity;
            return a < b;
        });
        int nu = std::max<int>(1, static_cast<int>(order.size()) / 4);
        for (int k = 0; k < nu; ++k)
            c.generators[order[k]].capacity_deviation = c.generators[order[k]].nominal_capacity;
    }

    // candidates: several across the congested cut, the rest random corridors
    int cut_candidates = std::min(8, candidates);
    for (int k = 0; k < candidates; ++k) {
        Line l;
        l.id = line_id++;
        l.status = LineStatus::Candidate;
        if (k < cut_candidates) {
            l.from_bus = static_cast<int>(bounded(rng, half));
            l.to_bus = half + static_cast<int>(bounded(rng, buses - half));
            l.capacity = deficit > 0.0 ? std::max(15.0, round2(deficit / 8.0)) : 250.0;
            l.build_cost = round2(uniform(rng, 20.0, 40.0));
        } else {
            l.from_bus = static_cast<int>(bounded(rng, buses));
            l.to_bus = static_cast<int>(bounded(rng, buses));
            if (l.from_bus == l.to_bus) l.to_bus = (l.to_bus + 1) % buses;
            l.capacity = round2(uniform(rng, 60.0, 150.0));
            l.build_cost = round2(uniform(rng, 150.0, 300.0));
        }
        l.reactance = round2(uniform(rng, 0.1, 0.4));
        c.lines.push_back(l);
    }
    c.investment_budget = 400.0;
    c.rebuild_indices();
    require_valid(c);
    return c;
}

GridCase make_random_small_case(uint64_t seed) {
    std::mt19937_64 rng(seed);
    GridCase c;
    c.name = "random-small-" + std::to_string(seed);
    c.base_mva = 100.0;
    c.sigma = 0.5 + 0.5 * static_cast<double>(bounded(rng, 4));  // 0.5 .. 2.0

    int nb = 3 + static_cast<int>(bounded(rng, 4));  // 3..6 buses
    for (int n = 0; n < nb; ++n) c.buses.push_back({n + 1});

    long long line_id = 1;
    auto add_line = [&](int a, int b, bool candidate) {
        Line l;
        l.id = line_id++;
        l.from_bus = a;
        l.to_bus = b;
        l.reactance = round2(uniform(rng, 0.1, 0.6));
        l.capacity = round2(uniform(rng, 60.0, 150.0));
        l.status = candidate ? LineStatus::Candidate : LineStatus::Existing;
        if (candidate) l.build_cost = round2(uniform(rng, 10.0, 60.0));
        c.lines.push_back(l);
    };
    // random spanning tree, then a few extras
    for (int n = 1; n < nb; ++n) add_line(static_cast<int>(bounded(rng, n)), n, false);
    int extra = static_cast<int>(bounded(rng, 3));
    for (int e = 0; e < extra; ++e) {
        int a = static_cast<int>(bounded(rng, nb));
        int b = static_cast<int>(bounded(rng, nb));
        if (a == b) b = (b + 1) % nb;
        add_line(a, b, false);
    }

    int ngen = 2 + static_cast<int>(bounded(rng, 2));  // 2..3
    for (int i = 0; i < ngen; ++i) {
        Generator g;
        g.id = i + 1;
        g.bus = static_cast<int>(bounded(rng, nb));
        g.marginal_cost = round2(uniform(rng, 5.0, 30.0));
        g.nominal_capacity = round2(uniform(rng, 100.0, 350.0));
        g.capacity_deviation = round2(uniform(rng, 0.0, 0.5) * g.nominal_capacity);
        c.generators.push_back(g);
    }
    int nload = 2 + static_cast<int>(bounded(rng, 3));  // 2..4
    for (int j = 0; j < nload; ++j) {
        Load d;
        d.id = j + 1;
        d.bus = static_cast<int>(bounded(rng, nb));
        d.marginal_shed_cost = round2(uniform(rng, 200.0, 600.0));
        d.nominal_demand = round2(uniform(rng, 40.0, 150.0));
        d.demand_deviation = round2(uniform(rng, 0.0, 0.3) * d.nominal_demand);
        d.shed_fraction = 1.0;
        c.loads.push_back(d);
    }

    int ncand = 2 + static_cast<int>(bounded(rng, 4));  // 2..5
    for (int k = 0; k < ncand; ++k) {
        int a = static_cast<int>(bounded(rng, nb));
        int b = static_cast<int>(bounded(rng, nb));
        if (a == b) b = (b + 1) % nb;
        add_line(a, b, true);
    }
    double cand_total = 0.0;
    for (const auto& l : c.lines)
        if (l.status == LineStatus::Candidate) cand_total += l.build_cost;
    c.investment_budget = round2(0.7 * cand_total);

    c.rebuild_indices();
    require_valid(c);
    return c;
}

}  // namespace rtnep
