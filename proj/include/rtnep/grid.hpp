#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "rtnep/errors.hpp"

namespace rtnep {

enum class LineStatus { Existing, Candidate };

struct Bus {
    long long id = 0;  // external id; position in GridCase::buses is the internal index
};

struct Line {
    long long id = 0;
    int from_bus = -1;  // internal bus index
    int to_bus = -1;
    double reactance = 0.0;    // per unit
    double capacity = 0.0;     // MW
    LineStatus status = LineStatus::Existing;
    double build_cost = 0.0;   // meaningful for candidates only
};

struct Generator {
    long long id = 0;
    int bus = -1;
    double marginal_cost = 0.0;       // $/MWh
    double nominal_capacity = 0.0;    // MW
    double capacity_deviation = 0.0;  // MW, downward fluctuation width
};

struct Load {
    long long id = 0;
    int bus = -1;
    double marginal_shed_cost = 0.0;  // $/MWh
    double nominal_demand = 0.0;      // MW
    double demand_deviation = 0.0;    // MW, upward fluctuation width
    double shed_fraction = 1.0;       // gamma, sheddable share of realized demand
};

// A validated planning instance. Immutable after construction; element vectors
// are densely indexed and all cross references use internal indices.
struct GridCase {
    std::string name;
    double base_mva = 100.0;
    double sigma = 1.0;              // weighting between investment and operating cost
    double investment_budget = 0.0;  // Pi

    std::vector<Bus> buses;
    std::vector<Line> lines;  // existing lines first, then candidates
    std::vector<Generator> generators;
    std::vector<Load> loads;

    std::unordered_map<long long, int> bus_index;  // external id -> internal index

    int num_existing() const { return static_cast<int>(existing_idx.size()); }
    int num_candidates() const { return static_cast<int>(candidate_idx.size()); }
    std::vector<int> existing_idx;   // positions in `lines`
    std::vector<int> candidate_idx;  // positions in `lines`

    // Loads/units with a strictly positive deviation; only these count against budgets.
    std::vector<int> uncertain_loads;
    std::vector<int> uncertain_gens;

    void rebuild_indices();
};

// Full structural validation; returns all findings ordered by (element, id).
std::vector<Violation> validate(const GridCase& c);

// Throws ValidationError when validate() reports any Severity::Error finding.
void require_valid(const GridCase& c);

// Connected components of the graph spanned by existing lines plus the built
// candidates flagged in `built_candidates` (indexed like candidate_idx).
// Returns per-bus component id; component ids are ordered by lowest bus index.
std::vector<int> connected_components(const GridCase& c, const std::vector<uint8_t>& built_candidates);

}  // namespace rtnep
