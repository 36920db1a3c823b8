#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rtnep/grid.hpp"

namespace rtnep {

// Number of loads / generating units allowed to deviate simultaneously.
// Values are validated against the full element counts; elements with zero
// deviation never deviate, so the effective budget is capped by the number of
// uncertain elements.
struct Budgets {
    int gamma_d = 0;
    int gamma_g = 0;
};

void check_budgets(const GridCase& c, const Budgets& b);

// A vertex of the cardinality uncertainty set: flags say which elements sit at
// their extreme, realized vectors carry the resulting demand / capacity.
struct Realization {
    std::vector<uint8_t> z_d;       // per load
    std::vector<uint8_t> z_g;       // per generator
    std::vector<double> demand;     // per load, MW
    std::vector<double> capacity;   // per generator, MW

    bool same_vertex(const Realization& o) const { return z_d == o.z_d && z_g == o.z_g; }
};

Realization realize(const GridCase& c, const std::vector<uint8_t>& z_d,
                    const std::vector<uint8_t>& z_g, const Budgets& b);

Realization nominal_realization(const GridCase& c);

// Exact vertex count as a decimal string (may exceed 64 bits), plus a
// saturating value for cheap cap comparisons.
struct VertexCount {
    std::string decimal;
    unsigned long long clamped;  // ULLONG_MAX when the true count overflows
    bool exceeds(unsigned long long cap) const;
};

VertexCount count_vertices(const GridCase& c, const Budgets& b);

// Emits every realization with sum(z_d) <= gamma_d and sum(z_g) <= gamma_g
// exactly once, in lexicographic order of (z_d, z_g) restricted to the
// uncertain elements. Throws CapExceededError before emitting anything when
// the count exceeds `cap`.
void enumerate_vertices(const GridCase& c, const Budgets& b, unsigned long long cap,
                        const std::function<void(const Realization&)>& emit);

enum class SampleMode { ExactBudget, WithinBudget };

// Uniform sampling of uncertainty-set vertices, reproducible from the seed.
// ExactBudget draws exactly gamma deviating elements (Fisher-Yates selection);
// WithinBudget is uniform over all vertices with at most gamma deviations.
std::vector<Realization> sample_realizations(const GridCase& c, const Budgets& b, long count,
                                             uint64_t seed, SampleMode mode);

std::string realization_to_json(const GridCase& c, const Realization& r);
Realization realization_from_json(const GridCase& c, const std::string& text,
                                  const std::string& origin);

}  // namespace rtnep
