#pragma once

#include <cstdint>

#include "rtnep/grid.hpp"

namespace rtnep {

// Synthetic large planning instance for scale testing: a ring backbone with
// random chords, a deliberately congested cut between two regions, and
// candidate corridors of which a handful relieve the congestion.
GridCase make_scale_case(int buses, int lines, int candidates, uint64_t seed);

// Small randomized instance (3-6 buses) for property suites; always fully
// sheddable so the recourse stays feasible.
GridCase make_random_small_case(uint64_t seed);

}  // namespace rtnep
