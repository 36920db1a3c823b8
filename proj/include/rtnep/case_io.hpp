#pragma once

#include <string>

#include "rtnep/grid.hpp"

namespace rtnep {

enum class CaseFormat { NativeJson, MatpowerLike };

// Defaults applied by the matpower-like importer for fields that format cannot
// express. The native format carries everything and ignores these.
struct ImportDefaults {
    double shed_cost = 1000.0;
    double demand_deviation_fraction = 0.0;
    double shed_fraction = 1.0;
};

// Parse, re-index and validate a case file. Throws ParseError on malformed
// input and ValidationError listing every violated invariant.
GridCase load_case(const std::string& path, CaseFormat format = CaseFormat::NativeJson,
                   const ImportDefaults& defaults = {});

GridCase parse_case_json(const std::string& text, const std::string& origin);
GridCase parse_case_matpower(const std::string& text, const std::string& origin,
                             const ImportDefaults& defaults = {});

// Native-format serialization; load_case(serialize(c)) is the identity,
// bit-exact on all numeric fields.
std::string serialize_case(const GridCase& c);

}  // namespace rtnep
