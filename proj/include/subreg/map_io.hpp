#pragma once

#include "subreg/json_util.hpp"
#include "subreg/maps.hpp"

namespace subreg {

// Map specification format. parse accepts catalog sugar (a single-valued
// type where a set-valued map is expected is lifted); serialize emits the
// explicit canonical form, so serialize(parse(s)) is canonical and
// round-trips bit-exactly.

SingleValuedMap parse_single_valued(const Json& spec);
Json serialize_map(const SingleValuedMap& g);

ParametricSingleValuedMap parse_parametric(const Json& spec);
Json serialize_map(const ParametricSingleValuedMap& f);

SetValuedMap parse_set_valued(const Json& spec);
Json serialize_map(const SetValuedMap& F);

}  // namespace subreg
