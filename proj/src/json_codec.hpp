#pragma once
#include <initializer_list>
#include <string>

#include "json.hpp"
#include "orbifoldkit/errors.hpp"
#include "orbifoldkit/injectivity.hpp"
#include "orbifoldkit/orbifold.hpp"
#include "orbifoldkit/serialization.hpp"

// JSON encodings shared by the serialization front end and the report
// builder.  Values keep their exact arithmetic: rationals travel as "p/q"
// strings, never as floating point.  Insertion-ordered objects make every
// emission byte-stable.

namespace orbifoldkit::detail {

using OJson = nlohmann::ordered_json;

// Strict object shape check: every listed required key present, no keys
// outside required + optional.
void require_keys(const OJson& j, const char* what,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional);

OJson rat_to_json(const Rat& r);
Rat rat_from_json(const OJson& j, const char* what);

OJson point_to_json(const TorusPoint& p);
TorusPoint point_from_json(const OJson& j, const char* what);

OJson sphere_to_json(const SpherePoint& p);

OJson mat_to_json(const Mat2Z& m);
Mat2Z mat_from_json(const OJson& j, const char* what);
OJson matq_to_json(const Mat2Q& m);

OJson endo_to_json(const AffineEndo& e);
AffineEndo endo_from_json(const OJson& j, const char* what);

OJson group_to_json(const RotationGroup& g);
RotationGroup group_from_json(const OJson& j);

OJson nu_to_json(const Nu& v);
Nu nu_from_json(const OJson& j, const char* what);

OJson instance_to_json_value(const InstanceSpec& spec);
InstanceSpec instance_from_json_value(const OJson& j);

OJson portrait_to_json_value(const RamifiedPortrait& p);
RamifiedPortrait portrait_from_json_value(const OJson& j);

OJson witness_to_json(const InjectivityWitness& w);
OJson quotient_step_to_json(const QuotientStep& step);
OJson pair_to_json(const QuotientPair& pair);

}  // namespace orbifoldkit::detail
