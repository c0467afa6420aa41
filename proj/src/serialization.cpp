#include "orbifoldkit/serialization.hpp"

#include <set>
#include <string>

#include "json_codec.hpp"

namespace orbifoldkit {
namespace detail {

void require_keys(const OJson& j, const char* what,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
  if (!j.is_object())
    throw InputError(std::string(what) + " must be a JSON object");
  for (const char* key : required)
    if (!j.contains(key))
      throw InputError(std::string(what) + " is missing key \"" + key + "\"");
  std::set<std::string> allowed;
  for (const char* key : required) allowed.insert(key);
  for (const char* key : optional) allowed.insert(key);
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw InputError(std::string(what) + " has unknown key \"" +
                       item.key() + "\"");
}

OJson rat_to_json(const Rat& r) { return rat_to_string(r); }

Rat rat_from_json(const OJson& j, const char* what) {
  if (j.is_number_integer())
    return Rat(Int(j.get<long long>()));
  if (j.is_string()) return rat_from_string(j.get<std::string>());
  throw InputError(std::string(what) +
                   " must be an integer or a \"p/q\" string");
}

OJson point_to_json(const TorusPoint& p) {
  return OJson::array({rat_to_json(p.x), rat_to_json(p.y)});
}

TorusPoint point_from_json(const OJson& j, const char* what) {
  if (!j.is_array() || j.size() != 2)
    throw InputError(std::string(what) + " must be a 2-element array");
  return torus_point(rat_from_json(j[0], what), rat_from_json(j[1], what));
}

OJson sphere_to_json(const SpherePoint& p) { return point_to_json(p.rep); }

OJson mat_to_json(const Mat2Z& m) {
  return OJson::array(
      {OJson::array({to_int64(m.m00), to_int64(m.m01)}),
       OJson::array({to_int64(m.m10), to_int64(m.m11)})});
}

Mat2Z mat_from_json(const OJson& j, const char* what) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_array() ||
      !j[1].is_array() || j[0].size() != 2 || j[1].size() != 2)
    throw InputError(std::string(what) + " must be a 2x2 nested array");
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      if (!j[r][c].is_number_integer())
        throw InputError(std::string(what) + " entries must be integers");
  return Mat2Z{Int(j[0][0].get<long long>()), Int(j[0][1].get<long long>()),
               Int(j[1][0].get<long long>()), Int(j[1][1].get<long long>())};
}

OJson matq_to_json(const Mat2Q& m) {
  return OJson::array({OJson::array({rat_to_json(m.m00), rat_to_json(m.m01)}),
                       OJson::array({rat_to_json(m.m10), rat_to_json(m.m11)})});
}

OJson endo_to_json(const AffineEndo& e) {
  OJson j;
  j["A"] = mat_to_json(e.a);
  j["b"] = OJson::array({rat_to_json(e.b.x), rat_to_json(e.b.y)});
  return j;
}

AffineEndo endo_from_json(const OJson& j, const char* what) {
  require_keys(j, what, {"A", "b"}, {});
  const Mat2Z a = mat_from_json(j["A"], what);
  const OJson& b = j["b"];
  if (!b.is_array() || b.size() != 2)
    throw InputError(std::string(what) + ".b must be a 2-element array");
  return AffineEndo::make(
      a, Vec2Q{rat_from_json(b[0], what), rat_from_json(b[1], what)});
}

OJson group_to_json(const RotationGroup& g) {
  OJson j;
  j["rotation_order"] = g.order;
  return j;
}

RotationGroup group_from_json(const OJson& j) {
  require_keys(j, "group", {"rotation_order"}, {});
  if (!j["rotation_order"].is_number_integer())
    throw InputError("rotation_order must be an integer");
  return RotationGroup::of_order(j["rotation_order"].get<int>());
}

OJson nu_to_json(const Nu& v) {
  if (v.inf) return "inf";
  return to_int64(v.v);
}

Nu nu_from_json(const OJson& j, const char* what) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return Nu::infinity();
    throw InputError(std::string(what) + ": the only string value is \"inf\"");
  }
  if (j.is_number_integer()) {
    const long long v = j.get<long long>();
    if (v < 1)
      throw InputError(std::string(what) + " must be at least 1 or \"inf\"");
    return Nu{Int(v), false};
  }
  throw InputError(std::string(what) + " must be an integer or \"inf\"");
}

OJson instance_to_json_value(const InstanceSpec& spec) {
  OJson j;
  j["group"] = group_to_json(spec.group);
  j["endomorphism"] = endo_to_json(spec.f);
  j["precompose"] = endo_to_json(spec.q);
  if (spec.options.samples) j["samples"] = *spec.options.samples;
  if (spec.options.marked_depth)
    j["marked_depth"] = *spec.options.marked_depth;
  if (spec.options.seed) j["seed"] = *spec.options.seed;
  return j;
}

InstanceSpec instance_from_json_value(const OJson& j) {
  require_keys(j, "instance", {"group", "endomorphism"},
               {"precompose", "samples", "marked_depth", "seed"});
  InstanceSpec spec;
  spec.group = group_from_json(j["group"]);
  spec.f = endo_from_json(j["endomorphism"], "endomorphism");
  if (j.contains("precompose"))
    spec.q = endo_from_json(j["precompose"], "precompose");
  if (j.contains("samples")) {
    if (!j["samples"].is_number_integer() || j["samples"].get<long long>() < 0 ||
        j["samples"].get<long long>() > 1000000)
      throw InputError("samples must be an integer in [0, 1000000]");
    spec.options.samples = j["samples"].get<int>();
  }
  if (j.contains("marked_depth")) {
    if (!j["marked_depth"].is_number_integer() ||
        j["marked_depth"].get<long long>() < 0 ||
        j["marked_depth"].get<long long>() > 6)
      throw InputError("marked_depth must be an integer in [0, 6]");
    spec.options.marked_depth = j["marked_depth"].get<int>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      throw InputError("seed must be a non-negative integer");
    if (j["seed"].is_number_integer() && j["seed"].get<long long>() < 0)
      throw InputError("seed must be a non-negative integer");
    spec.options.seed = j["seed"].get<unsigned long long>();
  }
  return spec;
}

OJson portrait_to_json_value(const RamifiedPortrait& p) {
  OJson j;
  j["degree"] = to_int64(p.degree);
  j["vertices"] = OJson::array();
  for (const auto& v : p.vertices) j["vertices"].push_back(v);
  OJson map = OJson::object();
  OJson degs = OJson::object();
  OJson complete = OJson::array();
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    map[p.vertices[i]] = p.vertices[p.sigma[i]];
    degs[p.vertices[i]] = p.delta[i];
    if (p.complete[i]) complete.push_back(p.vertices[i]);
  }
  j["map"] = map;
  j["local_degrees"] = degs;
  j["complete"] = complete;
  return j;
}

RamifiedPortrait portrait_from_json_value(const OJson& j) {
  require_keys(j, "portrait",
               {"degree", "vertices", "map", "local_degrees", "complete"}, {});
  RamifiedPortrait p;
  if (!j["degree"].is_number_integer() || j["degree"].get<long long>() < 2)
    throw InputError("portrait degree must be an integer >= 2");
  p.degree = Int(j["degree"].get<long long>());
  if (!j["vertices"].is_array())
    throw InputError("portrait vertices must be an array");
  for (const auto& v : j["vertices"]) {
    if (!v.is_string())
      throw InputError("portrait vertices must be strings");
    p.vertices.push_back(v.get<std::string>());
  }
  if (!j["map"].is_object() || !j["local_degrees"].is_object() ||
      !j["complete"].is_array())
    throw InputError(
        "portrait map/local_degrees must be objects and complete an array");

  p.sigma.resize(p.vertices.size());
  p.delta.assign(p.vertices.size(), 1);
  p.complete.assign(p.vertices.size(), false);
  for (std::size_t i = 0; i < p.vertices.size(); ++i) {
    const std::string& name = p.vertices[i];
    if (!j["map"].contains(name))
      throw InputError("portrait map is missing vertex \"" + name + "\"");
    if (!j["map"][name].is_string())
      throw InputError("portrait map values must be vertex names");
    const int target = p.index_of(j["map"][name].get<std::string>());
    if (target < 0)
      throw InputError("portrait map sends \"" + name +
                       "\" outside the vertex set");
    p.sigma[i] = target;
    if (!j["local_degrees"].contains(name))
      throw InputError("portrait local_degrees is missing vertex \"" + name +
                       "\"");
    if (!j["local_degrees"][name].is_number_integer() ||
        j["local_degrees"][name].get<long long>() < 1)
      throw InputError("portrait local degrees must be integers >= 1");
    p.delta[i] = j["local_degrees"][name].get<int>();
  }
  for (const auto& v : j["complete"]) {
    if (!v.is_string())
      throw InputError("portrait complete entries must be vertex names");
    const int idx = p.index_of(v.get<std::string>());
    if (idx < 0)
      throw InputError("portrait complete lists unknown vertex \"" +
                       v.get<std::string>() + "\"");
    p.complete[idx] = true;
  }
  validate_portrait(p);
  return p;
}

OJson witness_to_json(const InjectivityWitness& w) {
  OJson j;
  j["u"] = point_to_json(w.u);
  j["v"] = point_to_json(w.v);
  j["y"] = sphere_to_json(w.y);
  return j;
}

OJson pair_to_json(const QuotientPair& pair) {
  OJson j;
  j["group"] = group_to_json(pair.group);
  j["endomorphism"] = endo_to_json(pair.f);
  j["precompose"] = endo_to_json(pair.q);
  return j;
}

OJson quotient_step_to_json(const QuotientStep& step) {
  OJson j;
  OJson h = OJson::array();
  for (const auto& p : step.h) h.push_back(point_to_json(p));
  j["H"] = h;
  j["H_order"] = step.h.size();
  j["basis"] = matq_to_json(step.basis);
  j["new_pair"] = pair_to_json(step.new_pair);
  j["deg_pi_before"] = to_int64(step.deg_pi_before);
  j["deg_pi_after"] = to_int64(step.deg_pi_after);
  return j;
}

namespace {

OJson parse_text(const std::string& text, const char* what) {
  try {
    return OJson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("cannot parse ") + what + ": " + e.what());
  }
}

}  // namespace

}  // namespace detail

InstanceSpec instance_from_json(const std::string& text) {
  const detail::OJson j = detail::parse_text(text, "instance JSON");
  try {
    return detail::instance_from_json_value(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed instance JSON: ") + e.what());
  }
}

RamifiedPortrait portrait_from_json(const std::string& text) {
  const detail::OJson j = detail::parse_text(text, "portrait JSON");
  try {
    return detail::portrait_from_json_value(j);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed portrait JSON: ") + e.what());
  }
}

std::string instance_to_json(const InstanceSpec& spec) {
  return detail::instance_to_json_value(spec).dump(2) + "\n";
}

std::string portrait_to_json(const RamifiedPortrait& portrait) {
  return detail::portrait_to_json_value(portrait).dump(2) + "\n";
}

QuotientPair pair_from_instance(const InstanceSpec& spec) {
  return make_pair(spec.group, spec.f, spec.q);
}

}  // namespace orbifoldkit
