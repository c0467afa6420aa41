#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orbifoldkit/quotient_pair.hpp"

namespace orbifoldkit {

// Ramification value: a positive integer or infinity.
struct Nu {
  Int v = 1;
  bool inf = false;

  static Nu infinity() { return Nu{0, true}; }
  bool operator==(const Nu&) const = default;
  // Finite values first (ascending), infinity last.
  bool operator<(const Nu& o) const {
    if (inf != o.inf) return !inf;
    return v < o.v;
  }
};

inline Nu lcm_nu(const Nu& a, const Nu& b) {
  if (a.inf || b.inf) return Nu::infinity();
  return Nu{lcm_int(a.v, b.v), false};
}

// Canonical label for a sphere point: "x,y" with exact fractions.
std::string sphere_label(const SpherePoint& p);

// Finite piece of a branch portrait: vertex dynamics sigma with local
// degrees delta.  A vertex flagged complete has its entire preimage list
// among the vertices; only for those can backward data be trusted.
struct RamifiedPortrait {
  Int degree = 2;
  std::vector<std::string> vertices;  // unique labels
  std::vector<int> sigma;             // vertex index -> vertex index
  std::vector<int> delta;             // local degrees, >= 1
  std::vector<bool> complete;

  int index_of(const std::string& label) const;  // -1 when absent
};

// Structural checks: ranges, delta >= 1, and for every complete vertex w the
// incoming local degrees sum to the portrait degree.  Throws InputError.
void validate_portrait(const RamifiedPortrait& p);

// Assemble the portrait of a validated pair over marked level 1: sigma is
// the sphere map, delta its local degrees, and exactly the postcritical
// vertices are complete.
RamifiedPortrait portrait_from_qote(const QuotientPair& pair);

enum class OrbifoldClass { Parabolic, Hyperbolic, NotRealizable };

std::string to_string(OrbifoldClass c);

// Ramification data of a portrait: nu on the postcritical vertices (it is 1
// elsewhere), the sorted signature, and the exact Euler characteristic.
struct OrbifoldData {
  std::vector<std::pair<std::string, Nu>> nu;  // sorted by vertex label
  std::vector<Nu> signature;                   // ascending, infinity last
  Rat chi;
};

// 2 - sum(1 - 1/nu) with 1/infinity = 0, exact.
Rat euler_characteristic(const std::vector<Nu>& signature);

// Assemble OrbifoldData from bare signature values (no vertex names).
OrbifoldData orbifold_from_signature(std::vector<Nu> signature);

// Least ramification function of the portrait: infinity exactly on cycles
// through a critical vertex (detected first), then the least fixed point of
// nu(x) <- lcm over preimages y of nu(y) * delta(y) on the finite part.
// Throws IncompletePortrait when a postcritical vertex lacks its preimages.
OrbifoldData ramification(const RamifiedPortrait& portrait);

// Independent brute force: nu(p) = lcm of path degree products over the
// backward tree of depth <= d.  A lower bound for nu that reaches it for
// portraits without periodic critical vertices once d is large enough.
std::vector<std::pair<std::string, Nu>> ramification_oracle(
    const RamifiedPortrait& portrait, int d);
std::vector<std::pair<SpherePoint, Nu>> ramification_oracle(
    const QuotientPair& pair, int d);

OrbifoldClass classify(const OrbifoldData& data);

// Tags the parabolic signatures: the four torus-quotient ones as
// Lattes-type, the two with periodic critical points separately.
std::optional<std::string> signature_taxonomy(const OrbifoldData& data);

}  // namespace orbifoldkit
