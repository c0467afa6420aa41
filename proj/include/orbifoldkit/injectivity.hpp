#pragma once
#include <optional>
#include <vector>

#include "orbifoldkit/quotient_pair.hpp"

namespace orbifoldkit {

// Witness of a pi-injectivity failure: two distinct points of one pi-fiber
// identified by F, based over a sphere point y outside f^{-1}(P_f).
struct InjectivityWitness {
  TorusPoint u, v;
  SpherePoint y;

  bool operator==(const InjectivityWitness&) const = default;
};

struct InjectivityVerdict {
  bool injective = true;
  // Set when a whole subtorus of fiber collisions exists; non-injectivity
  // then follows from cofiniteness of the allowed base set alone.
  bool positive_dimensional = false;
  std::vector<InjectivityWitness> witnesses;
};

// Translations fixing both maps: {v : A v and C v integral}, sorted; a
// subgroup of deck_group(F).
std::vector<TorusPoint> compute_H(const QuotientPair& pair);

// Decides pi-injectivity twice: via triviality of H and via the per-rotation
// four-variable congruence systems, with witnesses re-verified by direct
// evaluation.  The two paths must agree (PathDisagreement otherwise).
InjectivityVerdict decide_pi_injectivity(const QuotientPair& pair);

// Verdicts for F, F^2, ..., F^m with the same projection.  If F is
// injective all iterates must be; violations are an internal fault.
std::vector<InjectivityVerdict> iterate_injectivity(const QuotientPair& pair,
                                                    int m);

// Failing triple: the lift of x that no lift of y reaches under F.
struct TransversalityCertificate {
  SpherePoint x;
  TorusPoint lift;
  SpherePoint y;
};

struct TransversalityReport {
  bool transversal = true;
  long points_checked = 0;
  std::optional<TransversalityCertificate> failure;
};

// Exhaustive check over marked level 1 plus the supplied sample points:
// every lift of x is hit by some lift of every f-preimage of x.
TransversalityReport check_transversality(
    const QuotientPair& pair, const std::vector<SpherePoint>& extra);

struct QuotientStep {
  std::vector<TorusPoint> h;  // the translations quotiented out, |h| >= 2
  Mat2Q basis;                // columns span the enlarged lattice, |det| = 1/|h|
  QuotientPair new_pair;
  Int deg_pi_before = 0;
  Int deg_pi_after = 0;
};

// Quotient by H: rewrite the pair in coordinates of the enlarged lattice.
// deg pi drops by exactly |H|; det F is preserved; the induced sphere map is
// unchanged (checked on marked level 1 and on extra_checks).  Throws
// TrivialH when the pair is already injective.
QuotientStep quotient_step(const QuotientPair& pair,
                           const std::vector<SpherePoint>& extra_checks = {});

struct InjectivityReduction {
  QuotientPair final_pair;
  std::vector<QuotientStep> steps;
};

// Repeat quotient steps until H is trivial; terminates since deg pi
// strictly decreases.
InjectivityReduction make_injective(const QuotientPair& pair,
                                    const std::vector<SpherePoint>& extra_checks = {});

// deg(pi, .) is constant on the fiber over each branch value of pi (fibers
// elsewhere are constant-1 automatically).
bool check_fiber_degree_constancy(const QuotientPair& pair);

// Raw form of the same predicate on explicit per-fiber degree lists.
bool check_fiber_degree_constancy(
    const std::vector<std::vector<int>>& fiber_degrees);

}  // namespace orbifoldkit
