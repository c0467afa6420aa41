#pragma once
#include <vector>

#include "orbifoldkit/torus.hpp"

namespace orbifoldkit {

// A validated presentation of a sphere map: F = (A, b) is the torus
// endomorphism, Q = (C, c) the pre-composition factor of the projection
// pi = pi0 . Q, where pi0 is the orbit projection of the rotation group.
// The cached exponents record the equivariance of each map (A R = R^jf A,
// C R = R^jq C) and their compatibility (C A = R^k A C up to translation).
struct QuotientPair {
  RotationGroup group;
  AffineEndo f;  // the endomorphism pushed down to the sphere
  AffineEndo q;  // pre-composition factor of the projection
  int jf = 1;
  int jq = 1;
  int k = 0;

  Int degree_f() const { return f.degree(); }
  Int degree_pi() const { return Int(group.order) * q.degree(); }
};

// Checks equivariance of F and Q and their compatibility, and fills in the
// exponents; throws InputError naming the failed condition.
QuotientPair make_pair(const RotationGroup& g, const AffineEndo& f,
                       const AffineEndo& q);

// Convenience: Q = identity.
QuotientPair make_pair(const RotationGroup& g, const AffineEndo& f);

// Same group and Q, with F replaced by its m-th iterate.
QuotientPair power_pair(const QuotientPair& pair, int m);

// pi(x) for a torus point x: canonical orbit representative of Q(x).
SpherePoint project(const QuotientPair& pair, const TorusPoint& x);

// Full fiber pi^{-1}(p), sorted; its size times the local degrees sums to
// deg pi.
std::vector<TorusPoint> pi_fiber(const QuotientPair& pair,
                                 const SpherePoint& p);

// Local degree of pi at the torus point x = stabilizer order of Q(x).
int local_degree_pi(const QuotientPair& pair, const TorusPoint& x);

// The sphere map applied to p: pi(F(lift)), recomputed over the whole fiber
// and required to be single-valued (InconsistentFiber otherwise).
SpherePoint eval_f(const QuotientPair& pair, const SpherePoint& p);

// Local degree of f at p: deg(pi, F x) / deg(pi, x) for any lift x; checked
// integral and constant over the fiber.
int local_degree_f(const QuotientPair& pair, const SpherePoint& p);

// Branch points of pi on the torus with local degrees: preimages under Q of
// the orbit projection's branch points.
std::vector<CriticalTorusPoint> projection_critical_lifts(
    const QuotientPair& pair);

// Branch values of pi on the sphere (independent of Q), sorted.
std::vector<SpherePoint> projection_critical_values(const QuotientPair& pair);

// Postcritical set P_f of the sphere map = branch values of pi, sorted.
std::vector<SpherePoint> postcritical_set(const QuotientPair& pair);

// A sphere point carrying a local degree.
struct DegreedSpherePoint {
  SpherePoint point;
  int degree = 1;

  bool operator==(const DegreedSpherePoint&) const = default;
  bool operator<(const DegreedSpherePoint& o) const {
    return point != o.point ? point < o.point : degree < o.degree;
  }
};

// Critical points of the sphere map (local degree >= 2) with degrees,
// sorted; the Riemann-Hurwitz identity sum(deg - 1) = 2 deg f - 2 is
// verified before returning.
std::vector<DegreedSpherePoint> critical_set_f(const QuotientPair& pair);

// All f-preimages of p with local degrees; the degrees sum to deg f.
std::vector<DegreedSpherePoint> sphere_preimages(const QuotientPair& pair,
                                                 const SpherePoint& p);

// Backward levels of the postcritical set: levels[0] = P_f and
// levels[j+1] = f^{-1}(levels[j]); each level is sorted and verified to
// contain the previous one (forward invariance of P_f).
struct MarkedSets {
  std::vector<std::vector<SpherePoint>> levels;
};
MarkedSets marked_sets(const QuotientPair& pair, int depth = 3);

}  // namespace orbifoldkit
