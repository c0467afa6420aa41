#pragma once
#include <optional>
#include <vector>

#include "orbifoldkit/matrix.hpp"

namespace orbifoldkit {

// Point on the torus Q^2/Z^2.  Both coordinates are kept canonical in [0,1);
// construct through torus_point so the invariant always holds.
struct TorusPoint {
  Rat x, y;

  bool operator==(const TorusPoint&) const = default;
  bool operator<(const TorusPoint& o) const {
    return x != o.x ? x < o.x : y < o.y;
  }
};

TorusPoint torus_point(const Rat& x, const Rat& y);
TorusPoint torus_point(const Vec2Q& v);

// Cyclic rotation group acting on the torus, one fixed generator per order.
// Orders 2, 3, 4 and 6 are the only ones acting with a sphere quotient.
struct RotationGroup {
  int order = 2;
  Mat2Z generator;

  static RotationGroup of_order(int n);
  // R^0, R^1, ..., R^{order-1}.
  std::vector<Mat2Z> powers() const;

  bool operator==(const RotationGroup&) const = default;
};

// Affine endomorphism x |-> A x + b of the torus.  A is integral with
// det A != 0 (negative determinants allowed); b is stored canonical in
// [0,1)^2 since translations are only meaningful modulo Z^2.
struct AffineEndo {
  Mat2Z a;
  Vec2Q b;

  static AffineEndo make(const Mat2Z& a, const Vec2Q& b);
  static AffineEndo identity();

  Int degree() const;  // |det A|
  TorusPoint apply(const TorusPoint& p) const;

  bool operator==(const AffineEndo&) const = default;
};

// f after g as torus maps.
AffineEndo compose(const AffineEndo& f, const AffineEndo& g);
// m-fold iterate, m >= 1.
AffineEndo endo_power(const AffineEndo& f, int m);

// All |det A| preimages of p under the endomorphism, sorted.
std::vector<TorusPoint> preimages(const AffineEndo& e, const TorusPoint& p);

// Kernel of the endomorphism on the torus: solutions of A v == 0 (mod Z^2),
// sorted, of size |det A|.
std::vector<TorusPoint> deck_group(const AffineEndo& e);

// Size of the stabilizer {k : R^k p == p} — always a divisor of the order.
int stabilizer_order(const RotationGroup& g, const TorusPoint& p);

// Distinct points of the rotation orbit of p, sorted.
std::vector<TorusPoint> orbit_points(const RotationGroup& g,
                                     const TorusPoint& p);

// Point of the quotient sphere, named by the lexicographically smallest
// point of its rotation orbit.
struct SpherePoint {
  TorusPoint rep;
  int order = 2;  // order of the acting group, kept for sanity checks

  bool operator==(const SpherePoint&) const = default;
  bool operator<(const SpherePoint& o) const { return rep < o.rep; }
};

SpherePoint sphere_canonical(const RotationGroup& g, const TorusPoint& p);

// Branch points of the orbit projection T^2 -> S^2 with their local degrees
// (= stabilizer orders), sorted by point.
struct CriticalTorusPoint {
  TorusPoint point;
  int degree = 1;

  bool operator==(const CriticalTorusPoint&) const = default;
};

std::vector<CriticalTorusPoint> projection_critical_points(
    const RotationGroup& g);

// The unique j with A R == R^j A and (I - R^j) b in Z^2, if one exists.
// j = 0 cannot occur for a nonsingular A, so the returned value is in
// [1, order).  Returns nullopt when A fails to normalize the group or the
// translation part breaks descent to the quotient.
std::optional<int> check_equivariance(const RotationGroup& g,
                                      const AffineEndo& e);

}  // namespace orbifoldkit
