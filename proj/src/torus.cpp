#include "orbifoldkit/torus.hpp"

#include <algorithm>

#include "orbifoldkit/congruence.hpp"
#include "orbifoldkit/errors.hpp"

namespace orbifoldkit {

TorusPoint torus_point(const Rat& x, const Rat& y) {
  return TorusPoint{mod1(x), mod1(y)};
}

TorusPoint torus_point(const Vec2Q& v) { return torus_point(v.x, v.y); }

RotationGroup RotationGroup::of_order(int n) {
  RotationGroup g;
  g.order = n;
  switch (n) {
    case 2:
      g.generator = Mat2Z{-1, 0, 0, -1};
      break;
    case 3:
      g.generator = Mat2Z{0, -1, 1, -1};
      break;
    case 4:
      g.generator = Mat2Z{0, -1, 1, 0};
      break;
    case 6:
      g.generator = Mat2Z{1, -1, 1, 0};
      break;
    default:
      throw InputError("rotation order must be 2, 3, 4 or 6");
  }
  if (!(g.generator.pow(n) == Mat2Z::identity()))
    throw InternalCheckFailure("rotation generator has wrong order");
  return g;
}

std::vector<Mat2Z> RotationGroup::powers() const {
  std::vector<Mat2Z> out{Mat2Z::identity()};
  for (int k = 1; k < order; ++k) out.push_back(out.back() * generator);
  return out;
}

AffineEndo AffineEndo::make(const Mat2Z& a, const Vec2Q& b) {
  if (a.det() == 0)
    throw InputError("affine endomorphism must have nonzero determinant");
  AffineEndo e;
  e.a = a;
  e.b = Vec2Q{mod1(b.x), mod1(b.y)};
  return e;
}

AffineEndo AffineEndo::identity() {
  return make(Mat2Z::identity(), Vec2Q{Rat(0), Rat(0)});
}

Int AffineEndo::degree() const { return abs(a.det()); }

TorusPoint AffineEndo::apply(const TorusPoint& p) const {
  const Vec2Q v = a.apply(Vec2Q{p.x, p.y});
  return torus_point(v.x + b.x, v.y + b.y);
}

AffineEndo compose(const AffineEndo& f, const AffineEndo& g) {
  const Vec2Q fb = f.a.apply(g.b);
  return AffineEndo::make(f.a * g.a, Vec2Q{fb.x + f.b.x, fb.y + f.b.y});
}

AffineEndo endo_power(const AffineEndo& f, int m) {
  if (m < 1) throw InputError("endo_power requires a positive exponent");
  AffineEndo out = f;
  for (int i = 1; i < m; ++i) out = compose(out, f);
  return out;
}

std::vector<TorusPoint> preimages(const AffineEndo& e, const TorusPoint& p) {
  const CosetFamily fam = solve_congruence(
      MatZ::from(e.a), std::vector<Rat>{p.x - e.b.x, p.y - e.b.y});
  std::vector<TorusPoint> out;
  for (const auto& comp : fam.components) {
    if (!comp.isolated())
      throw InternalCheckFailure("nonsingular preimage set not finite");
    out.push_back(torus_point(comp.offset[0], comp.offset[1]));
  }
  if (Int(out.size()) != e.degree())
    throw InternalCheckFailure("preimage count differs from degree");
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<TorusPoint> deck_group(const AffineEndo& e) {
  const CosetFamily fam =
      solve_congruence(MatZ::from(e.a), std::vector<Rat>{Rat(0), Rat(0)});
  std::vector<TorusPoint> out;
  for (const auto& comp : fam.components)
    out.push_back(torus_point(comp.offset[0], comp.offset[1]));
  std::sort(out.begin(), out.end());
  if (Int(out.size()) != e.degree())
    throw InternalCheckFailure("deck group size differs from degree");
  return out;
}

int stabilizer_order(const RotationGroup& g, const TorusPoint& p) {
  int count = 0;
  for (const auto& r : g.powers()) {
    const Vec2Q v = r.apply(Vec2Q{p.x, p.y});
    if (torus_point(v) == p) ++count;
  }
  if (g.order % count != 0)
    throw InternalCheckFailure("stabilizer does not divide group order");
  return count;
}

std::vector<TorusPoint> orbit_points(const RotationGroup& g,
                                     const TorusPoint& p) {
  std::vector<TorusPoint> out;
  for (const auto& r : g.powers())
    out.push_back(torus_point(r.apply(Vec2Q{p.x, p.y})));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

SpherePoint sphere_canonical(const RotationGroup& g, const TorusPoint& p) {
  return SpherePoint{orbit_points(g, p).front(), g.order};
}

std::vector<CriticalTorusPoint> projection_critical_points(
    const RotationGroup& g) {
  const Rat h(1, 2), t1(1, 3), t2(2, 3);
  std::vector<CriticalTorusPoint> out;
  switch (g.order) {
    case 2:
      out = {{torus_point(Rat(0), Rat(0)), 2},
             {torus_point(Rat(0), h), 2},
             {torus_point(h, Rat(0)), 2},
             {torus_point(h, h), 2}};
      break;
    case 3:
      out = {{torus_point(Rat(0), Rat(0)), 3},
             {torus_point(t1, t2), 3},
             {torus_point(t2, t1), 3}};
      break;
    case 4:
      out = {{torus_point(Rat(0), Rat(0)), 4},
             {torus_point(Rat(0), h), 2},
             {torus_point(h, Rat(0)), 2},
             {torus_point(h, h), 4}};
      break;
    case 6:
      out = {{torus_point(Rat(0), Rat(0)), 6},
             {torus_point(Rat(0), h), 2},
             {torus_point(t1, t2), 3},
             {torus_point(h, Rat(0)), 2},
             {torus_point(h, h), 2},
             {torus_point(t2, t1), 3}};
      break;
    default:
      throw InputError("rotation order must be 2, 3, 4 or 6");
  }
  // The table is frozen; cross-check it against the actual stabilizers.
  for (const auto& c : out)
    if (stabilizer_order(g, c.point) != c.degree)
      throw InternalCheckFailure("branch point table disagrees with stabilizer");
  return out;
}

std::optional<int> check_equivariance(const RotationGroup& g,
                                      const AffineEndo& e) {
  const auto pows = g.powers();
  const Mat2Z ar = e.a * g.generator;
  for (int j = 1; j < g.order; ++j) {
    if (!(ar == pows[j] * e.a)) continue;
    // Translation part must descend: (I - R^j) b integral.
    const Vec2Q rb = pows[j].apply(e.b);
    if (mod1(e.b.x - rb.x) == 0 && mod1(e.b.y - rb.y) == 0) return j;
    return std::nullopt;  // j is unique for nonsingular A
  }
  return std::nullopt;
}

}  // namespace orbifoldkit
