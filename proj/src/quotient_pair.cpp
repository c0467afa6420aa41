#include "orbifoldkit/quotient_pair.hpp"

#include <algorithm>

#include "kernel.hpp"
#include "orbifoldkit/congruence.hpp"
#include "orbifoldkit/errors.hpp"

namespace orbifoldkit {

namespace detail {

// Exact worst-case magnitude of any intermediate value the kernel can
// produce for this pair, assuming input points with denominator dividing
// base * max_extra_den and at most max_depth backward levels.  Used to
// decide whether the 64-bit engine is safe.
Int kernel_worst_case(const QuotientPair& pair, const Int& max_extra_den,
                      int max_depth) {
  const Int base =
      lcm_int(Int(6), lcm_int(lcm_int(rat_den(pair.f.b.x), rat_den(pair.f.b.y)),
                              lcm_int(rat_den(pair.q.b.x), rat_den(pair.q.b.y))));
  const Int dq = pair.q.degree(), df = pair.f.degree();
  Int kmax = base * max_extra_den;
  for (int i = 0; i <= max_depth; ++i) kmax *= dq * df;

  const auto op_coef = [](const AffineEndo& e) -> Int {
    const auto ab = [](const Int& v) -> Int { return v < 0 ? Int(-v) : v; };
    const Int maxm =
        std::max({ab(e.a.m00), ab(e.a.m01), ab(e.a.m10), ab(e.a.m11)});
    const Mat2Z adj = e.a.adjugate();
    const Int maxadj =
        std::max({ab(adj.m00), ab(adj.m01), ab(adj.m10), ab(adj.m11)});
    const Smith2 s = smith_normal_form(e.a);
    const Int d1 = s.d.m00 > 0 ? Int(s.d.m00 - 1) : Int(0);
    const Int d2 = s.d.m11 > 0 ? Int(s.d.m11 - 1) : Int(0);
    const Int maxcos = std::max(Int(ab(s.u.m00) * d1 + ab(s.u.m01) * d2),
                                Int(ab(s.u.m10) * d1 + ab(s.u.m11) * d2));
    return std::max(Int(2 * maxm + 1), Int(2 * maxadj * (2 + maxcos)));
  };
  const Int coef = std::max({op_coef(pair.f), op_coef(pair.q), Int(3)});
  return kmax * coef;
}

}  // namespace detail

namespace {

Int point_den(const SpherePoint& p) {
  return lcm_int(rat_den(p.rep.x), rat_den(p.rep.y));
}

detail::PairKernel kernel_for(const QuotientPair& pair, const SpherePoint& p) {
  return detail::PairKernel(pair, point_den(p), 0);
}

}  // namespace

QuotientPair make_pair(const RotationGroup& g, const AffineEndo& f,
                       const AffineEndo& q) {
  QuotientPair pair;
  pair.group = g;
  pair.f = f;
  pair.q = q;

  if (f.degree() < 2)
    throw InputError("deg F = |det A| must be at least 2");

  const auto jf = check_equivariance(g, f);
  if (!jf) throw InputError("F is not equivariant under the rotation group");
  pair.jf = *jf;
  const auto jq = check_equivariance(g, q);
  if (!jq) throw InputError("Q is not equivariant under the rotation group");
  pair.jq = *jq;

  // Compatibility: C A = R^k A C as matrices for a (unique) k, and the
  // translation parts must match modulo Z^2 for that same k.
  const auto pows = g.powers();
  const Mat2Z ca = q.a * f.a;
  const Mat2Z ac = f.a * q.a;
  int k = -1;
  for (int i = 0; i < g.order; ++i) {
    if (ca == pows[i] * ac) {
      k = i;
      break;
    }
  }
  if (k < 0)
    throw InputError("pair is incompatible: C A is not R^k A C for any k");
  const Vec2Q cb = q.a.apply(f.b);
  const Vec2Q ac_b = f.a.apply(q.b);
  const Vec2Q rhs =
      pows[k].apply(Vec2Q{ac_b.x + f.b.x, ac_b.y + f.b.y});
  const Vec2Q diff{cb.x + q.b.x - rhs.x, cb.y + q.b.y - rhs.y};
  if (mod1(diff.x) != 0 || mod1(diff.y) != 0)
    throw InputError("pair is incompatible: translation parts do not match");
  pair.k = k;
  return pair;
}

QuotientPair make_pair(const RotationGroup& g, const AffineEndo& f) {
  return make_pair(g, f, AffineEndo::identity());
}

QuotientPair power_pair(const QuotientPair& pair, int m) {
  return make_pair(pair.group, endo_power(pair.f, m), pair.q);
}

SpherePoint project(const QuotientPair& pair, const TorusPoint& x) {
  return sphere_canonical(pair.group, pair.q.apply(x));
}

std::vector<TorusPoint> pi_fiber(const QuotientPair& pair,
                                 const SpherePoint& p) {
  return kernel_for(pair, p).fiber(p);
}

int local_degree_pi(const QuotientPair& pair, const TorusPoint& x) {
  return stabilizer_order(pair.group, pair.q.apply(x));
}

SpherePoint eval_f(const QuotientPair& pair, const SpherePoint& p) {
  return kernel_for(pair, p).eval(p);
}

int local_degree_f(const QuotientPair& pair, const SpherePoint& p) {
  int deg = 0;
  for (const TorusPoint& x : pi_fiber(pair, p)) {
    const int bot = local_degree_pi(pair, x);
    const int top = local_degree_pi(pair, pair.f.apply(x));
    if (top % bot != 0)
      throw InconsistentFiber("local degree of f is not integral");
    const int d = top / bot;
    if (deg == 0)
      deg = d;
    else if (deg != d)
      throw InconsistentFiber("local degree of f differs between lifts");
  }
  return deg;
}

std::vector<CriticalTorusPoint> projection_critical_lifts(
    const QuotientPair& pair) {
  std::vector<CriticalTorusPoint> out;
  for (const auto& s : projection_critical_points(pair.group))
    for (const TorusPoint& x : preimages(pair.q, s.point))
      out.push_back(CriticalTorusPoint{x, s.degree});
  std::sort(out.begin(), out.end(),
            [](const CriticalTorusPoint& a, const CriticalTorusPoint& b) {
              return a.point != b.point ? a.point < b.point
                                        : a.degree < b.degree;
            });
  return out;
}

std::vector<SpherePoint> projection_critical_values(const QuotientPair& pair) {
  std::vector<SpherePoint> out;
  for (const auto& s : projection_critical_points(pair.group))
    out.push_back(sphere_canonical(pair.group, s.point));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<SpherePoint> postcritical_set(const QuotientPair& pair) {
  // The branch values of pi = pi0 . Q are those of pi0 alone, since Q is a
  // torus covering; these are exactly the postcritical points of f.
  return projection_critical_values(pair);
}

std::vector<DegreedSpherePoint> critical_set_f(const QuotientPair& pair) {
  const detail::PairKernel kernel(pair, 1, 1);
  std::vector<DegreedSpherePoint> out;
  Int rh = 0;
  for (const SpherePoint& v : postcritical_set(pair)) {
    for (const auto& pre : kernel.preimages_sphere(v)) {
      if (pre.degree < 2) continue;
      out.push_back(pre);
      rh += pre.degree - 1;
    }
  }
  // Every critical point appears above: its image is a postcritical point.
  if (rh != 2 * pair.degree_f() - 2)
    throw InternalCheckFailure("Riemann-Hurwitz count failed");
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DegreedSpherePoint> sphere_preimages(const QuotientPair& pair,
                                                 const SpherePoint& p) {
  return kernel_for(pair, p).preimages_sphere(p);
}

MarkedSets marked_sets(const QuotientPair& pair, int depth) {
  if (depth < 0) throw InputError("marked_sets depth must be nonnegative");
  const detail::PairKernel kernel(pair, 1, depth);
  MarkedSets sets;
  sets.levels.push_back(postcritical_set(pair));
  for (int j = 0; j < depth; ++j) {
    const auto& prev = sets.levels.back();
    std::vector<SpherePoint> next;
    for (const SpherePoint& p : prev) {
      const auto pre = kernel.preimage_points(p);
      next.insert(next.end(), pre.begin(), pre.end());
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    if (!std::includes(next.begin(), next.end(), prev.begin(), prev.end()))
      throw InternalCheckFailure("postcritical set is not forward invariant");
    sets.levels.push_back(std::move(next));
  }
  return sets;
}

}  // namespace orbifoldkit
