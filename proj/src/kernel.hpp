#pragma once
#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "orbifoldkit/errors.hpp"
#include "orbifoldkit/quotient_pair.hpp"

// Scaled-integer evaluation engine.  A torus point whose denominator divides
// the working scale K is stored as its pair of numerators in [0, K).  Every
// pipeline below keeps each intermediate point set at a single common scale,
// so set comparisons are integer comparisons and no rational reduction runs
// inside loops.  The engine is templated on the integer type: int64_t when a
// worst-case bound (computed exactly up front) fits, arbitrary precision
// otherwise.  Both instantiations execute the same statements, so results
// are identical; tests additionally pin them against plain rational
// reference implementations.

namespace orbifoldkit::detail {

template <class I>
struct Pt {
  I x{}, y{};

  friend bool operator==(const Pt& a, const Pt& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator<(const Pt& a, const Pt& b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  }
};

template <class I>
I cast_int(const Int& v);

template <>
inline Int cast_int<Int>(const Int& v) {
  return v;
}
template <>
inline std::int64_t cast_int<std::int64_t>(const Int& v) {
  return to_int64(v);
}

// The value parameter is deduced separately so cpp_int expression
// templates materialize here instead of failing deduction against I.
template <class I, class V>
inline I mod_scale(const V& value, const I& k) {
  I m = I(value) % k;
  if (m < 0) m += k;
  return m;
}

// One affine map at kernel level: matrix, adjugate, translation as
// numerators over a fixed denominator, and coset representatives of
// Z^2 / M Z^2 for preimage enumeration.
template <class I>
struct AffOp {
  std::array<I, 4> m{}, adj{};
  int sign = 1;  // sign of det M
  I absdet{1};
  I tnx{0}, tny{0}, tden{1};
  std::array<I, 4> snf_u{};  // unimodular factor of the Smith form of M
  I snf_d1{1}, snf_d2{1};    // its invariant factors
  bool identity = false;

  // Coset representatives of Z^2 / M Z^2, built on first use: there are
  // |det M| of them, far more than a forward evaluation ever touches, so
  // eager construction would make large determinants unusable.  Engines
  // are per-call objects, so the deferred build is single-threaded.
  const std::vector<Pt<I>>& coset_reps() const {
    if (!cosets_built_) {
      for (I i = 0; i < snf_d1; ++i)
        for (I j = 0; j < snf_d2; ++j)
          cosets_.push_back(Pt<I>{snf_u[0] * i + snf_u[1] * j,
                                  snf_u[2] * i + snf_u[3] * j});
      cosets_built_ = true;
    }
    return cosets_;
  }

 private:
  mutable std::vector<Pt<I>> cosets_;
  mutable bool cosets_built_ = false;
};

template <class I>
AffOp<I> make_aff(const AffineEndo& e) {
  AffOp<I> a;
  a.m = {cast_int<I>(e.a.m00), cast_int<I>(e.a.m01), cast_int<I>(e.a.m10),
         cast_int<I>(e.a.m11)};
  const Mat2Z adj = e.a.adjugate();
  a.adj = {cast_int<I>(adj.m00), cast_int<I>(adj.m01), cast_int<I>(adj.m10),
           cast_int<I>(adj.m11)};
  const Int d = e.a.det();
  a.sign = d < 0 ? -1 : 1;
  a.absdet = cast_int<I>(abs(d));
  const Int td = lcm_int(rat_den(e.b.x), rat_den(e.b.y));
  a.tden = cast_int<I>(td);
  a.tnx = cast_int<I>(rat_num(e.b.x) * (td / rat_den(e.b.x)));
  a.tny = cast_int<I>(rat_num(e.b.y) * (td / rat_den(e.b.y)));
  const Smith2 s = smith_normal_form(e.a);
  a.snf_u = {cast_int<I>(s.u.m00), cast_int<I>(s.u.m01),
             cast_int<I>(s.u.m10), cast_int<I>(s.u.m11)};
  a.snf_d1 = cast_int<I>(s.d.m00);
  a.snf_d2 = cast_int<I>(s.d.m11);
  a.identity = e.a == Mat2Z::identity() && e.b.x == 0 && e.b.y == 0;
  return a;
}

// p |-> M p + t at scale k (t's denominator must divide k).
template <class I>
Pt<I> aff_apply(const AffOp<I>& a, const Pt<I>& p, const I& k) {
  const I g = k / a.tden;
  return Pt<I>{mod_scale(a.m[0] * p.x + a.m[1] * p.y + a.tnx * g, k),
               mod_scale(a.m[2] * p.x + a.m[3] * p.y + a.tny * g, k)};
}

// All |det M| preimages of p, appended to out at scale k * absdet.
template <class I>
void aff_preimages(const AffOp<I>& a, const Pt<I>& p, const I& k,
                   std::vector<Pt<I>>& out) {
  const I g = k / a.tden;
  const I wx = p.x - a.tnx * g, wy = p.y - a.tny * g;
  const I kout = k * a.absdet;
  for (const auto& rep : a.coset_reps()) {
    const I vx = wx + k * rep.x, vy = wy + k * rep.y;
    I ux = a.adj[0] * vx + a.adj[1] * vy;
    I uy = a.adj[2] * vx + a.adj[3] * vy;
    if (a.sign < 0) {
      ux = -ux;
      uy = -uy;
    }
    out.push_back(Pt<I>{mod_scale(ux, kout), mod_scale(uy, kout)});
  }
}

template <class I>
struct Engine {
  int n = 2;
  std::vector<std::array<I, 4>> rot;  // R^0 .. R^{n-1}
  AffOp<I> f, q;
  Int base_den = 1;        // lcm of branch-table and translation denominators
  Int max_point_den = 1;   // largest extra input denominator this engine
                           // was sized for (int64_t safety contract)
  // Rational-level copies for the pieces that stay outside hot loops.
  RotationGroup group;

  static Engine make(const QuotientPair& pair, const Int& max_extra_den) {
    Engine e;
    e.group = pair.group;
    e.n = pair.group.order;
    for (const auto& r : pair.group.powers())
      e.rot.push_back({cast_int<I>(r.m00), cast_int<I>(r.m01),
                       cast_int<I>(r.m10), cast_int<I>(r.m11)});
    e.f = make_aff<I>(pair.f);
    e.q = make_aff<I>(pair.q);
    e.base_den = lcm_int(Int(6), lcm_int(lcm_int(rat_den(pair.f.b.x),
                                                 rat_den(pair.f.b.y)),
                                         lcm_int(rat_den(pair.q.b.x),
                                                 rat_den(pair.q.b.y))));
    e.max_point_den = max_extra_den;
    return e;
  }

  Pt<I> rot_apply(int j, const Pt<I>& p, const I& k) const {
    const auto& r = rot[j];
    return Pt<I>{mod_scale(r[0] * p.x + r[1] * p.y, k),
                 mod_scale(r[2] * p.x + r[3] * p.y, k)};
  }

  Pt<I> orbit_min(const Pt<I>& p, const I& k) const {
    Pt<I> best = p;
    for (int j = 1; j < n; ++j) {
      const Pt<I> c = rot_apply(j, p, k);
      if (c < best) best = c;
    }
    return best;
  }

  int stab_count(const Pt<I>& p, const I& k) const {
    int count = 0;
    for (int j = 0; j < n; ++j)
      if (rot_apply(j, p, k) == p) ++count;
    return count;
  }

  // pi = orbit projection after Q.
  Pt<I> project_pt(const Pt<I>& p, const I& k) const {
    return orbit_min(q.identity ? p : aff_apply(q, p, k), k);
  }

  I scale_for(const Rat& dx, const Rat& dy) const {
    const Int k = lcm_int(base_den, lcm_int(rat_den(dx), rat_den(dy)));
    return cast_int<I>(k);
  }

  Pt<I> to_pt(const TorusPoint& p, const I& k) const {
    const I gx = k / cast_int<I>(rat_den(p.x));
    const I gy = k / cast_int<I>(rat_den(p.y));
    return Pt<I>{cast_int<I>(rat_num(p.x)) * gx, cast_int<I>(rat_num(p.y)) * gy};
  }

  TorusPoint from_pt(const Pt<I>& p, const I& k) const {
    return torus_point(Rat(Int(p.x), Int(k)), Rat(Int(p.y), Int(k)));
  }

  // Fiber pi^{-1}(p) at its natural scale (k0 for identity Q, k0*|det C|
  // otherwise); the scale is returned through kout.
  std::vector<Pt<I>> fiber_scaled(const SpherePoint& p, I& kout) const {
    const I k0 = scale_for(p.rep.x, p.rep.y);
    const Pt<I> p0 = to_pt(p.rep, k0);
    std::vector<Pt<I>> orb{p0};
    for (int j = 1; j < n; ++j) {
      const Pt<I> c = rot_apply(j, p0, k0);
      if (std::find(orb.begin(), orb.end(), c) == orb.end()) orb.push_back(c);
    }
    if (q.identity) {
      kout = k0;
      return orb;
    }
    std::vector<Pt<I>> out;
    for (const auto& o : orb) aff_preimages(q, o, k0, out);
    kout = k0 * q.absdet;
    return out;
  }

  SpherePoint eval(const SpherePoint& p) const {
    I k1;
    const auto fib = fiber_scaled(p, k1);
    bool first = true;
    Pt<I> value{};
    for (const auto& x : fib) {
      const Pt<I> y = project_pt(aff_apply(f, x, k1), k1);
      if (first) {
        value = y;
        first = false;
      } else if (!(y == value)) {
        throw InconsistentFiber("f(p) differs between lifts of p");
      }
    }
    if (first) throw InternalCheckFailure("empty fiber");
    return SpherePoint{from_pt(value, k1), n};
  }

  std::vector<TorusPoint> fiber(const SpherePoint& p) const {
    I k1;
    const auto fib = fiber_scaled(p, k1);
    std::vector<TorusPoint> out;
    for (const auto& x : fib) out.push_back(from_pt(x, k1));
    std::sort(out.begin(), out.end());
    if (out.empty()) throw InternalCheckFailure("empty fiber");
    return out;
  }

  // f-preimages of p as bare sphere points (no degrees), sorted, deduped.
  std::vector<Pt<I>> preimage_pts_scaled(const SpherePoint& p, I& kout) const {
    I k1;
    const auto fib = fiber_scaled(p, k1);
    std::vector<Pt<I>> lifts;
    for (const auto& x : fib) aff_preimages(f, x, k1, lifts);
    const I k2 = k1 * f.absdet;
    std::vector<Pt<I>> ys;
    for (const auto& u : lifts) ys.push_back(project_pt(u, k2));
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
    kout = k2;
    return ys;
  }

  std::vector<SpherePoint> preimage_points(const SpherePoint& p) const {
    I k2;
    const auto ys = preimage_pts_scaled(p, k2);
    std::vector<SpherePoint> out;
    for (const auto& y : ys) out.push_back(SpherePoint{from_pt(y, k2), n});
    return out;
  }

  // f-preimages with local degrees deg(f, y) = deg(pi, F u) / deg(pi, u)
  // for a lift u of y; the ratio must be integral, consistent across lifts,
  // and the degrees must sum to deg f.
  std::vector<DegreedSpherePoint> preimages_sphere(const SpherePoint& p) const {
    I k1;
    const auto fib = fiber_scaled(p, k1);
    std::vector<Pt<I>> lifts;
    for (const auto& x : fib) aff_preimages(f, x, k1, lifts);
    const I k2 = k1 * f.absdet;
    std::vector<std::pair<Pt<I>, int>> found;
    for (const auto& u : lifts) {
      const Pt<I> qu = q.identity ? u : aff_apply(q, u, k2);
      const int dbot = stab_count(qu, k2);
      const Pt<I> fu = aff_apply(f, u, k2);
      const Pt<I> qfu = q.identity ? fu : aff_apply(q, fu, k2);
      const int dtop = stab_count(qfu, k2);
      if (dtop % dbot != 0)
        throw InconsistentFiber("local degree of f is not integral");
      found.emplace_back(orbit_min(qu, k2), dtop / dbot);
    }
    std::sort(found.begin(), found.end());
    std::vector<DegreedSpherePoint> out;
    Int total = 0;
    for (std::size_t i = 0; i < found.size(); ++i) {
      if (i > 0 && found[i].first == found[i - 1].first) {
        if (found[i].second != found[i - 1].second)
          throw InconsistentFiber("local degree of f differs between lifts");
        continue;
      }
      out.push_back(DegreedSpherePoint{SpherePoint{from_pt(found[i].first, k2), n},
                                       found[i].second});
      total += found[i].second;
    }
    if (total != Int(f.absdet))
      throw InternalCheckFailure("preimage degrees do not sum to deg f");
    return out;
  }

  // Certificate that some lift of x is missed by every lift of y.
  struct TransFail {
    SpherePoint x;
    TorusPoint lift;
    SpherePoint y;
  };

  std::optional<TransFail> transversality_failure(
      const std::vector<SpherePoint>& xs) const {
    for (const auto& x : xs) {
      I k1;
      const auto fib = fiber_scaled(x, k1);
      const I k2 = k1 * f.absdet;
      std::vector<std::vector<Pt<I>>> ys_per_lift;
      std::vector<Pt<I>> all;
      for (const auto& xt : fib) {
        std::vector<Pt<I>> lifts;
        aff_preimages(f, xt, k1, lifts);
        std::vector<Pt<I>> ys;
        for (const auto& u : lifts) ys.push_back(project_pt(u, k2));
        std::sort(ys.begin(), ys.end());
        ys.erase(std::unique(ys.begin(), ys.end()), ys.end());
        all.insert(all.end(), ys.begin(), ys.end());
        ys_per_lift.push_back(std::move(ys));
      }
      std::sort(all.begin(), all.end());
      all.erase(std::unique(all.begin(), all.end()), all.end());
      for (std::size_t i = 0; i < fib.size(); ++i) {
        if (ys_per_lift[i].size() == all.size()) continue;
        for (const auto& y : all)
          if (!std::binary_search(ys_per_lift[i].begin(), ys_per_lift[i].end(),
                                  y))
            return TransFail{x, from_pt(fib[i], k1), SpherePoint{from_pt(y, k2), n}};
      }
    }
    return std::nullopt;
  }
};

// Width selection: exact worst-case magnitude of any intermediate value,
// computed with arbitrary precision before choosing the 64-bit engine.
Int kernel_worst_case(const QuotientPair& pair, const Int& max_extra_den,
                      int max_depth);

// Facade dispatching between the two engine widths.
class PairKernel {
 public:
  using TransFail = Engine<Int>::TransFail;

  PairKernel(const QuotientPair& pair, const Int& max_extra_den, int max_depth)
      : pair_(pair) {
    const Int worst = kernel_worst_case(pair, max_extra_den, max_depth);
    if (worst < (Int(1) << 62))
      eng_.emplace<Engine<std::int64_t>>(
          Engine<std::int64_t>::make(pair, max_extra_den));
    else
      eng_.emplace<Engine<Int>>(Engine<Int>::make(pair, max_extra_den));
  }

  SpherePoint eval(const SpherePoint& p) const {
    return std::visit([&](const auto& e) { return e.eval(p); }, eng_);
  }
  std::vector<TorusPoint> fiber(const SpherePoint& p) const {
    return std::visit([&](const auto& e) { return e.fiber(p); }, eng_);
  }
  std::vector<SpherePoint> preimage_points(const SpherePoint& p) const {
    return std::visit([&](const auto& e) { return e.preimage_points(p); },
                      eng_);
  }
  std::vector<DegreedSpherePoint> preimages_sphere(const SpherePoint& p) const {
    return std::visit([&](const auto& e) { return e.preimages_sphere(p); },
                      eng_);
  }
  std::optional<TransFail> transversality_failure(
      const std::vector<SpherePoint>& xs) const {
    return std::visit(
        [&](const auto& e) -> std::optional<TransFail> {
          auto r = e.transversality_failure(xs);
          if (!r) return std::nullopt;
          return TransFail{r->x, r->lift, r->y};
        },
        eng_);
  }

  const QuotientPair& pair() const { return pair_; }

 private:
  QuotientPair pair_;
  std::variant<Engine<std::int64_t>, Engine<Int>> eng_;
};

}  // namespace orbifoldkit::detail
