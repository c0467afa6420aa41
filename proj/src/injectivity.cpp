#include "orbifoldkit/injectivity.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

#include "orbifoldkit/congruence.hpp"
#include "orbifoldkit/errors.hpp"
#include "kernel.hpp"

namespace orbifoldkit {
namespace {

bool vec_is_integral(const Vec2Q& v) { return mod1(v.x) == 0 && mod1(v.y) == 0; }

bool sorted_contains(const std::vector<SpherePoint>& sorted,
                     const SpherePoint& p) {
  return std::binary_search(sorted.begin(), sorted.end(), p);
}

// Every coordinate-denominator appearing in the point set, folded into one
// bound for sizing the evaluation kernel.
Int max_point_denominator(const std::vector<SpherePoint>& pts) {
  Int den = 1;
  for (const auto& p : pts) {
    const Int d = lcm_int(rat_den(p.rep.x), rat_den(p.rep.y));
    if (d > den) den = d;
  }
  return den;
}

// A claimed witness is only reported after passing the direct definition:
// u and v share the pi-fiber over y, F identifies them, and y is outside
// f^{-1}(P_f).
void verify_witness(const QuotientPair& pair, const InjectivityWitness& w,
                    const std::vector<SpherePoint>& level1) {
  if (w.u == w.v)
    throw InternalCheckFailure("injectivity witness uses one point twice");
  if (!(pair.f.apply(w.u) == pair.f.apply(w.v)))
    throw InternalCheckFailure("injectivity witness is not identified by F");
  const SpherePoint pu = project(pair, w.u);
  const SpherePoint pv = project(pair, w.v);
  if (!(pu == pv) || !(pu == w.y))
    throw InternalCheckFailure("injectivity witness lifts leave the fiber");
  if (sorted_contains(level1, w.y))
    throw InternalCheckFailure("injectivity witness base point is excluded");
}

// Walk v0 + t*dir until the projection leaves the excluded set.  The
// excluded set is finite while each scan visits a near-prime number of
// distinct points, so escalating the density always succeeds.
InjectivityWitness scan_for_witness(const QuotientPair& pair,
                                    const Vec2Q& v0, const Vec2Q& dir,
                                    const Vec2Q& w0,
                                    const std::vector<SpherePoint>& level1) {
  for (const Int& den : {Int(1009), Int(65537), Int(1048573)}) {
    for (Int i = 0; i < den; ++i) {
      const Rat t(i, den);
      const TorusPoint v = torus_point(v0.x + t * dir.x, v0.y + t * dir.y);
      const SpherePoint y = project(pair, v);
      if (sorted_contains(level1, y)) continue;
      const TorusPoint u = torus_point(v.x + w0.x, v.y + w0.y);
      InjectivityWitness w{u, v, y};
      verify_witness(pair, w, level1);
      return w;
    }
  }
  throw InternalCheckFailure(
      "witness scan exhausted along a positive-dimensional family");
}

}  // namespace

std::vector<TorusPoint> compute_H(const QuotientPair& pair) {
  std::vector<TorusPoint> h;
  for (const auto& v : deck_group(pair.f))
    if (vec_is_integral(pair.q.a.apply({v.x, v.y}))) h.push_back(v);
  return h;  // deck_group is sorted; filtering preserves that
}

InjectivityVerdict decide_pi_injectivity(const QuotientPair& pair) {
  const std::vector<TorusPoint> h = compute_H(pair);
  const bool fast_injective = h.size() == 1;

  const std::vector<SpherePoint> level1 = marked_sets(pair, 1).levels[1];
  const Mat2Z& a = pair.f.a;
  const Mat2Z& c = pair.q.a;
  const int n = pair.group.order;

  InjectivityVerdict verdict;
  verdict.positive_dimensional = false;
  std::vector<InjectivityWitness> witnesses;

  // Lifted collision equations: u = v + w in the same pi-fiber as v means
  // Q(v+w) = R^k Q(v) + integer vector for some k, and F(u) = F(v) means
  // A w integral.  Expanding Q(v+w) - R^k Q(v) gives, per k:
  //   A w == 0,  C w + (I - R^k)(C v + c) == 0   (mod Z^2)
  // in the four unknowns (v, w).
  for (int k = 0; k < n; ++k) {
    const Mat2Z rk = pair.group.generator.pow(k);
    const Mat2Z imr = Mat2Z::identity() - rk;
    const Mat2Z imrc = imr * c;

    MatZ m = MatZ::zero(4, 4);
    m.at(0, 2) = a.m00;
    m.at(0, 3) = a.m01;
    m.at(1, 2) = a.m10;
    m.at(1, 3) = a.m11;
    m.at(2, 0) = imrc.m00;
    m.at(2, 1) = imrc.m01;
    m.at(2, 2) = c.m00;
    m.at(2, 3) = c.m01;
    m.at(3, 0) = imrc.m10;
    m.at(3, 1) = imrc.m11;
    m.at(3, 2) = c.m10;
    m.at(3, 3) = c.m11;

    const Vec2Q shift = imr.apply(pair.q.b);
    const std::vector<Rat> rhs{0, 0, -shift.x, -shift.y};

    CosetFamily family{4, {}};
    try {
      family = solve_congruence(m, rhs);
    } catch (const EmptySolution&) {
      continue;
    }

    for (const auto& comp : family.components) {
      // Free directions (v*, w*) satisfy A w* = 0 exactly, and A is
      // nonsingular over Q, so their difference part must vanish.
      for (const auto& g : comp.generators)
        if (g[2] != 0 || g[3] != 0)
          throw InternalCheckFailure(
              "free solution direction moves the difference vector");

      const Vec2Q w0{comp.offset[2], comp.offset[3]};
      if (w0.x == 0 && w0.y == 0) continue;  // u = v: no collision
      const Vec2Q v0{comp.offset[0], comp.offset[1]};

      if (!comp.isolated()) {
        // A whole subtorus of collisions; the excluded set is finite, so
        // non-injectivity follows, with a scanned witness as evidence.
        verdict.positive_dimensional = true;
        const Vec2Q dir{comp.generators[0][0], comp.generators[0][1]};
        witnesses.push_back(scan_for_witness(pair, v0, dir, w0, level1));
      } else {
        const TorusPoint v = torus_point(v0);
        const SpherePoint y = project(pair, v);
        if (sorted_contains(level1, y)) continue;  // based over excluded point
        const TorusPoint u = torus_point(v0.x + w0.x, v0.y + w0.y);
        InjectivityWitness w{u, v, y};
        verify_witness(pair, w, level1);
        witnesses.push_back(w);
      }
    }
  }

  std::sort(witnesses.begin(), witnesses.end(),
            [](const InjectivityWitness& l, const InjectivityWitness& r) {
              if (!(l.u == r.u)) return l.u < r.u;
              if (!(l.v == r.v)) return l.v < r.v;
              return l.y < r.y;
            });
  witnesses.erase(std::unique(witnesses.begin(), witnesses.end()),
                  witnesses.end());

  const bool full_injective = witnesses.empty();
  if (fast_injective != full_injective)
    throw PathDisagreement(
        "subgroup criterion and congruence search disagree on injectivity");

  verdict.injective = fast_injective;
  verdict.witnesses = std::move(witnesses);
  return verdict;
}

std::vector<InjectivityVerdict> iterate_injectivity(const QuotientPair& pair,
                                                    int m) {
  if (m < 1) throw InputError("iterate count must be at least 1");
  std::vector<InjectivityVerdict> verdicts;
  for (int j = 1; j <= m; ++j)
    verdicts.push_back(decide_pi_injectivity(power_pair(pair, j)));
  if (verdicts.front().injective)
    for (const auto& v : verdicts)
      if (!v.injective)
        throw InternalCheckFailure(
            "an iterate of an injective endomorphism lost injectivity");
  return verdicts;
}

TransversalityReport check_transversality(const QuotientPair& pair,
                                          const std::vector<SpherePoint>& extra) {
  std::vector<SpherePoint> xs = marked_sets(pair, 1).levels[1];
  xs.insert(xs.end(), extra.begin(), extra.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  const detail::PairKernel kernel(pair, max_point_denominator(xs), 1);
  const auto fail = kernel.transversality_failure(xs);

  TransversalityReport report;
  report.points_checked = static_cast<long>(xs.size());
  if (fail) {
    report.transversal = false;
    report.failure =
        TransversalityCertificate{fail->x, fail->lift, fail->y};
  }
  return report;
}

namespace {

// Smallest-radius unimodular twist W such that rewriting the pair in the
// basis B0*W yields a pair accepted by make_pair with the fixed rotation
// generator.  Scanning shells outward in a fixed lexicographic order makes
// the choice canonical; the identity is tried first so bases that already
// work are kept.
Mat2Q mat_add(const Mat2Q& x, const Mat2Q& y) {
  return {x.m00 + y.m00, x.m01 + y.m01, x.m10 + y.m10, x.m11 + y.m11};
}

Mat2Q mat_sub(const Mat2Q& x, const Mat2Q& y) {
  return {x.m00 - y.m00, x.m01 - y.m01, x.m10 - y.m10, x.m11 - y.m11};
}

// Rewrites the pair in an affine chart x = B u + s of the enlarged lattice,
// with B = B0 W for unimodular W and a rational origin shift s.  Every such
// chart induces the same sphere map; the search is for one whose rewritten
// pair passes validation.  The matrix conditions cut the W candidates
// (B conjugates the rotation group to itself; B^-1 A B and C B integral;
// equivariance and compatibility exponents exist), and the remaining
// translation identities are linear in s, so s is found exactly by the
// congruence solver instead of by search.
QuotientPair requotient_in_basis(const QuotientPair& pair, const Mat2Q& b0,
                                 Mat2Q& basis_out) {
  const int n = pair.group.order;
  const auto pows = pair.group.powers();
  const Mat2Q rq = Mat2Q::from(pair.group.generator);
  const Mat2Q aq = Mat2Q::from(pair.f.a);
  const Mat2Q cq = Mat2Q::from(pair.q.a);
  const Mat2Q a_minus_i = mat_sub(aq, Mat2Q::identity());

  auto attempt = [&](const Mat2Z& w) -> std::optional<QuotientPair> {
    if (w.det() != 1 && w.det() != -1) return std::nullopt;
    const Mat2Q b = b0 * Mat2Q::from(w);
    // The chart must conjugate the rotation group to itself: R B = B R^j for
    // some j coprime to the order.  j = 1 is the commuting case; j = n - 1
    // maps the generator to its inverse, which generates the same group and
    // is required for maps that reverse the rotation sense: their enlarged
    // lattice need not admit any commuting basis at all.
    int jb = -1;
    for (int j = 1; j < n; ++j) {
      if (std::gcd(j, n) != 1) continue;
      if (rq * b == b * Mat2Q::from(pows[j])) {
        jb = j;
        break;
      }
    }
    if (jb < 0) return std::nullopt;
    const Mat2Q binv = b.inverse();
    const Mat2Q ahat = binv * aq * b;
    const Mat2Q chat = cq * b;
    if (!ahat.is_integer() || !chat.is_integer()) return std::nullopt;
    const Mat2Z az = ahat.to_integer();
    const Mat2Z cz = chat.to_integer();
    // Equivariance exponents of the rewritten maps, read off the matrices
    // (conjugating by B can change them when j != 1).
    int jfh = -1;
    int jqh = -1;
    for (int j = 1; j < n; ++j) {
      if (az * pows[1] == pows[j] * az) jfh = j;
      if (cz * pows[1] == pows[j] * cz) jqh = j;
    }
    if (jfh < 0 || jqh < 0) return std::nullopt;
    // The compatibility exponent is determined by the matrices alone.
    int khat = -1;
    for (int k = 0; k < n; ++k)
      if (cz * az == pows[k] * (az * cz)) {
        khat = k;
        break;
      }
    if (khat < 0) return std::nullopt;
    const Mat2Q rk = Mat2Q::from(pows[khat]);

    // In the shifted chart the maps are
    //   F'(u) = A' u + B^-1((A - I) s + b),   Q'(u) = C B u + (C s + c).
    // Validation imposes three conditions on the translations, each linear
    // in s modulo Z^2:
    //   compatibility   C'b' + c' - R^k(A'c' + b') in Z^2,
    //   equivariance of F'   (I - R^jf) b' in Z^2,
    //   equivariance of Q'   (I - R^jq) c' in Z^2.
    // Solving only a subset would admit shift components whose canonical
    // offset violates the rest even though valid shifts lie elsewhere on the
    // same component, so all six rows go into one stacked congruence.
    const Mat2Q d = binv * a_minus_i;
    const Mat2Q msys = mat_sub(mat_add(chat * d, cq),
                               rk * mat_add(ahat * cq, d));
    const Vec2Q bhat0 = binv.apply(pair.f.b);
    const Vec2Q t0 = chat.apply(bhat0) + pair.q.b -
                     rk.apply(ahat.apply(pair.q.b) + bhat0);
    const Mat2Q jf_i = mat_sub(Mat2Q::identity(), Mat2Q::from(pows[jfh]));
    const Mat2Q jq_i = mat_sub(Mat2Q::identity(), Mat2Q::from(pows[jqh]));
    const Mat2Q mf = jf_i * d;
    const Vec2Q tf = jf_i.apply(bhat0);
    const Mat2Q mq = jq_i * cq;
    const Vec2Q tq = jq_i.apply(pair.q.b);
    CosetFamily shifts;
    try {
      shifts = solve_congruence_rational({{msys.m00, msys.m01},
                                          {msys.m10, msys.m11},
                                          {mf.m00, mf.m01},
                                          {mf.m10, mf.m11},
                                          {mq.m00, mq.m01},
                                          {mq.m10, mq.m11}},
                                         {-t0.x, -t0.y, -tf.x, -tf.y, -tq.x,
                                          -tq.y});
    } catch (const EmptySolution&) {
      return std::nullopt;
    }
    for (const auto& comp : shifts.components) {
      const Vec2Q s{comp.offset[0], comp.offset[1]};
      const Vec2Q bhat = binv.apply(a_minus_i.apply(s) + pair.f.b);
      const Vec2Q chat_b = cq.apply(s) + pair.q.b;
      try {
        QuotientPair next = make_pair(pair.group, AffineEndo::make(az, bhat),
                                      AffineEndo::make(cz, chat_b));
        basis_out = b;
        return next;
      } catch (const InputError&) {
        continue;
      }
    }
    return std::nullopt;
  };

  if (auto found = attempt(Mat2Z::identity())) return *found;
  for (int radius = 1; radius <= 12; ++radius) {
    for (int w00 = -radius; w00 <= radius; ++w00)
      for (int w01 = -radius; w01 <= radius; ++w01)
        for (int w10 = -radius; w10 <= radius; ++w10)
          for (int w11 = -radius; w11 <= radius; ++w11) {
            const int shell = std::max({std::abs(w00), std::abs(w01),
                                        std::abs(w10), std::abs(w11)});
            if (shell != radius) continue;
            if (auto found = attempt(Mat2Z{w00, w01, w10, w11}))
              return *found;
          }
  }
  throw InternalCheckFailure(
      "no admissible basis found for the quotient lattice");
}

}  // namespace

QuotientStep quotient_step(const QuotientPair& pair,
                           const std::vector<SpherePoint>& extra_checks) {
  std::vector<TorusPoint> h = compute_H(pair);
  if (h.size() < 2)
    throw TrivialH("projection is already injective; nothing to quotient");

  std::vector<Vec2Q> lifts;
  for (const auto& p : h) lifts.push_back({p.x, p.y});
  const Mat2Q b0 = superlattice_basis(lifts);

  // The enlarged lattice has index |H| over Z^2, so any basis has
  // |det| = 1/|H|.
  Rat absdet = b0.det();
  if (absdet < 0) absdet = -absdet;
  if (absdet * Rat(Int(h.size())) != 1)
    throw InternalCheckFailure("superlattice index does not match |H|");

  QuotientStep step;
  step.h = std::move(h);
  step.new_pair = requotient_in_basis(pair, b0, step.basis);
  step.deg_pi_before = pair.degree_pi();
  step.deg_pi_after = step.new_pair.degree_pi();

  if (step.deg_pi_after * Int(step.h.size()) != step.deg_pi_before)
    throw InternalCheckFailure("projection degree did not drop by |H|");
  if (step.new_pair.f.a.det() != pair.f.a.det())
    throw InternalCheckFailure("quotient changed the determinant of F");
  // The chart's linear part conjugates the rotation generator to R^j for
  // some unit j mod the order; under that twist the equivariance exponent of
  // F is invariant (F transforms by two-sided conjugation) while the one of
  // Q is multiplied by the inverse unit (Q is composed with the chart on one
  // side only).
  {
    const int n = pair.group.order;
    const auto pows = pair.group.powers();
    const Mat2Q rq = Mat2Q::from(pair.group.generator);
    int jb = -1;
    for (int j = 1; j < n; ++j) {
      if (std::gcd(j, n) != 1) continue;
      if (rq * step.basis == step.basis * Mat2Q::from(pows[j])) {
        jb = j;
        break;
      }
    }
    if (jb < 0)
      throw InternalCheckFailure(
          "quotient basis does not normalize the rotation group");
    int jstar = -1;
    for (int j = 1; j < n && jstar < 0; ++j)
      if (jb * j % n == 1) jstar = j;
    if (step.new_pair.jf != pair.jf ||
        step.new_pair.jq != pair.jq * jstar % n)
      throw InternalCheckFailure(
          "equivariance exponents inconsistent with the quotient chart");
  }

  // The rewritten pair must induce the same sphere map; compare on the
  // marked points (level 1) and on any caller-supplied samples.
  std::vector<SpherePoint> xs = marked_sets(pair, 1).levels[1];
  xs.insert(xs.end(), extra_checks.begin(), extra_checks.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const Int maxden = max_point_denominator(xs);
  const detail::PairKernel old_kernel(pair, maxden, 0);
  const detail::PairKernel new_kernel(step.new_pair, maxden, 0);
  for (const auto& x : xs)
    if (!(old_kernel.eval(x) == new_kernel.eval(x)))
      throw InternalCheckFailure("quotient changed the induced sphere map");

  return step;
}

InjectivityReduction make_injective(const QuotientPair& pair,
                                    const std::vector<SpherePoint>& extra_checks) {
  InjectivityReduction reduction{pair, {}};
  // deg pi strictly decreases, so the loop ends; the cap is a safety net.
  for (int round = 0; round < 64; ++round) {
    if (compute_H(reduction.final_pair).size() == 1) return reduction;
    QuotientStep step = quotient_step(reduction.final_pair, extra_checks);
    if (!(step.deg_pi_after < step.deg_pi_before))
      throw InternalCheckFailure("quotient step failed to reduce deg pi");
    reduction.final_pair = step.new_pair;
    reduction.steps.push_back(std::move(step));
  }
  throw InternalCheckFailure("quotient iteration failed to terminate");
}

bool check_fiber_degree_constancy(const QuotientPair& pair) {
  for (const auto& p : projection_critical_values(pair)) {
    const std::vector<TorusPoint> fiber = pi_fiber(pair, p);
    std::vector<int> degrees;
    for (const auto& x : fiber) degrees.push_back(local_degree_pi(pair, x));
    if (!check_fiber_degree_constancy({degrees})) return false;
  }
  return true;
}

bool check_fiber_degree_constancy(
    const std::vector<std::vector<int>>& fiber_degrees) {
  for (const auto& fiber : fiber_degrees)
    for (const int d : fiber)
      if (d != fiber.front()) return false;
  return true;
}

}  // namespace orbifoldkit
