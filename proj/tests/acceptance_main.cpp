// End-to-end acceptance battery.  Ten exact checks covering the golden
// base instance, the non-injective companion, the full enumerated family,
// randomized stress portraits, and the classification arithmetic.  Every
// comparison is exact (rational or integer equality); there are no
// tolerances anywhere.  Prints one line per criterion and exits nonzero
// when any of them fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "orbifoldkit/driver.hpp"

using namespace orbifoldkit;
using Clock = std::chrono::steady_clock;

namespace {

Rat q(const std::string& s) { return rat_from_string(s); }

TorusPoint tp(const std::string& x, const std::string& y) {
  return torus_point(q(x), q(y));
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

InstanceSpec base_spec() {
  InstanceSpec spec;
  spec.group = RotationGroup::of_order(2);
  spec.f = AffineEndo::make({2, 0, 0, 2}, {0, 0});
  return spec;
}

InstanceSpec base_qf_spec() {
  InstanceSpec spec = base_spec();
  spec.q = spec.f;
  return spec;
}

// A failed expectation inside a criterion body.
struct Failed {
  std::string what;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failed{what};
}

// Shared across criteria 4-9: the enumerated instance family with the
// injectivity verdict of each member (or the error it raised).
struct FamilyData {
  std::vector<InstanceSpec> specs;
  std::vector<QuotientPair> pairs;
  std::vector<std::optional<InjectivityVerdict>> verdicts;
  std::vector<std::string> verdict_errors;
  std::vector<std::size_t> h_orders;
};

FamilyData prepare_family() {
  FamilyData fam;
  fam.specs = enumerate_sweep_instances(SweepOptions{});
  fam.pairs.reserve(fam.specs.size());
  fam.verdicts.resize(fam.specs.size());
  fam.verdict_errors.resize(fam.specs.size());
  fam.h_orders.resize(fam.specs.size());
  for (std::size_t i = 0; i < fam.specs.size(); ++i) {
    fam.pairs.push_back(pair_from_instance(fam.specs[i]));
    fam.h_orders[i] = compute_H(fam.pairs[i]).size();
    try {
      fam.verdicts[i] = decide_pi_injectivity(fam.pairs[i]);
    } catch (const std::exception& e) {
      fam.verdict_errors[i] = e.what();
    }
  }
  return fam;
}

std::string instance_tag(const FamilyData& fam, std::size_t i) {
  std::ostringstream os;
  os << "instance " << i << " of " << fam.specs.size();
  return os.str();
}

// Small random portraits with finite ramification: a complete core of
// unramified vertices whose incoming degrees are topped up by incomplete
// leaves, so critical vertices are never periodic.
RamifiedPortrait random_portrait(std::mt19937_64& rng) {
  for (;;) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const int w = 1 + static_cast<int>(rng() % 3);
    std::vector<int> core(w);
    for (int i = 0; i < w; ++i) core[i] = static_cast<int>(rng() % w);
    std::vector<int> indeg(w, 0);
    for (int i = 0; i < w; ++i) ++indeg[core[i]];
    bool fits = true;
    for (int v = 0; v < w; ++v)
      if (indeg[v] > d) fits = false;
    if (!fits) continue;

    RamifiedPortrait p;
    p.degree = d;
    for (int v = 0; v < w; ++v) {
      p.vertices.push_back("c" + std::to_string(v));
      p.sigma.push_back(core[v]);
      p.delta.push_back(1);
      p.complete.push_back(true);
    }
    for (int v = 0; v < w; ++v) {
      const int deficit = d - indeg[v];
      if (deficit == 0) continue;
      p.vertices.push_back("l" + std::to_string(v));
      p.sigma.push_back(v);
      p.delta.push_back(deficit);
      p.complete.push_back(false);
    }
    return p;
  }
}

// ---------------------------------------------------------------- criteria

// 1. Golden base instance: branch values, degrees, critical and
//    postcritical data, injectivity, and the flat signature, all exact and
//    fast.
void criterion_1() {
  const auto t0 = Clock::now();
  const InstanceSpec spec = base_spec();
  const QuotientPair pair = pair_from_instance(spec);
  const RotationGroup g = pair.group;

  std::vector<SpherePoint> expected_branch = {
      sphere_canonical(g, tp("0", "0")), sphere_canonical(g, tp("1/2", "0")),
      sphere_canonical(g, tp("1/2", "1/2")),
      sphere_canonical(g, tp("0", "1/2"))};
  std::sort(expected_branch.begin(), expected_branch.end());
  expect(projection_critical_values(pair) == expected_branch,
         "projection branch values differ from the four half-integer points");

  expect(pair.degree_f() == 4, "deg f != 4");
  expect(pair.degree_pi() == 2, "deg pi != 2");

  const std::vector<DegreedSpherePoint> crit = critical_set_f(pair);
  expect(crit.size() == 6, "critical set size != 6");

  // The union of all lifts of the critical points is exactly the
  // quarter-integer grid minus the half-integer grid.
  std::vector<TorusPoint> lifts;
  for (const auto& c : crit)
    for (const auto& t : pi_fiber(pair, c.point)) lifts.push_back(t);
  std::sort(lifts.begin(), lifts.end());
  lifts.erase(std::unique(lifts.begin(), lifts.end()), lifts.end());
  std::vector<TorusPoint> expected_lifts;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a % 2 == 0 && b % 2 == 0) continue;
      expected_lifts.push_back(torus_point(Rat(a) / 4, Rat(b) / 4));
    }
  std::sort(expected_lifts.begin(), expected_lifts.end());
  expect(lifts == expected_lifts,
         "critical lifts differ from the twelve strict quarter points");

  const std::vector<SpherePoint> post = postcritical_set(pair);
  expect(post.size() == 4, "postcritical set size != 4");
  for (const auto& c : crit)
    expect(!std::binary_search(post.begin(), post.end(), c.point),
           "a critical point lies inside the postcritical set");

  // The critical set equals the full backward level minus its base here.
  const MarkedSets ms = marked_sets(pair, 1);
  std::vector<SpherePoint> diff;
  std::set_difference(ms.levels[1].begin(), ms.levels[1].end(),
                      ms.levels[0].begin(), ms.levels[0].end(),
                      std::back_inserter(diff));
  std::vector<SpherePoint> crit_points;
  for (const auto& c : crit) crit_points.push_back(c.point);
  std::sort(crit_points.begin(), crit_points.end());
  expect(crit_points == diff,
         "critical set is not the first marked level minus the postcritical "
         "set");

  expect(decide_pi_injectivity(pair).injective,
         "base instance not reported pi-injective");

  const OrbifoldData data = ramification(portrait_from_qote(pair));
  const std::vector<Nu> flat = {Nu{2, false}, Nu{2, false}, Nu{2, false},
                                Nu{2, false}};
  expect(data.signature == flat, "signature != (2,2,2,2)");
  expect(data.chi == Rat(0), "Euler characteristic != 0");

  const RunResult rr = run_analyze(spec, RunOptions{});
  expect(rr.checks_passed, "full analysis reported a failed check");

  const double dt = seconds_since(t0);
  if (dt >= 1.0) {
    std::ostringstream os;
    os << "took " << dt << " s (budget 1 s)";
    throw Failed{os.str()};
  }
}

// 2. The precomposed companion: non-injective with a re-verified witness,
//    deck order 4, and a one-step reduction with the exact degree ledger.
void criterion_2() {
  const InstanceSpec spec = base_qf_spec();
  const QuotientPair pair = pair_from_instance(spec);
  const RotationGroup g = pair.group;

  const InjectivityVerdict verdict = decide_pi_injectivity(pair);
  expect(!verdict.injective, "precomposed instance reported injective");
  expect(!verdict.witnesses.empty(), "no witness produced");

  const MarkedSets ms = marked_sets(pair, 1);
  for (const auto& w : verdict.witnesses) {
    expect(!(w.u == w.v), "witness points coincide");
    const SpherePoint pu = sphere_canonical(g, pair.q.apply(w.u));
    const SpherePoint pv = sphere_canonical(g, pair.q.apply(w.v));
    expect(pu == w.y && pv == w.y, "witness points not in the fiber over y");
    expect(pair.f.apply(w.u) == pair.f.apply(w.v),
           "witness points not identified by the endomorphism");
    expect(!std::binary_search(ms.levels[1].begin(), ms.levels[1].end(), w.y),
           "witness base point lies in the excluded marked set");
  }

  expect(compute_H(pair).size() == 4, "|H| != 4");

  const InjectivityReduction red = make_injective(pair);
  expect(red.steps.size() == 1, "reduction does not take exactly one step");
  const QuotientStep& s = red.steps[0];
  expect(s.deg_pi_before == 8 && s.deg_pi_after == 2,
         "degree ledger is not 8 -> 2");
  expect(s.h.size() == 4, "quotient step removed a group of order != 4");
  expect(s.deg_pi_before == s.deg_pi_after * Int(4),
         "degree ledger 8 = 2*4 violated");
  expect(red.final_pair.degree_pi() == 2, "final deg pi != 2");
  expect(decide_pi_injectivity(red.final_pair).injective,
         "reduced pair not injective");
}

// 3. Full family battery: every enumerated instance passes the per-instance
//    exact checks (flat Euler characteristic, finite signature, fiber
//    degree constancy, critical count identity, decision-path agreement)
//    inside the time budget.
void criterion_3(const FamilyData& fam) {
  const auto t0 = Clock::now();
  const SweepOutcome out = run_sweep(SweepOptions{});
  const double dt = seconds_since(t0);
  if (out.failures != 0) {
    std::ostringstream os;
    os << out.failures << " failing instances; first: "
       << (out.failure_lines.empty() ? std::string("<none>")
                                     : out.failure_lines.front());
    throw Failed{os.str()};
  }
  expect(out.instances == static_cast<long>(fam.specs.size()),
         "sweep count differs from the enumerated family");
  if (dt >= 60.0) {
    std::ostringstream os;
    os << "took " << dt << " s (budget 60 s)";
    throw Failed{os.str()};
  }
}

// 4. Degree-excess sum and the multiplicative local-degree identity at
//    every marked lift, across the family.
void criterion_4(const FamilyData& fam) {
  for (std::size_t i = 0; i < fam.pairs.size(); ++i) {
    const QuotientPair& pair = fam.pairs[i];
    Int excess = 0;
    for (const auto& c : critical_set_f(pair)) excess += Int(c.degree - 1);
    expect(excess == Int(2) * pair.degree_f() - 2,
           "degree-excess sum violated at " + instance_tag(fam, i));

    const MarkedSets ms = marked_sets(pair, 1);
    for (const SpherePoint& p : ms.levels[1]) {
      const int df = local_degree_f(pair, p);
      for (const TorusPoint& t : pi_fiber(pair, p)) {
        const int up = local_degree_pi(pair, pair.f.apply(t));
        const int down = local_degree_pi(pair, t);
        expect(up == df * down,
               "local-degree identity violated at " + instance_tag(fam, i));
      }
    }
  }
}

// 5. The subgroup path and the congruence path agree everywhere.
void criterion_5(const FamilyData& fam) {
  for (std::size_t i = 0; i < fam.pairs.size(); ++i) {
    expect(fam.verdicts[i].has_value(),
           "decision raised \"" + fam.verdict_errors[i] + "\" at " +
               instance_tag(fam, i));
    expect(fam.verdicts[i]->injective == (fam.h_orders[i] == 1),
           "paths disagree at " + instance_tag(fam, i));
  }
}

// 6. Injectivity persists for the second and third iterates.
void criterion_6(const FamilyData& fam) {
  for (std::size_t i = 0; i < fam.pairs.size(); ++i) {
    if (!fam.verdicts[i] || !fam.verdicts[i]->injective) continue;
    const auto verdicts = iterate_injectivity(fam.pairs[i], 3);
    expect(verdicts.size() == 3, "iterate count wrong");
    for (const auto& v : verdicts)
      expect(v.injective,
             "an iterate loses injectivity at " + instance_tag(fam, i));
  }
}

// 7. Transversality certified exhaustively on the marked sets and on
//    seeded random points, for the map and its square.
void criterion_7(const FamilyData& fam) {
  for (std::size_t i = 0; i < fam.pairs.size(); ++i) {
    if (!fam.verdicts[i] || !fam.verdicts[i]->injective) continue;
    const QuotientPair& pair = fam.pairs[i];
    const MarkedSets ms = marked_sets(pair, 1);
    const auto extra = random_sphere_points(
        pair, 100, 20260819ULL + static_cast<unsigned long long>(i),
        ms.levels[1]);

    const TransversalityReport r1 = check_transversality(pair, extra);
    expect(r1.transversal,
           "transversality fails for the map at " + instance_tag(fam, i));
    expect(r1.points_checked >= static_cast<long>(ms.levels[1].size()),
           "transversality skipped marked points at " + instance_tag(fam, i));

    const QuotientPair squared = power_pair(pair, 2);
    const TransversalityReport r2 = check_transversality(squared, extra);
    expect(r2.transversal,
           "transversality fails for the square at " + instance_tag(fam, i));
  }
}

// 8. Fixed-point ramification equals the truncated backward oracle, on the
//    family and on randomized finite portraits.
void criterion_8(const FamilyData& fam) {
  for (std::size_t i = 0; i < fam.pairs.size(); ++i) {
    const QuotientPair& pair = fam.pairs[i];
    const RamifiedPortrait portrait = portrait_from_qote(pair);
    const OrbifoldData data = ramification(portrait);
    expect(ramification_matches_oracle(portrait, data),
           "portrait oracle mismatch at " + instance_tag(fam, i));
    expect(ramification_matches_oracle(pair, data),
           "preimage oracle mismatch at " + instance_tag(fam, i));
  }

  std::mt19937_64 rng(20260819ULL);
  for (int trial = 0; trial < 50; ++trial) {
    const RamifiedPortrait p = random_portrait(rng);
    expect(p.vertices.size() <= 8, "generated portrait too large");
    const OrbifoldData data = ramification(p);
    for (const Nu& v : data.signature)
      expect(!v.inf, "generated portrait has infinite ramification");
    expect(ramification_matches_oracle(p, data),
           "oracle mismatch on random portrait " + std::to_string(trial));
  }
}

// 9. The reduction preserves the induced sphere map exactly, and its degree
//    ledger strictly decreases.
void criterion_9(const FamilyData& fam) {
  for (std::size_t i = 0; i < fam.pairs.size(); ++i) {
    if (!fam.verdicts[i] || fam.verdicts[i]->injective) continue;
    const QuotientPair& pair = fam.pairs[i];
    const MarkedSets ms = marked_sets(pair, 1);
    const auto probes = random_sphere_points(
        pair, 50, 926001ULL + static_cast<unsigned long long>(i),
        ms.levels[1]);

    const InjectivityReduction red = make_injective(pair, probes);
    expect(!red.steps.empty(), "no step on a non-injective instance");
    Int expected_before = pair.degree_pi();
    for (const QuotientStep& s : red.steps) {
      expect(s.deg_pi_before == expected_before,
             "ledger discontinuity at " + instance_tag(fam, i));
      expect(s.deg_pi_after < s.deg_pi_before,
             "degree does not strictly decrease at " + instance_tag(fam, i));
      expect(s.deg_pi_before == s.deg_pi_after * Int(static_cast<long>(s.h.size())),
             "degree drop is not exactly |H| at " + instance_tag(fam, i));
      expected_before = s.deg_pi_after;
    }
    expect(red.final_pair.degree_pi() == expected_before,
           "final degree differs from the ledger at " + instance_tag(fam, i));

    for (const SpherePoint& p : ms.levels[1])
      expect(eval_f(red.final_pair, p) == eval_f(pair, p),
             "sphere map changed on a marked point at " + instance_tag(fam, i));
    for (const SpherePoint& p : probes)
      expect(eval_f(red.final_pair, p) == eval_f(pair, p),
             "sphere map changed on a sample point at " + instance_tag(fam, i));
  }
}

// 10. Classification arithmetic on fixed signatures, exact fractions.
void criterion_10() {
  const auto fin = [](long k) { return Nu{Int(k), false}; };
  const Nu oo = Nu::infinity();

  const std::vector<std::vector<Nu>> parabolic = {
      {fin(2), fin(2), fin(2), fin(2)}, {fin(2), fin(4), fin(4)},
      {fin(3), fin(3), fin(3)},         {fin(2), fin(3), fin(6)},
      {oo, oo},                         {fin(2), fin(2), oo}};
  for (const auto& sig : parabolic) {
    const OrbifoldData data = orbifold_from_signature(sig);
    expect(classify(data) == OrbifoldClass::Parabolic,
           "a flat signature does not classify parabolic");
    expect(data.chi == Rat(0), "a flat signature has nonzero chi");
  }

  const OrbifoldData hyp = orbifold_from_signature({fin(2), fin(4), fin(6)});
  expect(classify(hyp) == OrbifoldClass::Hyperbolic,
         "(2,4,6) does not classify hyperbolic");
  expect(hyp.chi == Rat(-1) / 12, "(2,4,6) chi != -1/12");

  const OrbifoldData bad = orbifold_from_signature({fin(2), fin(2)});
  expect(classify(bad) == OrbifoldClass::NotRealizable,
         "(2,2) does not classify not-realizable");
  expect(bad.chi == Rat(1), "(2,2) chi != 1");
}

}  // namespace

int main() {
  FamilyData fam;
  try {
    fam = prepare_family();
  } catch (const std::exception& e) {
    std::printf("FAIL | family preparation: %s\n", e.what());
    return 1;
  }

  struct Entry {
    const char* name;
    std::function<void()> run;
  };
  const std::vector<Entry> criteria = {
      {"criterion 1: golden base-instance analysis", [&] { criterion_1(); }},
      {"criterion 2: non-injective companion with verified witness",
       [&] { criterion_2(); }},
      {"criterion 3: full family battery inside the time budget",
       [&] { criterion_3(fam); }},
      {"criterion 4: degree-excess and local-degree identities",
       [&] { criterion_4(fam); }},
      {"criterion 5: decision paths agree on every instance",
       [&] { criterion_5(fam); }},
      {"criterion 6: second and third iterates stay injective",
       [&] { criterion_6(fam); }},
      {"criterion 7: transversality for the map and its square",
       [&] { criterion_7(fam); }},
      {"criterion 8: ramification equals the backward oracle",
       [&] { criterion_8(fam); }},
      {"criterion 9: reduction preserves the sphere map exactly",
       [&] { criterion_9(fam); }},
      {"criterion 10: classification arithmetic on fixed signatures",
       [&] { criterion_10(); }},
  };

  int failures = 0;
  for (const Entry& entry : criteria) {
    std::string detail;
    bool ok = true;
    try {
      entry.run();
    } catch (const Failed& f) {
      ok = false;
      detail = f.what;
    } catch (const std::exception& e) {
      ok = false;
      detail = std::string("unexpected error: ") + e.what();
    }
    if (ok)
      std::printf("PASS | %s\n", entry.name);
    else
      std::printf("FAIL | %s — %s\n", entry.name, detail.c_str());
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
