#include "orbifoldkit/driver.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json_codec.hpp"
#include "kernel.hpp"
#include "orbifoldkit/congruence.hpp"
#include "orbifoldkit/errors.hpp"

namespace orbifoldkit {
namespace {

using detail::OJson;

// Independent mixers so the quotient agreement samples and the figure's
// fiber sample do not reuse the transversality sample stream.
constexpr unsigned long long kQuotientSeedMix = 0x9e3779b97f4a7c15ULL;
constexpr unsigned long long kFigureSeedMix = 0xc2b2ae3d27d4eb4fULL;

unsigned long long fnv1a64(const std::string& s) {
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

// Per-instance sample seed: hash of the canonical instance form (without
// run options) mixed with the base seed, so the same instance draws the
// same points regardless of unrelated flags.
unsigned long long instance_seed(const InstanceSpec& spec,
                                 unsigned long long base) {
  InstanceSpec bare = spec;
  bare.options = AnalysisOptions{};
  return fnv1a64(instance_to_json(bare)) ^ base;
}

std::string int_str(const Int& v) { return rat_to_string(Rat(v)); }

OJson int_json(const Int& v) { return int_str(v); }

Int point_den(const TorusPoint& p) {
  return lcm_int(rat_den(p.x), rat_den(p.y));
}

Int max_point_den(const std::vector<SpherePoint>& pts) {
  Int m = 1;
  for (const auto& p : pts) {
    const Int d = point_den(p.rep);
    if (d > m) m = d;
  }
  return m;
}

std::string nu_str(const Nu& v) { return v.inf ? "inf" : int_str(v.v); }

std::string signature_string(const OrbifoldData& data) {
  std::string s = "(";
  for (std::size_t i = 0; i < data.signature.size(); ++i) {
    if (i) s += ",";
    s += nu_str(data.signature[i]);
  }
  return s + ")";
}

// Run one check section; any library error turns into a failed section
// instead of aborting the rest of the report.
template <typename Fn>
OJson run_check(bool& all, Fn&& fn) {
  try {
    OJson j = fn();
    if (!j.value("pass", false)) all = false;
    return j;
  } catch (const Error& e) {
    all = false;
    OJson j;
    j["pass"] = false;
    j["error"] = e.what();
    return j;
  }
}

OJson check_riemann_hurwitz(const QuotientPair& pair) {
  // critical_set_f verifies sum(deg - 1) == 2 deg f - 2 before returning.
  const auto crit = critical_set_f(pair);
  Int excess = 0;
  for (const auto& c : crit) excess += c.degree - 1;
  OJson j;
  j["pass"] = true;
  j["sum_of_degree_excess"] = int_json(excess);
  j["expected"] = int_json(Int(2) * pair.degree_f() - 2);
  return j;
}

// deg(pi, F x) == deg(f, pi x) * deg(pi, x) at every lift of every marked
// point.  The factor deg(f, pi x) is fixed by the first lift of each fiber,
// so constancy across the fiber is part of the check.
OJson check_chain_rule(const QuotientPair& pair, const MarkedSets& ms) {
  const auto& pts = ms.levels.back();
  detail::PairKernel kern(pair, max_point_den(pts), 1);
  OJson j;
  long checked = 0;
  for (const auto& p : pts) {
    const auto fib = kern.fiber(p);
    int deg_f_here = 0;
    for (const auto& x : fib) {
      const int dx = local_degree_pi(pair, x);
      const int dy = local_degree_pi(pair, pair.f.apply(x));
      if (deg_f_here == 0) {
        if (dy % dx != 0) deg_f_here = -1;
        else deg_f_here = dy / dx;
      }
      if (deg_f_here <= 0 || dy != deg_f_here * dx) {
        j["pass"] = false;
        j["lifts_checked"] = checked;
        OJson fail;
        fail["point"] = detail::sphere_to_json(p);
        fail["lift"] = detail::point_to_json(x);
        fail["deg_pi_at_lift"] = dx;
        fail["deg_pi_at_image"] = dy;
        j["failure"] = fail;
        return j;
      }
      ++checked;
    }
  }
  j["pass"] = true;
  j["lifts_checked"] = checked;
  return j;
}

OJson check_constancy(const QuotientPair& pair) {
  OJson fibers = OJson::array();
  bool recomputed = true;
  for (const auto& v : projection_critical_values(pair)) {
    const auto fib = pi_fiber(pair, v);
    OJson degs = OJson::array();
    int first = 0;
    bool constant = true;
    for (const auto& x : fib) {
      const int d = local_degree_pi(pair, x);
      if (!first) first = d;
      if (d != first) constant = false;
      degs.push_back(d);
    }
    recomputed = recomputed && constant;
    OJson entry;
    entry["value"] = detail::sphere_to_json(v);
    entry["degrees"] = degs;
    fibers.push_back(entry);
  }
  const bool summary = check_fiber_degree_constancy(pair);
  if (summary != recomputed)
    throw InternalCheckFailure(
        "fiber constancy summary disagrees with its recomputation");
  OJson j;
  j["pass"] = summary;
  j["fibers"] = fibers;
  return j;
}

// The pullback argument needs transversality only when the projection is
// injective on fibers of F; elsewhere the scan outcome is informational
// and a failure certificate is expected, not an error.
OJson check_transversality_json(const QuotientPair& pair,
                                const std::vector<SpherePoint>& extra,
                                bool required) {
  const TransversalityReport r = check_transversality(pair, extra);
  OJson j;
  j["pass"] = required ? r.transversal : true;
  j["required"] = required;
  j["transversal"] = r.transversal;
  j["points_checked"] = r.points_checked;
  if (r.failure) {
    OJson c;
    c["x"] = detail::sphere_to_json(r.failure->x);
    c["lift"] = detail::point_to_json(r.failure->lift);
    c["y"] = detail::sphere_to_json(r.failure->y);
    j["certificate"] = c;
  } else {
    j["certificate"] = nullptr;
  }
  return j;
}

bool has_infinite_value(const OrbifoldData& data) {
  for (const auto& v : data.signature)
    if (v.inf) return true;
  return false;
}

OJson check_oracle(const QuotientPair& pair, const RamifiedPortrait& portrait,
                   const OrbifoldData& data) {
  OJson j;
  if (has_infinite_value(data)) {
    // The truncated backward walk only reaches infinite values in the
    // limit; the comparison is defined for finite signatures.
    j["pass"] = true;
    j["compared"] = false;
    return j;
  }
  const bool on_portrait = ramification_matches_oracle(portrait, data);
  const bool on_preimages = ramification_matches_oracle(pair, data);
  j["pass"] = on_portrait && on_preimages;
  j["compared"] = true;
  j["portrait_walk"] = on_portrait;
  j["preimage_walk"] = on_preimages;
  return j;
}

OJson injectivity_json(const InjectivityVerdict& verdict,
                       const std::vector<TorusPoint>& h) {
  OJson j;
  j["injective"] = verdict.injective;
  j["positive_dimensional"] = verdict.positive_dimensional;
  j["H_order"] = static_cast<int>(h.size());
  OJson hs = OJson::array();
  for (const auto& p : h) hs.push_back(detail::point_to_json(p));
  j["H"] = hs;
  OJson ws = OJson::array();
  for (const auto& w : verdict.witnesses)
    ws.push_back(detail::witness_to_json(w));
  j["witnesses"] = ws;
  return j;
}

OJson orbifold_json(const OrbifoldData& data) {
  OJson j;
  OJson nu;
  for (const auto& [label, value] : data.nu) nu[label] = detail::nu_to_json(value);
  j["nu"] = nu;
  OJson sig = OJson::array();
  for (const auto& v : data.signature) sig.push_back(detail::nu_to_json(v));
  j["signature"] = sig;
  j["chi"] = detail::rat_to_json(data.chi);
  return j;
}

// Shared body of analyze and quotient reports.
void analyze_into(OJson& j, const QuotientPair& pair, const InstanceSpec& spec,
                  const RunOptions& opt, bool& all) {
  j["instance"] = detail::instance_to_json_value(spec);
  OJson effective;
  effective["samples"] = opt.samples;
  effective["marked_depth"] = opt.marked_depth;
  effective["seed"] = opt.seed;
  j["options"] = effective;
  OJson degrees;
  degrees["f"] = int_json(pair.degree_f());
  degrees["pi"] = int_json(pair.degree_pi());
  j["degrees"] = degrees;

  const int depth = opt.marked_depth < 0 ? 0 : opt.marked_depth;
  const MarkedSets ms = marked_sets(pair, depth);
  OJson sizes = OJson::array();
  for (const auto& level : ms.levels)
    sizes.push_back(static_cast<long>(level.size()));
  j["marked_sizes"] = sizes;

  OJson post = OJson::array();
  for (const auto& p : postcritical_set(pair)) {
    OJson e;
    e["point"] = detail::sphere_to_json(p);
    e["local_degree"] = local_degree_f(pair, p);
    post.push_back(e);
  }
  j["postcritical"] = post;

  OJson crit = OJson::array();
  for (const auto& c : critical_set_f(pair)) {
    OJson e;
    e["point"] = detail::sphere_to_json(c.point);
    e["degree"] = c.degree;
    crit.push_back(e);
  }
  j["critical"] = crit;

  const RamifiedPortrait portrait = portrait_from_qote(pair);
  const OrbifoldData data = ramification(portrait);
  j["orbifold"] = orbifold_json(data);
  j["classification"] = to_string(classify(data));
  const auto tax = signature_taxonomy(data);
  j["taxonomy"] = tax ? OJson(*tax) : OJson(nullptr);

  const std::vector<TorusPoint> h = compute_H(pair);
  OJson path_agreement;
  std::optional<InjectivityVerdict> verdict;
  try {
    verdict = decide_pi_injectivity(pair);
    path_agreement["pass"] = true;
  } catch (const Error& e) {
    all = false;
    path_agreement["pass"] = false;
    path_agreement["error"] = e.what();
  }
  j["injectivity"] = verdict ? injectivity_json(*verdict, h) : OJson(nullptr);

  const auto& excluded = ms.levels[ms.levels.size() > 1 ? 1 : 0];
  const auto extra = random_sphere_points(pair, opt.samples,
                                          instance_seed(spec, opt.seed),
                                          excluded);

  OJson checks;
  checks["riemann_hurwitz"] =
      run_check(all, [&] { return check_riemann_hurwitz(pair); });
  checks["chain_rule"] = run_check(all, [&] { return check_chain_rule(pair, ms); });
  checks["fiber_degree_constancy"] =
      run_check(all, [&] { return check_constancy(pair); });
  checks["transversality"] = run_check(all, [&] {
    return check_transversality_json(pair, extra,
                                     verdict && verdict->injective);
  });
  checks["oracle_equality"] =
      run_check(all, [&] { return check_oracle(pair, portrait, data); });
  checks["path_agreement"] = path_agreement;
  j["checks"] = checks;
}

struct SweepRow {
  bool ok = true;
  bool injective = false;
  int order = 2;
  std::string signature;
  std::string reason;
};

SweepRow sweep_battery(const InstanceSpec& spec) {
  SweepRow row;
  row.order = spec.group.order;
  try {
    const QuotientPair pair = pair_from_instance(spec);
    const RamifiedPortrait portrait = portrait_from_qote(pair);
    const OrbifoldData data = ramification(portrait);
    row.signature = signature_string(data);
    if (data.chi != 0)
      throw InternalCheckFailure("Euler characteristic is " +
                                 rat_to_string(data.chi));
    if (has_infinite_value(data))
      throw InternalCheckFailure("infinite ramification value");
    if (!check_fiber_degree_constancy(pair))
      throw InternalCheckFailure("fiber degrees are not constant");
    critical_set_f(pair);  // verifies the critical-point count identity
    row.injective = decide_pi_injectivity(pair).injective;
  } catch (const Error& e) {
    row.ok = false;
    row.reason = e.what();
  }
  return row;
}

}  // namespace

RunOptions resolve_options(const AnalysisOptions& file_options) {
  RunOptions r;
  if (file_options.samples) r.samples = *file_options.samples;
  if (file_options.marked_depth) r.marked_depth = *file_options.marked_depth;
  if (file_options.seed) r.seed = *file_options.seed;
  return r;
}

std::vector<SpherePoint> random_sphere_points(
    const QuotientPair& pair, int count, unsigned long long seed,
    const std::vector<SpherePoint>& exclude) {
  // mt19937_64 with explicit modulo draws: identical across platforms,
  // unlike the distribution adaptors.
  std::mt19937_64 rng(seed);
  std::vector<SpherePoint> out;
  while (static_cast<int>(out.size()) < count) {
    const unsigned long long dx = 2 + rng() % 999;
    const unsigned long long nx = rng() % dx;
    const unsigned long long dy = 2 + rng() % 999;
    const unsigned long long ny = rng() % dy;
    const TorusPoint t =
        torus_point(Rat(Int(nx), Int(dx)), Rat(Int(ny), Int(dy)));
    const SpherePoint p = sphere_canonical(pair.group, t);
    if (std::binary_search(exclude.begin(), exclude.end(), p)) continue;
    if (std::find(out.begin(), out.end(), p) != out.end()) continue;
    out.push_back(p);
  }
  return out;
}

bool ramification_matches_oracle(const RamifiedPortrait& portrait,
                                 const OrbifoldData& data) {
  const auto oracle =
      ramification_oracle(portrait, static_cast<int>(portrait.vertices.size()));
  for (const auto& [label, value] : oracle) {
    Nu expected{1, false};
    for (const auto& [l, v] : data.nu)
      if (l == label) {
        expected = v;
        break;
      }
    if (!(value == expected)) return false;
  }
  for (const auto& [l, v] : data.nu)
    if (portrait.index_of(l) < 0) return false;
  return true;
}

bool ramification_matches_oracle(const QuotientPair& pair,
                                 const OrbifoldData& data) {
  const RamifiedPortrait portrait = portrait_from_qote(pair);
  const auto oracle =
      ramification_oracle(pair, static_cast<int>(portrait.vertices.size()));
  for (const auto& [point, value] : oracle) {
    const std::string label = sphere_label(point);
    Nu expected{1, false};
    for (const auto& [l, v] : data.nu)
      if (l == label) {
        expected = v;
        break;
      }
    if (!(value == expected)) return false;
  }
  // Every ramified vertex must be one of the walked branch values.
  for (const auto& [l, v] : data.nu) {
    bool found = false;
    for (const auto& [point, value] : oracle)
      if (sphere_label(point) == l) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

RunResult run_analyze(const InstanceSpec& spec, const RunOptions& options) {
  const QuotientPair pair = pair_from_instance(spec);
  OJson j;
  bool all = true;
  try {
    analyze_into(j, pair, spec, options, all);
  } catch (const Error& e) {
    all = false;
    j["error"] = e.what();
  }
  j["checks_passed"] = all;
  return {j.dump(2) + "\n", all};
}

RunResult run_quotient(const InstanceSpec& spec, const RunOptions& options) {
  const QuotientPair pair = pair_from_instance(spec);
  OJson j;
  bool all = true;
  try {
    analyze_into(j, pair, spec, options, all);
  } catch (const Error& e) {
    all = false;
    j["error"] = e.what();
  }
  try {
    const MarkedSets ms = marked_sets(pair, 1);
    const auto extra = random_sphere_points(
        pair, 50, instance_seed(spec, options.seed ^ kQuotientSeedMix),
        ms.levels[1]);
    const InjectivityReduction red = make_injective(pair, extra);
    OJson q;
    OJson steps = OJson::array();
    for (const auto& s : red.steps)
      steps.push_back(detail::quotient_step_to_json(s));
    q["steps"] = steps;
    q["final_pair"] = detail::pair_to_json(red.final_pair);
    q["final_degree_pi"] = int_json(red.final_pair.degree_pi());
    const bool final_injective = decide_pi_injectivity(red.final_pair).injective;
    q["final_injective"] = final_injective;
    if (!final_injective) all = false;
    j["quotient"] = q;
  } catch (const Error& e) {
    all = false;
    OJson q;
    q["error"] = e.what();
    j["quotient"] = q;
  }
  j["checks_passed"] = all;
  return {j.dump(2) + "\n", all};
}

RunResult run_portrait(const RamifiedPortrait& portrait) {
  OJson j;
  bool all = true;
  // IncompletePortrait propagates: an unusable input, not a failed check.
  const OrbifoldData data = ramification(portrait);
  j["portrait"] = detail::portrait_to_json_value(portrait);
  j["orbifold"] = orbifold_json(data);
  j["classification"] = to_string(classify(data));
  const auto tax = signature_taxonomy(data);
  j["taxonomy"] = tax ? OJson(*tax) : OJson(nullptr);
  OJson oracle;
  if (has_infinite_value(data)) {
    oracle["compared"] = false;
    oracle["pass"] = true;
  } else {
    const bool matched = ramification_matches_oracle(portrait, data);
    oracle["compared"] = true;
    oracle["pass"] = matched;
    if (!matched) all = false;
  }
  j["checks"] = OJson();
  j["checks"]["oracle_equality"] = oracle;
  j["checks_passed"] = all;
  return {j.dump(2) + "\n", all};
}

std::vector<InstanceSpec> enumerate_sweep_instances(
    const SweepOptions& options) {
  std::vector<int> orders = options.orders;
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  for (int n : orders)
    if (n != 2 && n != 3 && n != 4 && n != 6)
      throw InputError("rotation order must be one of 2, 3, 4, 6");
  if (options.entry_max < 0)
    throw InputError("entry bound must be nonnegative");

  std::vector<InstanceSpec> out;
  const int m = options.entry_max;
  for (int order : orders) {
    const RotationGroup g = RotationGroup::of_order(order);
    const auto pows = g.powers();
    for (int m00 = -m; m00 <= m; ++m00)
      for (int m01 = -m; m01 <= m; ++m01)
        for (int m10 = -m; m10 <= m; ++m10)
          for (int m11 = -m; m11 <= m; ++m11) {
            const Mat2Z a{Int(m00), Int(m01), Int(m10), Int(m11)};
            Int d = a.det();
            if (d < 0) d = -d;
            if (d < 2 || d > options.det_max) continue;
            // The matrix fixes its equivariance exponent: A R = R^j A has
            // at most one solution j since A is invertible over Q.
            int j = 0;
            for (int e = 1; e < order; ++e)
              if (a * g.generator == pows[e] * a) {
                j = e;
                break;
              }
            if (j == 0) continue;
            // Admissible translation parts: solutions of (I - R^j) b in Z^2,
            // a finite set since R^j has no eigenvalue 1.
            const CosetFamily bs = solve_congruence(
                MatZ::from(Mat2Z::identity() - pows[j]), {Rat(0), Rat(0)});
            for (const auto& comp : bs.components) {
              const AffineEndo f =
                  AffineEndo::make(a, Vec2Q{comp.offset[0], comp.offset[1]});
              for (int which = 0; which < 2; ++which) {
                if (which == 0 && !options.precompose_identity) continue;
                if (which == 1 && !options.precompose_f) continue;
                const AffineEndo q =
                    which == 0 ? AffineEndo::identity() : f;
                InstanceSpec spec;
                spec.group = g;
                spec.f = f;
                spec.q = q;
                try {
                  pair_from_instance(spec);
                } catch (const InputError&) {
                  continue;  // incompatible combination; not an error
                }
                out.push_back(spec);
              }
            }
          }
  }
  return out;
}

SweepOutcome run_sweep(const SweepOptions& options) {
  const auto instances = enumerate_sweep_instances(options);
  std::vector<SweepRow> rows(instances.size());

  const int jobs = options.jobs > 1 ? options.jobs : 1;
  if (jobs == 1) {
    for (std::size_t i = 0; i < instances.size(); ++i)
      rows[i] = sweep_battery(instances[i]);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= instances.size()) return;
          rows[i] = sweep_battery(instances[i]);
        }
      });
    for (auto& t : pool) t.join();
  }

  SweepOutcome outcome;
  outcome.instances = static_cast<long>(instances.size());
  std::map<int, long> per_order, per_injective, per_failed;
  std::map<std::pair<int, std::string>, long> per_signature;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& row = rows[i];
    ++per_order[row.order];
    if (!row.ok) {
      ++per_failed[row.order];
      ++outcome.failures;
      outcome.failure_lines.push_back(
          detail::instance_to_json_value(instances[i]).dump() + "  -- " +
          row.reason);
      continue;
    }
    if (row.injective) ++per_injective[row.order];
    ++per_signature[{row.order, row.signature}];
  }

  std::ostringstream t;
  t << "order  instances  injective  non-injective  failures\n";
  for (const auto& [order, count] : per_order) {
    const long inj = per_injective.count(order) ? per_injective[order] : 0;
    const long bad = per_failed.count(order) ? per_failed[order] : 0;
    t << std::setw(5) << order << "  " << std::setw(9) << count << "  "
      << std::setw(9) << inj << "  " << std::setw(13) << (count - inj - bad)
      << "  " << std::setw(8) << bad << "\n";
  }
  t << "signatures:\n";
  for (const auto& [key, count] : per_signature)
    t << "  order " << key.first << "  " << key.second << "  x" << count
      << "\n";
  t << "total " << outcome.instances << " instances, " << outcome.failures
    << " failures\n";
  outcome.table = t.str();
  return outcome;
}

namespace {

// Pixel formatting in exact milli-units: coordinates land on the 440x440
// canvas via x -> 20 + 400 x, y -> 420 - 400 y, rounded to 1/1000 px so the
// output bytes depend only on the instance and seed.
Int round_milli(const Rat& v) {
  const Int n = rat_num(v);
  const Int d = rat_den(v);
  return floor_div(2 * n + d, 2 * d);
}

Int px_milli(const Rat& x) { return round_milli(Rat(20000) + Rat(400000) * x); }
Int py_milli(const Rat& y) { return round_milli(Rat(420000) - Rat(400000) * y); }

std::string milli_str(const Int& milli) {
  const long long v = to_int64(milli);
  const long long a = v >= 0 ? v : -v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%lld.%03lld", v < 0 ? "-" : "", a / 1000,
                a % 1000);
  return buf;
}

std::string at_xy(const char* xa, const char* ya, const TorusPoint& p,
                  const Int& dx = 0, const Int& dy = 0) {
  const Int x = px_milli(p.x) + dx;
  const Int y = py_milli(p.y) + dy;
  std::string s = " ";
  s += xa;
  s += "=\"" + milli_str(x) + "\" ";
  s += ya;
  s += "=\"" + milli_str(y) + "\"";
  return s;
}

}  // namespace

std::string emit_figure(const InstanceSpec& spec, const RunOptions& options) {
  const QuotientPair pair = pair_from_instance(spec);
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 440 440\""
       " width=\"440\" height=\"440\">\n";
  s << "<rect x=\"20\" y=\"20\" width=\"400\" height=\"400\" fill=\"#fff\""
       " stroke=\"#445\" stroke-width=\"1\"/>\n";
  s << "<text x=\"20\" y=\"13\" font-family=\"monospace\" font-size=\"10\""
       " fill=\"#000\">rotation order " << pair.group.order << ", deg f = "
    << int_str(pair.degree_f()) << ", deg pi = " << int_str(pair.degree_pi())
    << "</text>\n";

  // Branch points of the projection, as torus lifts: hollow squares.
  for (const auto& c : projection_critical_lifts(pair))
    s << "<rect" << at_xy("x", "y", c.point, Int(-5000), Int(-5000))
      << " width=\"10\" height=\"10\" fill=\"none\" stroke=\"#0a7d6e\""
         " stroke-width=\"1.5\"/>\n";

  // Critical points of the sphere map (canonical representatives): circles.
  for (const auto& c : critical_set_f(pair))
    s << "<circle" << at_xy("cx", "cy", c.point.rep)
      << " r=\"7\" fill=\"none\" stroke=\"#b34700\" stroke-width=\"1.5\"/>\n";

  // Postcritical representatives: filled dots.
  for (const auto& p : postcritical_set(pair))
    s << "<circle" << at_xy("cx", "cy", p.rep)
      << " r=\"3.5\" fill=\"#1d3f8f\"/>\n";

  // One sample fiber of the projection, joined by dashed arcs.
  const MarkedSets ms = marked_sets(pair, 1);
  const auto sample = random_sphere_points(
      pair, 1, instance_seed(spec, options.seed ^ kFigureSeedMix),
      ms.levels[1]);
  const auto fib = pi_fiber(pair, sample.front());
  for (std::size_t i = 0; i + 1 < fib.size(); ++i) {
    const Int x1 = px_milli(fib[i].x), y1 = py_milli(fib[i].y);
    const Int x2 = px_milli(fib[i + 1].x), y2 = py_milli(fib[i + 1].y);
    const Int cx = floor_div(x1 + x2, Int(2));
    const Int cy = floor_div(y1 + y2, Int(2)) - 15000;
    s << "<path d=\"M " << milli_str(x1) << " " << milli_str(y1) << " Q "
      << milli_str(cx) << " " << milli_str(cy) << " " << milli_str(x2) << " "
      << milli_str(y2) << "\" fill=\"none\" stroke=\"#999\""
         " stroke-dasharray=\"3,2\"/>\n";
  }
  for (const auto& x : fib)
    s << "<circle" << at_xy("cx", "cy", x) << " r=\"2.5\" fill=\"#666\"/>\n";

  // A witness pair identified by F in one projection fiber, when the
  // projection is not injective on fibers of F.
  const InjectivityVerdict verdict = decide_pi_injectivity(pair);
  if (!verdict.injective && !verdict.witnesses.empty()) {
    const auto& w = verdict.witnesses.front();
    s << "<line" << at_xy("x1", "y1", w.u) << at_xy("x2", "y2", w.v)
      << " stroke=\"#c11\" stroke-width=\"1.5\" stroke-dasharray=\"5,3\"/>\n";
    for (const TorusPoint* p : {&w.u, &w.v}) {
      s << "<line" << at_xy("x1", "y1", *p, Int(-4000), Int(-4000))
        << at_xy("x2", "y2", *p, Int(4000), Int(4000))
        << " stroke=\"#c11\" stroke-width=\"1.5\"/>\n";
      s << "<line" << at_xy("x1", "y1", *p, Int(-4000), Int(4000))
        << at_xy("x2", "y2", *p, Int(4000), Int(-4000))
        << " stroke=\"#c11\" stroke-width=\"1.5\"/>\n";
    }
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace orbifoldkit
