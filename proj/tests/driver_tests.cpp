// The analysis driver: report assembly, self-check aggregation, sweep
// enumeration, figure output, and deterministic sampling.  Reports are
// parsed back as JSON and inspected field by field.
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "orbifoldkit/driver.hpp"

using namespace orbifoldkit;
using nlohmann::json;

namespace {

Rat q(const std::string& s) { return rat_from_string(s); }

InstanceSpec doubling_spec() {
  InstanceSpec spec;
  spec.group = RotationGroup::of_order(2);
  spec.f = AffineEndo::make({2, 0, 0, 2}, {0, 0});
  return spec;
}

InstanceSpec doubling_qf_spec() {
  InstanceSpec spec = doubling_spec();
  spec.q = spec.f;
  return spec;
}

InstanceSpec doubling_qf2_spec() {
  InstanceSpec spec = doubling_spec();
  spec.q = AffineEndo::make({4, 0, 0, 4}, {0, 0});
  return spec;
}

std::size_t count_occurrences(const std::string& text,
                              const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

}  // namespace

TEST_CASE("options resolve from file values over defaults") {
  const RunOptions defaults = resolve_options(AnalysisOptions{});
  CHECK(defaults.samples == 100);
  CHECK(defaults.marked_depth == 2);
  CHECK(defaults.seed == 20260819ULL);

  AnalysisOptions file;
  file.samples = 7;
  file.seed = 42;
  const RunOptions merged = resolve_options(file);
  CHECK(merged.samples == 7);
  CHECK(merged.marked_depth == 2);
  CHECK(merged.seed == 42ULL);
}

TEST_CASE("analysis report of the doubling instance") {
  const RunResult res = run_analyze(doubling_spec(), RunOptions{});
  CHECK(res.checks_passed);
  const json j = json::parse(res.report);

  CHECK(j["instance"]["group"]["rotation_order"] == 2);
  CHECK(j["options"]["samples"] == 100);
  CHECK(j["options"]["marked_depth"] == 2);
  CHECK(j["options"]["seed"] == 20260819ULL);
  CHECK(j["degrees"]["f"] == "4");
  CHECK(j["degrees"]["pi"] == "2");
  CHECK(j["marked_sizes"] == json::array({4, 10, 34}));
  CHECK(j["postcritical"].size() == 4);
  CHECK(j["critical"].size() == 6);
  CHECK(j["orbifold"]["signature"] == json::array({2, 2, 2, 2}));
  CHECK(j["orbifold"]["chi"] == "0");
  CHECK(j["classification"] == "parabolic");
  CHECK(j["taxonomy"] == "Lattes-type (no periodic critical points)");
  CHECK(j["injectivity"]["injective"] == true);
  CHECK(j["injectivity"]["H_order"] == 1);
  CHECK(j["injectivity"]["witnesses"].empty());

  const json& checks = j["checks"];
  for (const char* name :
       {"riemann_hurwitz", "chain_rule", "fiber_degree_constancy",
        "transversality", "oracle_equality", "path_agreement"})
    CHECK(checks.at(name).at("pass") == true);
  CHECK(checks["riemann_hurwitz"]["sum_of_degree_excess"] == "6");
  CHECK(checks["riemann_hurwitz"]["expected"] == "6");
  CHECK(checks["transversality"]["required"] == true);
  CHECK(checks["transversality"]["transversal"] == true);
  // marked level 1 has 10 points; samples add 100
  CHECK(checks["transversality"]["points_checked"] == 110);
  CHECK(checks["oracle_equality"]["compared"] == true);
  CHECK(j["checks_passed"] == true);
}

TEST_CASE("analysis reports are byte-deterministic") {
  RunOptions opt;
  opt.samples = 37;
  opt.marked_depth = 1;
  opt.seed = 777;
  const RunResult a = run_analyze(doubling_qf_spec(), opt);
  const RunResult b = run_analyze(doubling_qf_spec(), opt);
  CHECK(a.report == b.report);
  CHECK(a.report.back() == '\n');

  const json j = json::parse(a.report);
  CHECK(j["options"]["samples"] == 37);
  CHECK(j["options"]["marked_depth"] == 1);
  CHECK(j["options"]["seed"] == 777);
  CHECK(j["marked_sizes"].size() == 2);
}

TEST_CASE("analysis of a non-injective instance keeps the checks green") {
  const RunResult res = run_analyze(doubling_qf_spec(), RunOptions{});
  CHECK(res.checks_passed);
  const json j = json::parse(res.report);

  CHECK(j["degrees"]["pi"] == "8");
  CHECK(j["injectivity"]["injective"] == false);
  CHECK(j["injectivity"]["positive_dimensional"] == true);
  CHECK(j["injectivity"]["H_order"] == 4);
  CHECK(j["injectivity"]["H"].size() == 4);
  REQUIRE(j["injectivity"]["witnesses"].size() == 3);
  for (const json& w : j["injectivity"]["witnesses"]) {
    CHECK(w.contains("u"));
    CHECK(w.contains("v"));
    CHECK(w.contains("y"));
  }

  // transversality legitimately fails here, so it is reported but not
  // required: the overall verdict stays green with the certificate attached
  const json& tv = j["checks"]["transversality"];
  CHECK(tv["required"] == false);
  CHECK(tv["transversal"] == false);
  CHECK(tv["pass"] == true);
  CHECK(!tv["certificate"].is_null());
  CHECK(j["checks_passed"] == true);
}

TEST_CASE("quotient reports carry the reduction ledger") {
  const RunResult res = run_quotient(doubling_qf2_spec(), RunOptions{});
  CHECK(res.checks_passed);
  const json j = json::parse(res.report);

  CHECK(j["degrees"]["pi"] == "32");
  const json& steps = j["quotient"]["steps"];
  REQUIRE(steps.size() == 2);
  CHECK(steps[0]["H_order"] == 4);
  CHECK(steps[0]["deg_pi_before"] == 32);
  CHECK(steps[0]["deg_pi_after"] == 8);
  CHECK(steps[1]["deg_pi_before"] == 8);
  CHECK(steps[1]["deg_pi_after"] == 2);
  CHECK(j["quotient"]["final_degree_pi"] == "2");
  CHECK(j["quotient"]["final_injective"] == true);
  CHECK(j["quotient"]["final_pair"]["precompose"]["A"] ==
        json::array({json::array({1, 0}), json::array({0, 1})}));

  // an injective instance has an empty reduction
  const RunResult none = run_quotient(doubling_spec(), RunOptions{});
  const json jn = json::parse(none.report);
  CHECK(jn["quotient"]["steps"].empty());
  CHECK(jn["quotient"]["final_degree_pi"] == "2");
}

TEST_CASE("portrait reports and the finite-case oracle comparison") {
  RamifiedPortrait tear;
  tear.degree = 4;
  tear.vertices = {"c1", "c2", "v"};
  tear.sigma = {2, 2, 2};
  tear.delta = {2, 1, 1};
  tear.complete = {false, false, true};
  const RunResult res = run_portrait(tear);
  CHECK(res.checks_passed);
  const json j = json::parse(res.report);
  CHECK(j["classification"] == "not-realizable");
  CHECK(j["orbifold"]["signature"] == json::array({2}));
  CHECK(j["orbifold"]["chi"] == "3/2");
  CHECK(j["checks"]["oracle_equality"]["compared"] == true);
  CHECK(j["checks"]["oracle_equality"]["pass"] == true);

  // infinite signatures skip the truncated oracle
  RamifiedPortrait sq;
  sq.degree = 2;
  sq.vertices = {"zero", "inf"};
  sq.sigma = {0, 1};
  sq.delta = {2, 2};
  sq.complete = {true, true};
  const RunResult res2 = run_portrait(sq);
  CHECK(res2.checks_passed);
  const json j2 = json::parse(res2.report);
  CHECK(j2["orbifold"]["signature"] == json::array({"inf", "inf"}));
  CHECK(j2["classification"] == "parabolic");
  CHECK(j2["checks"]["oracle_equality"]["compared"] == false);
}

TEST_CASE("deterministic rational samples respect the exclusion list") {
  const QuotientPair pair = pair_from_instance(doubling_spec());
  const std::vector<SpherePoint> marked = marked_sets(pair, 1).levels[1];

  const auto a = random_sphere_points(pair, 50, 123, marked);
  const auto b = random_sphere_points(pair, 50, 123, marked);
  CHECK(a == b);
  CHECK(a.size() == 50);

  const auto c = random_sphere_points(pair, 50, 124, marked);
  CHECK(a != c);

  for (const auto& p : a) {
    CHECK(!std::binary_search(marked.begin(), marked.end(), p));
    CHECK(rat_den(p.rep.x) <= 1000);
    CHECK(rat_den(p.rep.y) <= 1000);
  }
}

TEST_CASE("ramification agrees with the oracle on the doubling instance") {
  const QuotientPair pair = pair_from_instance(doubling_spec());
  const RamifiedPortrait portrait = portrait_from_qote(pair);
  const OrbifoldData data = ramification(portrait);
  CHECK(ramification_matches_oracle(portrait, data));
  CHECK(ramification_matches_oracle(pair, data));
}

TEST_CASE("sweep enumeration is canonical and duplicate-free") {
  SweepOptions tiny;
  tiny.orders = {2};
  tiny.det_max = 2;
  tiny.entry_max = 1;
  const std::vector<InstanceSpec> small = enumerate_sweep_instances(tiny);
  CHECK(small.size() == 64);

  std::set<std::string> keys;
  for (const auto& spec : small) {
    keys.insert(instance_to_json(spec));
    const QuotientPair pair = pair_from_instance(spec);
    CHECK(pair.degree_f() == 2);
    CHECK(pair.group.order == 2);
  }
  CHECK(keys.size() == small.size());

  // full family: frozen size and first element
  const std::vector<InstanceSpec> all =
      enumerate_sweep_instances(SweepOptions{});
  CHECK(all.size() == 3488);
  CHECK(all.front().group.order == 2);
  CHECK(all.front().f.a == Mat2Z{-2, -2, -2, -1});
  CHECK(all.front().f.b == Vec2Q{0, 0});
  CHECK(all.front().q == AffineEndo::identity());

  std::set<std::string> all_keys;
  for (const auto& spec : all) all_keys.insert(instance_to_json(spec));
  CHECK(all_keys.size() == all.size());
}

TEST_CASE("a small sweep passes its battery, serial and parallel") {
  SweepOptions tiny;
  tiny.orders = {2};
  tiny.det_max = 2;
  tiny.entry_max = 1;
  const SweepOutcome serial = run_sweep(tiny);
  CHECK(serial.instances == 64);
  CHECK(serial.failures == 0);
  CHECK(serial.failure_lines.empty());
  CHECK(!serial.table.empty());

  tiny.jobs = 2;
  const SweepOutcome parallel = run_sweep(tiny);
  CHECK(parallel.instances == 64);
  CHECK(parallel.failures == 0);
  CHECK(parallel.table == serial.table);
}

TEST_CASE("figures are deterministic and carry the expected elements") {
  const std::string fig = emit_figure(doubling_spec(), RunOptions{});
  CHECK(fig == emit_figure(doubling_spec(), RunOptions{}));
  CHECK(fig.rfind("<svg", 0) == 0);
  CHECK(fig.find("</svg>") != std::string::npos);

  // frame + 4 projection branch lifts
  CHECK(count_occurrences(fig, "<rect") == 5);
  // 6 critical-point circles
  CHECK(count_occurrences(fig, "r=\"7\"") == 6);
  // 4 postcritical dots
  CHECK(count_occurrences(fig, "r=\"3.5\"") == 4);
  // one sample fiber of deg pi = 2, joined by one arc
  CHECK(count_occurrences(fig, "r=\"2.5\"") == 2);
  CHECK(count_occurrences(fig, "<path") == 1);
  // injective: no witness markers
  CHECK(count_occurrences(fig, "#c11") == 0);

  const std::string fig2 = emit_figure(doubling_qf_spec(), RunOptions{});
  // frame + 16 branch lifts through the doubled projection
  CHECK(count_occurrences(fig2, "<rect") == 17);
  CHECK(count_occurrences(fig2, "r=\"7\"") == 6);
  CHECK(count_occurrences(fig2, "r=\"3.5\"") == 4);
  // fiber of size deg pi = 8
  CHECK(count_occurrences(fig2, "r=\"2.5\"") == 8);
  CHECK(count_occurrences(fig2, "<path") == 7);
  // witness pair: one connecting line and two X marks of two strokes each
  CHECK(count_occurrences(fig2, "#c11") == 5);

  // the sample fiber depends on the seed
  RunOptions other;
  other.seed = 1;
  CHECK(emit_figure(doubling_spec(), other) != fig);
}
