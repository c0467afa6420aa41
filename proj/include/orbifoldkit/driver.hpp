#pragma once
#include <string>
#include <vector>

#include "orbifoldkit/injectivity.hpp"
#include "orbifoldkit/orbifold.hpp"
#include "orbifoldkit/serialization.hpp"

namespace orbifoldkit {

// Effective knobs for one run, after merging file flags, command-line
// flags, and the environment seed override.
struct RunOptions {
  int samples = 100;
  int marked_depth = 2;
  unsigned long long seed = 20260819ULL;
};

RunOptions resolve_options(const AnalysisOptions& file_options);

struct RunResult {
  std::string report;         // JSON text, newline terminated
  bool checks_passed = true;  // false => exit code 3
};

// Full single-instance analysis: degrees, critical data, orbifold data,
// injectivity, and the exact self-checks, assembled into one report.
RunResult run_analyze(const InstanceSpec& spec, const RunOptions& options);

// Analysis plus the quotient reduction trace with its degree ledger.
RunResult run_quotient(const InstanceSpec& spec, const RunOptions& options);

// Orbifold data of an abstract portrait, with the finite-case oracle
// comparison.
RunResult run_portrait(const RamifiedPortrait& portrait);

struct SweepOptions {
  std::vector<int> orders{2, 3, 4, 6};
  Int det_max = 10;
  int entry_max = 2;
  bool precompose_identity = true;
  bool precompose_f = true;
  int jobs = 1;
  unsigned long long seed = 20260819ULL;
};

struct SweepOutcome {
  long instances = 0;
  long failures = 0;
  std::string table;  // human-readable summary
  std::vector<std::string> failure_lines;
};

// Every instance of the enumerated family that passes validation, in
// canonical enumeration order (duplicate-free by construction).
std::vector<InstanceSpec> enumerate_sweep_instances(const SweepOptions& options);

// Per-instance exact checks (Euler characteristic zero, no infinite
// ramification, fiber degree constancy, critical-point count identity,
// decision-path agreement) over the whole family.
SweepOutcome run_sweep(const SweepOptions& options);

// Schematic SVG of the instance: the unit square with the projection's
// branch points (squares), critical-point representatives (circles),
// postcritical representatives (filled), one sample fiber joined by arcs,
// and a non-injectivity witness pair when one exists.
std::string emit_figure(const InstanceSpec& spec, const RunOptions& options);

// Deterministic rational sphere samples with coordinate denominators
// <= 1000, skipping the given sorted excluded points.
std::vector<SpherePoint> random_sphere_points(
    const QuotientPair& pair, int count, unsigned long long seed,
    const std::vector<SpherePoint>& exclude);

// Exact agreement between the fixed-point ramification and the truncated
// backward-composition oracle, compared as maps with default value 1.
bool ramification_matches_oracle(const RamifiedPortrait& portrait,
                                 const OrbifoldData& data);
bool ramification_matches_oracle(const QuotientPair& pair,
                                 const OrbifoldData& data);

}  // namespace orbifoldkit
