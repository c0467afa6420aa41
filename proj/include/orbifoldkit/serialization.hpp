#pragma once
#include <optional>
#include <string>

#include "orbifoldkit/orbifold.hpp"
#include "orbifoldkit/quotient_pair.hpp"

namespace orbifoldkit {

// Optional analysis knobs carried by an instance file.  Unset fields fall
// back to built-in defaults (or to command-line flags, which win).
struct AnalysisOptions {
  std::optional<int> samples;        // random transversality samples
  std::optional<int> marked_depth;   // backward-level depth for marked sets
  std::optional<unsigned long long> seed;
};

// A parsed instance file: group, endomorphism F, optional precomposition
// factor Q (identity when absent), and analysis flags.
struct InstanceSpec {
  RotationGroup group;
  AffineEndo f = AffineEndo::identity();
  AffineEndo q = AffineEndo::identity();
  AnalysisOptions options;
};

// Strict parsers: unknown keys, missing fields, or malformed values raise
// InputError with the offending key in the message.
InstanceSpec instance_from_json(const std::string& text);
RamifiedPortrait portrait_from_json(const std::string& text);

// Canonical emission (stable key order, rationals as "p/q" strings); the
// emitted instance form doubles as the instance's identity for dedup and
// derived seeding.
std::string instance_to_json(const InstanceSpec& spec);
std::string portrait_to_json(const RamifiedPortrait& portrait);

// Build the validated pair from a parsed instance.
QuotientPair pair_from_instance(const InstanceSpec& spec);

}  // namespace orbifoldkit
