#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "forge/action.hpp"
#include "forge/group.hpp"
#include "forge/metric.hpp"
#include "forge/separability.hpp"
#include "forge/urysohn.hpp"

namespace forge {

/**
 * Input does not match a schema: wrong JSON type, missing or extra key, bad
 * array length. Distinct from DomainError so the CLI can report malformed
 * input files separately from domain-level rejections.
 */
class JsonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Rationals serialize as the exact pair [num, den], den >= 1, always both
// entries; loading normalizes through Rat and rejects den = 0.
nlohmann::json rat_to_json(const Rat& r);
Rat rat_from_json(const nlohmann::json& j);

// {"points": [ids], "dist": [strict upper triangle, row-major]}. The square
// symmetric matrix is rebuilt on load with a zero diagonal; metric axioms
// are not checked here, validate_metric stays a separate step.
nlohmann::json metric_to_json(const FinMetric& m);
FinMetric metric_from_json(const nlohmann::json& j);

// Integer ranges serialize as {"bound": n}, general value sets as
// {"values": [rats]}; loading goes through the DistanceSet constructors.
nlohmann::json dset_to_json(const DistanceSet& d);
DistanceSet dset_from_json(const nlohmann::json& j);

// {"variant": "finite-table", "elements", "table" (nested rows),
// "generators"} or {"variant": "free-abelian" / "free", "rank"}. Loading
// reruns the make_* validations.
nlohmann::json group_to_json(const GroupSpec& g);
GroupSpec group_from_json(const nlohmann::json& j);

// Display names for the group's generators, in generator order: element
// names for tables, letters a, b, ... for the free variants (g<i> past z).
std::vector<std::string> generator_names(const GroupSpec& g);

// Free-variant words use the parse_free_word syntax: "a^2b^-1", uppercase
// for inverses, "1" or "" for the identity. Free abelian words accumulate
// letter exponents. Finite-table words are the element name verbatim.
std::string word_to_string(const GroupSpec& g, const Word& w);
Word word_from_string(const GroupSpec& g, const std::string& s);

// Finite-table words serialize as the element name, free abelian as the
// exponent vector, free as the letter-syntax string.
nlohmann::json word_to_json(const GroupSpec& g, const Word& w);
Word word_from_json(const GroupSpec& g, const nlohmann::json& j);

// {"anchor": [indices], "value": [rats]}, parallel arrays.
nlohmann::json katetov_to_json(const KatetovFn& r);
KatetovFn katetov_from_json(const nlohmann::json& j);

// {"dom": [indices], "img": [indices]}, parallel arrays.
nlohmann::json iso_to_json(const PartialIsometry& p);
PartialIsometry iso_from_json(const nlohmann::json& j);

// {"anchor_points": [indices], "required_images": [[indices]]}: one image
// row per generator, -1 entries leave the anchor free.
nlohmann::json constraint_to_json(const AgreementConstraint& c);
AgreementConstraint constraint_from_json(const nlohmann::json& j);

// {"elements": [indices]} for finite-table subgroups, {"z_index": m} for mZ.
nlohmann::json subgroup_to_json(const SubgroupSpec& s);
SubgroupSpec subgroup_from_json(const nlohmann::json& j);

// {"k", "space", "dset"}.
nlohmann::json saturation_to_json(const SaturationLevel& s);
SaturationLevel saturation_from_json(const nlohmann::json& j);

// {"group", "space", "gen_maps": {generator name: [image indices]}}. The
// key set must equal the group's generator names exactly.
nlohmann::json action_to_json(const FiniteAction& a);
FiniteAction action_from_json(const nlohmann::json& j);

// {"rank", "basis"}; the HNF cache is recomputed on load.
nlohmann::json lattice_to_json(const Lattice& l);
Lattice lattice_from_json(const nlohmann::json& j);

// {"rank", "base", "out"}; the in-adjacency is rebuilt on load and a
// conflicting in-slot (an unfolded graph) is rejected.
nlohmann::json stallings_to_json(const StallingsGraph& g);
StallingsGraph stallings_from_json(const nlohmann::json& j);

// Fixed two-space-indented dump with a trailing newline; nlohmann objects
// keep keys sorted, so equal values print byte-identically.
std::string canonical_dump(const nlohmann::json& j);

// DOT renderings: undirected distance-labeled graph for spaces, directed
// generator-labeled graph (base doubly circled) for Stallings graphs.
std::string metric_dot(const FinMetric& m);
std::string stallings_dot(const StallingsGraph& g);

}  // namespace forge
