#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace forge {

/**
 * Seeded property suites, one per library module. Each suite reruns a fixed
 * list of randomized invariant checks and prints one "ok <property>" or
 * "FAIL <property>" line per check. Output is deterministic for a fixed
 * seed; a throwing property counts as a failure.
 */

// Accepted suite names, in display order.
std::vector<std::string> suite_names();

// Runs one suite; true iff every property passed. Throws
// DomainError("bad-suite") for an unknown name.
bool run_suite(const std::string& name, std::ostream& os, std::uint64_t seed);

}  // namespace forge
