#pragma once

#include <random>
#include <vector>

#include "forge/metric.hpp"

namespace forge {

/**
 * Seeded instance generators backing the property suites. All randomness
 * flows through a caller-owned mt19937_64, so every suite run is replayable
 * from its seed.
 */

// All positive multiples of 1/q up to max_num/q, ascending. Pools of this
// shape are interval-dense: any nonempty admissible interval whose endpoints
// are multiples of 1/q contains a pool value.
std::vector<Rat> grid_pool(int q, int max_num);

// Random n-point space with ids p0..p{n-1} and distances drawn from `pool`
// (sorted ascending, positive). Points are adjoined one at a time; each new
// distance is sampled uniformly from the pool values inside the admissible
// triangle interval, so the result always passes validate_metric. Throws
// DomainError when a step finds no pool value in the interval (sparse pool).
FinMetric random_space(std::mt19937_64& rng, int n, const std::vector<Rat>& pool);

// k distinct indices from {0, ..., n-1}, sorted ascending.
std::vector<int> random_subset(std::mt19937_64& rng, int n, int k);

// Admissible Katetov function over m's anchor subset with values from `pool`,
// sampled by the same interval method. Throws when some step has no
// admissible pool value.
KatetovFn random_katetov(std::mt19937_64& rng, const FinMetric& m,
                         const std::vector<int>& anchor, const std::vector<Rat>& pool);

}  // namespace forge
