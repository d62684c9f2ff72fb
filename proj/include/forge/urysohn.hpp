#pragma once

#include <string>
#include <vector>

#include "forge/metric.hpp"

namespace forge {

/**
 * A finite piece of the bounded Urysohn space over {1..n}: every subset of
 * size <= k and every admissible Katetov function over it with values in the
 * distance set is realized by some point outside the subset. The invariant is
 * what check_saturation verifies; values of this type are produced by
 * saturate and consumed by extend_partial_isometry.
 */
struct SaturationLevel {
    int k = 1;
    FinMetric space;
    DistanceSet dset;
};

/** Finite partial isometry: dom[i] -> img[i], distance-preserving, injective. */
struct PartialIsometry {
    std::vector<int> dom;
    std::vector<int> img;
};

// Adjoins one point y with dist(y, a) = r(a) on the anchor and the n-capped
// shortest path through the anchor elsewhere: min(n, min_a(r(a) + d(a, z))).
// Requires an integer-range dset containing all distances of m and all values
// of r, and katetov_check(m, r). The new point id is minted from desired_id.
FinMetric add_realizing_point(const FinMetric& m, const KatetovFn& r, const DistanceSet& dset,
                              const std::string& desired_id = "y");

// All unrealized types (A, r) with |A| <= k: anchor subsets in lexicographic
// index order, value tuples in ascending order; empty result means the space
// is k-saturated. Requires an integer-range dset containing every distance.
std::vector<KatetovFn> check_saturation(const FinMetric& s, const DistanceSet& dset, int k);

// Builds a k-saturated space over dset = {1..n} with at most size_cap points.
// Candidates are tried in a fixed order, cheapest construction first: a
// (k+1)-clique for n = 1, the capped cycle on 2n+1 points for k = 1,
// Paley-graph spaces for n = 2, Hamming spaces H(n, q) for growing q, then
// greedy sweeps that realize each missing type with a fresh point whose
// remaining distances are drawn (fixed seed) from the admissible integer
// intervals. Every candidate is audited with check_saturation before being
// returned. Identical inputs give identical output. Throws BudgetExhausted
// with the count of still-missing types when size_cap is reached.
SaturationLevel saturate(const DistanceSet& dset, int k, int size_cap);

// Validates that p is a partial isometry of s.space and extends it one target
// at a time: target t gets the least point (in point order) realizing the
// transported distances d(t, dom) over the image. Step i anchors
// |dom| + i points, so |dom| + |new targets| - 1 <= s.k is required; the
// realizing point never collides with a used image (its transported
// distances are positive), so each step is covered by saturation.
PartialIsometry extend_partial_isometry(const SaturationLevel& s, const PartialIsometry& p,
                                        const std::vector<int>& targets);

}  // namespace forge
