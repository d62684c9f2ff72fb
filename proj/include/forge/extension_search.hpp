#pragma once

#include <variant>
#include <vector>

#include "forge/action.hpp"
#include "forge/metric.hpp"
#include "forge/urysohn.hpp"

namespace forge {

/**
 * Bounds for superspace searches. An empty candidate_distances defaults to
 * default_candidates of the base space; after defaulting the set must be
 * nonempty and strictly positive, and both bounds must be positive.
 */
struct SearchBudget {
    int max_points = 12;
    std::vector<Rat> candidate_distances;
    long long max_nodes = 10'000'000;
};

/** Budget report for a search that ended without a witness in range. */
struct Exhausted {
    int max_points = 0;
    long long nodes_explored = 0;
    bool node_budget_hit = false;  // false: the whole size range was excluded
};

/** Superspace B (base points first) with one full isometry per input partial. */
struct SoleckiWitness {
    FinMetric space;
    std::vector<std::vector<int>> fulls;
};

using SoleckiResult = std::variant<SoleckiWitness, Exhausted>;
using ApproxResult = std::variant<FiniteAction, Exhausted>;

// Distance universe for searches over `a`: the positive expanded values
// Ex(a) together with all pairwise sums of them up to twice the diameter.
// Sorted ascending, may be empty for spaces with fewer than two points.
std::vector<Rat> default_candidates(const FinMetric& a);

/**
 * Searches for a superspace B of `a` (base points keep their indices, new
 * points get minted ids "u0", "u1", ...) carrying, for each input partial
 * isometry, a full isometry of B that agrees with it on its domain and sends
 * every base point outside the domain to a new point. Enumeration is
 * deterministic: sizes ascending, image choices in point order with fresh
 * points introduced in first-use order, free distance orbits filled
 * lexicographically from the candidate set; the first witness wins, so
 * Exhausted{.., false} proves no such B with at most max_points points and
 * candidate distances exists. Every success is re-verified independently of
 * the search. Throws DomainError on an invalid space ("bad-space"), partial
 * ("bad-isometry"), or budget ("bad-budget").
 */
SoleckiResult solecki_extend(const FinMetric& a, const std::vector<PartialIsometry>& partials,
                             const SearchBudget& budget);

/**
 * Searches for a valid action of the free abelian group `g` on a superspace
 * of `a` whose generator maps take the constrained values: entry
 * required_images[t][i] pins generator t at anchor_points[i], and -1 leaves
 * it free. Base points with no pinned image under a generator map to new
 * points, so the rank-1 case reproduces solecki_extend on one partial.
 * Enumeration order, determinism, exhaustion, and re-verification are as in
 * solecki_extend. Throws DomainError for a non-free-abelian group
 * ("bad-group") or pins that are not partial isometries consistent with
 * commutation where composable ("bad-constraint").
 */
ApproxResult approximate_action(const GroupSpec& g, const FinMetric& a,
                                const AgreementConstraint& constraint, const SearchBudget& budget);

}  // namespace forge
