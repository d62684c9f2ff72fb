#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/group.hpp"
#include "forge/metric.hpp"

namespace forge {

/**
 * Isometric action of a group on a finite metric space, given by one point
 * bijection per generator. Generator order follows the group: the explicit
 * generating set for finite tables, the standard basis for free variants.
 * Plain data; validate_action reports invariant violations.
 */
struct FiniteAction {
    GroupSpec group;
    FinMetric space;
    std::vector<std::vector<int>> gen_maps;  // per generator, point index -> point index
};

struct ActionViolation {
    enum class Kind { shape, bijection, isometry, relations, commutation };
    Kind kind;
    std::vector<std::string> witness;  // point ids / element names, in check order
    std::string message;
};

/**
 * Pinned generator images on a finite anchor set: an action satisfies the
 * constraint iff every generator sends each anchor point to its required
 * image. required_images is per generator, parallel to anchor_points.
 */
struct AgreementConstraint {
    std::vector<int> anchor_points;
    std::vector<std::vector<int>> required_images;
};

/** Amalgamated action with index maps from each input action's space. */
struct ActionGlueResult {
    FiniteAction action;
    std::vector<int> x_image;
    std::vector<int> y_image;
};

/**
 * Subgroup data for globalize_subgroup_action. Finite tables list the
 * subgroup as ambient element indices; Z uses the index m >= 1 for the
 * subgroup mZ (m = 0, the trivial subgroup of infinite index, is rejected).
 */
struct SubgroupSpec {
    std::vector<int> elements;
    int z_index = 0;
};

/** Globalized action with the spine embedding and the transversal size. */
struct GlobalizeResult {
    FiniteAction action;
    std::vector<int> y_image;  // Y point index -> quotient index, y -> [y, 1]
    int window = 0;
};

/** Cyclic stack with the shift isometry and the level-0 embedding. */
struct RootResult {
    FinMetric space;
    std::vector<int> shift;    // point index -> point index, the isometry h
    std::vector<int> b_image;  // input point index -> level-0 index
};

// Number of gen_maps an action of this group must carry.
int generator_count(const GroupSpec& g);

// Checks shape (gen_map count and lengths), bijectivity, exact distance
// preservation, and the group relations: finite tables must be respected by
// the induced element maps, free abelian generators must pairwise commute,
// free groups carry no relation. First violation in generator / point order.
std::optional<ActionViolation> validate_action(const FiniteAction& act);

bool satisfies_constraint(const FiniteAction& act, const AgreementConstraint& c);

// Point map of every table element, indexed like the table, obtained by
// composing generator maps along products. Requires a finite-table group and
// a valid action; throws DomainError("bad-action") on relation conflicts.
std::vector<std::vector<int>> element_maps(const FiniteAction& act);

// Point map of an arbitrary word in the action's group. Throws
// DomainError("bad-word") when the word's shape does not match the group.
std::vector<int> word_map(const FiniteAction& act, const Word& w);

// One-step absorption of a one-point extension into an invariant superspace
// C = A + Gamma for finite Gamma. ext is a metric on A plus one extra point
// (the star), agreeing with act's metric on A. In C the star becomes the
// identity element, d(a, h) = ext(h^-1 a, star), and distinct group points
// sit at d(g, h) = min over a of d(a, g) + d(a, h). Gamma acts as before on
// A and by left translation on the group block. Group-block ids are element
// names, minted fresh on collision. Rejects an empty A for |Gamma| > 1;
// the group block alone has no anchor to metrize against.
FiniteAction uspenskii_extend(const FiniteAction& act, const FinMetric& ext);

// Iterated uspenskii_extend: each extension must anchor every point of the
// space built so far (indices 0..m-1 in order), and grows the space by
// |Gamma|. Inadmissible steps report their index.
FiniteAction invariant_closure(const FiniteAction& act, const std::vector<KatetovFn>& new_points);

// Block action on disjoint_sum of the two spaces; requires equal groups.
FiniteAction action_sum(const FiniteAction& pi, const FiniteAction& sigma);

// Free amalgam of tau's space X and pi's space Y over sigma's space B, which
// both contain B by point id, keep it invariant, and restrict to sigma on
// it. The glued action extends tau and pi through the returned embeddings,
// which are the identity on B.
ActionGlueResult amalgamate_over_invariant(const FiniteAction& sigma, const FiniteAction& tau,
                                           const FiniteAction& pi);

// Extends pi (all of Gamma on X) through sigma (a subgroup Lambda on Y, X
// contained in Y, sigma extending pi|Lambda) to an action of Gamma on a
// quotient of Y x T, T a transversal of Gamma / Lambda: the whole group for
// finite tables, {0..m-1} with wrap-around for Z over mZ. Pair distances
// follow the coherence case split: d(g2^-1 g1 y1, y2) when the quotient
// element lies in Lambda or both points lie in X, else the infimum over X of
// d(y1, g1^-1 x) + d(g2^-1 x, y2), with empty-X infima replaced by cap.
// Zero classes are merged, represented by their least (point, element) pair;
// classes through the identity keep their Y id. Gamma acts by left
// translation on the second coordinate. y_image records [y, 1].
GlobalizeResult globalize_subgroup_action(const FiniteAction& pi, const FiniteAction& sigma,
                                          const SubgroupSpec& lambda, const Rat& cap);

// m stacked copies of act's space B, cyclically shifted with act's single
// generator g applied on wrap-around, so the shift h satisfies h^m = g on
// level 0. Levels keep B's metric; cross-level distances are the constant
// min(n, max(diam B, 1)). Level 0 keeps B's ids, level i mints "id@i".
// Requires an action of Z (free abelian rank 1) and m >= 1; n is the
// distance-set bound the constant must respect.
RootResult nth_root_extension(const FiniteAction& act, int m, int n);

// Equivariant isometric bijection from a's space to b's space, or nullopt
// when none exists. Complete backtracking over candidate images filtered by
// distance multisets and per-generator cycle lengths, with forced
// propagation along generator maps; assigns points in index order trying
// images ascending, so the first (lexicographically least) witness is
// returned. Requires equal groups; unequal point counts yield nullopt.
std::optional<std::vector<int>> conjugacy_search(const FiniteAction& a, const FiniteAction& b);

}  // namespace forge
