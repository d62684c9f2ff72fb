#pragma once

#include <variant>
#include <vector>

#include "forge/group.hpp"

namespace forge {

/**
 * Finitely generated subgroup of Z^rank, stored as an integer row basis
 * together with its row-style Hermite normal form: rows in echelon order
 * with strictly increasing pivot columns, positive pivots, and entries
 * above each pivot reduced into [0, pivot). The HNF rows span the same
 * subgroup as the basis rows and are unique per subgroup, so two lattices
 * are equal iff their hnf fields are equal. Entries are long long and the
 * reduction is exact; inputs are expected desk-scale.
 */
struct Lattice {
    int rank = 0;
    std::vector<std::vector<long long>> basis;
    std::vector<std::vector<long long>> hnf;
};

// Validates rank >= 1 and row dimensions, then computes the HNF cache.
// Zero rows and an empty basis (the trivial subgroup) are allowed.
// Throws DomainError("bad-rank" / "dim-mismatch").
Lattice make_lattice(int rank, std::vector<std::vector<long long>> basis);

// Canonical basis of the subgroup: the nonzero HNF rows.
std::vector<std::vector<long long>> lattice_hnf(const Lattice& l);

// Exact membership of v in the row span, by back-substitution against the
// HNF: each pivot column forces a quotient, the remainder must vanish.
// Throws DomainError("dim-mismatch") when v has the wrong dimension.
bool lattice_member(const Lattice& l, const std::vector<long long>& v);

// Least modulus m >= 2 with v mod m outside the image of l mod m, found by
// testing m = 2, 3, ... against the stacked lattice [basis; m*I]. Such an m
// exists whenever v is not in l. Throws DomainError("dim-mismatch") and
// DomainError("in-subgroup") when lattice_member(l, v) is true.
long long lattice_separating_quotient(const Lattice& l, const std::vector<long long>& v);

/**
 * Folded core graph of a finitely generated subgroup of Free(rank).
 * out[v][g] is the head of the g-labeled edge leaving v and in[v][g] the
 * tail of the g-labeled edge entering v, -1 when absent; the single-slot
 * representation is exactly the folded condition. The graph is connected,
 * every vertex other than base has degree >= 2, and vertices are numbered
 * in breadth-first discovery order from base (direction order: generator 0
 * forward, generator 0 backward, generator 1 forward, ...), which makes the
 * representation canonical: two subgroups are equal iff their graphs have
 * identical fields.
 */
struct StallingsGraph {
    int rank = 0;
    std::vector<std::vector<int>> out;
    std::vector<std::vector<int>> in;
    int base = 0;
};

// Folded core of the wedge of one base loop per generator word: build the
// loops, identify targets of equally labeled edges until folded, trim
// non-base vertices of degree <= 1, canonicalize the numbering. Words must
// be reduced letter words over Free(rank); empty words are dropped.
// Throws DomainError("bad-rank" / "bad-word").
StallingsGraph stallings_graph(int rank, const std::vector<Word>& gens);

// True iff w reads a base-to-base path in g; the empty word is a member.
// Folding makes the walk deterministic, so this decides membership in the
// subgroup the graph was built from. Throws DomainError("bad-word") for
// unreduced words and DomainError("group-mismatch") when w uses letters
// outside Free(g.rank).
bool subgroup_member(const StallingsGraph& g, const Word& w);

// Free generators of the subgroup carried by g, one per edge outside a
// breadth-first spanning tree: tree path to the tail, the edge letter, the
// reversed tree path from the head. Listed in tail-then-letter order.
std::vector<Word> graph_generators(const StallingsGraph& g);

/**
 * NFA deciding membership in a product H1 H2 ... Hk of subgroups of
 * Free(rank). States are the graph vertices laid end to end; step[s][d]
 * lists the targets of direction d from state s, where direction 2g reads
 * generator g and direction 2g+1 its inverse. eps is the reflexive and
 * transitive epsilon-reachability matrix: seeded with the links from each
 * graph's base to the next graph's base and saturated under cancellation
 * (an epsilon edge p -> q is added whenever some path p -> q spells
 * x eps* x^-1), after which a reduced word is accepted iff it lies in the
 * product.
 */
struct ProductAutomaton {
    int rank = 0;
    int start = 0;
    int accept = 0;
    std::vector<std::vector<std::vector<int>>> step;
    std::vector<std::vector<char>> eps;
    bool saturated = false;
};

// Concatenates the graphs with epsilon links and runs cancellation
// saturation to its fixpoint with a pair worklist; at most states^2 pairs
// can ever be added, so this terminates without a budget. An empty list
// yields the one-state automaton of the trivial subgroup.
// Throws DomainError("group-mismatch") when the graphs disagree on rank.
ProductAutomaton product_automaton(const std::vector<StallingsGraph>& hs);

// Epsilon-closure NFA run of a reduced word; true iff an accepting state is
// reached. Throws DomainError("bad-word" / "group-mismatch").
bool automaton_accepts(const ProductAutomaton& pa, const Word& w);

// True iff w is a product u1 u2 ... uk with ui in the subgroup of hs[i];
// builds the saturated automaton and runs it on w.
bool benois_product_member(const std::vector<StallingsGraph>& hs, const Word& w);

/** Homomorphism Free(rank) -> S_degree, one image permutation per generator. */
struct FiniteQuotient {
    int degree = 0;
    std::vector<std::vector<int>> gen_images;
};

/** Separating-quotient search ran out of degrees; tuples_tried counts the
 * candidate homomorphisms evaluated. */
struct SeparationExhausted {
    int max_degree = 0;
    long long tuples_tried = 0;
};

using SeparationResult = std::variant<FiniteQuotient, SeparationExhausted>;

// Searches for a finite quotient separating w from the product: degrees
// d = 1..max_degree ascending, generator image tuples in lexicographic
// order (permutations of {0..d-1} sorted, leftmost generator outermost),
// first verified witness wins. A candidate phi is verified by finite
// enumeration in S_d: the image of each subgroup is closed from the images
// of its graph_generators, the image sets are multiplied pointwise, and
// phi(w) must lie outside the product set. Exhaustion is returned as a
// value. Throws DomainError("bad-budget") for max_degree < 1,
// DomainError("in-product") when w is already in the product, plus the
// word and rank errors of benois_product_member.
SeparationResult free_separating_quotient(const std::vector<StallingsGraph>& hs, const Word& w,
                                          int max_degree);

}  // namespace forge
