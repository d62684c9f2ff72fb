#pragma once

#include <string>
#include <vector>

namespace forge {

/**
 * Finite group given by its full multiplication table. identity and inverse
 * are derived during validation, not part of the input. Element order is the
 * order of `elements`; all indices below refer to it.
 */
struct FiniteTable {
    std::vector<std::string> elements;
    std::vector<int> table;  // row-major, table[i*n+j] = index of elements[i]*elements[j]
    int identity = -1;
    std::vector<int> inverse;

    int size() const { return static_cast<int>(elements.size()); }
    int mul(int i, int j) const { return table[static_cast<size_t>(i) * elements.size() + j]; }
};

/**
 * Group carrier: a finite group by table, free abelian Z^rank, or free
 * F_rank. Free variants use the standard basis as generating set; finite
 * tables carry an explicit generating set (checked to generate by closure).
 */
struct GroupSpec {
    enum class Variant { finite_table, free_abelian, free_group };
    Variant variant = Variant::free_group;
    int rank = 0;                  // free variants
    FiniteTable table;             // finite_table variant
    std::vector<int> generators;   // finite_table: element indices of S
};

/**
 * Group element in normal form. Exactly one representation is active,
 * matching the group's variant: an element index for tables, an exponent
 * vector for free abelian, a reduced signed-letter word for free groups
 * (letter k > 0 is generator k-1, letter -k its inverse).
 */
struct Word {
    enum class Kind { element, exponents, letters };
    Kind kind = Kind::element;
    int elem = 0;
    std::vector<long long> vec;
    std::vector<int> letters;

    static Word from_elem(int e);
    static Word from_vec(std::vector<long long> v);
    static Word from_letters(std::vector<int> ls);  // reduces adjacent inverse pairs

    bool operator==(const Word&) const = default;
};

// Validates the table axioms (entries in range, two-sided identity, two-sided
// inverses, associativity) and that `generators` reaches every element by
// closure. Throws DomainError("bad-group" / "bad-generators") with a witness.
GroupSpec make_finite_table(std::vector<std::string> elements, std::vector<std::vector<int>> rows,
                            std::vector<int> generators);

// Z/m as a FiniteTable with elements "0".."m-1" and generating set {"1"}
// ({"0"} when m = 1).
GroupSpec make_cyclic(int m);

GroupSpec make_free_abelian(int rank);
GroupSpec make_free(int rank);

Word identity_word(const GroupSpec& g);
bool is_identity(const GroupSpec& g, const Word& w);

// Structural equality: same variant and rank, identical element names,
// table, and generating set.
bool same_group(const GroupSpec& a, const GroupSpec& b);

// Exact product / inverse in normal form. Throws DomainError("bad-word") when
// the word's shape does not match the group.
Word group_op(const GroupSpec& g, const Word& u, const Word& v);
Word group_inv(const GroupSpec& g, const Word& u);

// All elements of word length <= r over the generating set, deduplicated in
// normal form. Order: breadth-first by length; free-abelian layers are sorted
// lexicographically, free-group layers extend in letter order a, a^-1, b, ...
std::vector<Word> ball(const GroupSpec& g, int r);

// Smallest subset of table indices containing `seeds`, the identity, and
// closed under products and inverses; sorted ascending.
std::vector<int> table_closure(const FiniteTable& t, const std::vector<int>& seeds);

// Free-group word syntax: letters a..z for generators 0..25, uppercase for
// their inverses, optional ^<integer> after a letter; "1" or "" is the
// identity. parse throws DomainError("bad-word") on foreign letters or
// letters beyond `rank`. format writes lowercase with exponents, e.g.
// "a^2b^-1", identity as "1".
Word parse_free_word(const std::string& s, int rank);
std::string format_free_word(const Word& w);

}  // namespace forge
