#include "forge/separability.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <utility>

#include "forge/errors.hpp"

namespace forge {

namespace {

// floor(a / b) for b > 0; the above-pivot reduction needs floor, not trunc.
long long fdiv(long long a, long long b) {
    long long q = a / b;
    if (a % b != 0 && a < 0) --q;
    return q;
}

void sub_scaled(std::vector<long long>& r, const std::vector<long long>& s, long long c) {
    if (c == 0) return;
    for (size_t j = 0; j < r.size(); ++j) r[j] -= c * s[j];
}

size_t leading_col(const std::vector<long long>& row) {
    size_t j = 0;
    while (j < row.size() && row[j] == 0) ++j;
    return j;
}

// Row-style HNF: echelon with increasing pivot columns, positive pivots,
// entries above a pivot in [0, pivot). Unique per row span.
std::vector<std::vector<long long>> row_hnf(std::vector<std::vector<long long>> rows, int rank) {
    size_t r = 0;
    for (int col = 0; col < rank && r < rows.size(); ++col) {
        const size_t c = static_cast<size_t>(col);
        for (;;) {
            size_t best = rows.size();
            for (size_t i = r; i < rows.size(); ++i) {
                if (rows[i][c] != 0 &&
                    (best == rows.size() || std::llabs(rows[i][c]) < std::llabs(rows[best][c])))
                    best = i;
            }
            if (best == rows.size()) break;
            std::swap(rows[r], rows[best]);
            bool clear = true;
            for (size_t i = r + 1; i < rows.size(); ++i) {
                sub_scaled(rows[i], rows[r], rows[i][c] / rows[r][c]);
                if (rows[i][c] != 0) clear = false;
            }
            if (clear) {
                if (rows[r][c] < 0)
                    for (auto& x : rows[r]) x = -x;
                ++r;
                break;
            }
        }
    }
    rows.resize(r);
    for (size_t i = 0; i < rows.size(); ++i) {
        const size_t lc = leading_col(rows[i]);
        for (size_t k = 0; k < i; ++k) sub_scaled(rows[k], rows[i], fdiv(rows[k][lc], rows[i][lc]));
    }
    return rows;
}

void require_dim(const std::vector<long long>& v, int rank, const char* what) {
    if (static_cast<int>(v.size()) != rank)
        throw DomainError("dim-mismatch", std::string(what) + " has the wrong dimension",
                          {{"size", v.size()}, {"rank", rank}});
}

// Membership against precomputed HNF rows; shared by the public entry point
// and the stacked-lattice loop of the separating quotient.
bool hnf_member(const std::vector<std::vector<long long>>& hnf, std::vector<long long> w) {
    for (const auto& row : hnf) {
        const size_t lc = leading_col(row);
        if (w[lc] % row[lc] != 0) return false;
        sub_scaled(w, row, w[lc] / row[lc]);
    }
    return std::all_of(w.begin(), w.end(), [](long long x) { return x == 0; });
}

// Kind mirrors the CLI letter syntax: letter k > 0 is generator k-1, -k its
// inverse. Unreduced or malformed words are rejected, overlong letters are a
// rank disagreement rather than a malformed word.
void require_letter_word(const Word& w, int rank) {
    if (w.kind != Word::Kind::letters)
        throw DomainError("bad-word", "word is not a letter word");
    for (size_t i = 0; i < w.letters.size(); ++i) {
        const int l = w.letters[i];
        if (l == 0) throw DomainError("bad-word", "letter 0 is not a generator", {{"index", i}});
        if (i + 1 < w.letters.size() && w.letters[i + 1] == -l)
            throw DomainError("bad-word", "word is not reduced", {{"index", i}});
        if (std::abs(l) > rank)
            throw DomainError("group-mismatch", "letter outside the free group",
                              {{"letter", l}, {"rank", rank}});
    }
}

// Multigraph under construction: vertex fusion plus an edge list (tail,
// generator, head). Folding happens on fused classes.
struct Fuse {
    std::vector<int> parent;

    explicit Fuse(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
};

// Identifies heads of equally labeled out-edges and tails of equally labeled
// in-edges until neither rule fires. Each fusion shrinks the class count, so
// the pass loop terminates.
void fold(Fuse& f, const std::vector<std::array<int, 3>>& edges) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<std::pair<int, int>, int> out_slot;
        std::map<std::pair<int, int>, int> in_slot;
        for (const auto& e : edges) {
            const int t = f.find(e[0]);
            const int h = f.find(e[2]);
            auto [oi, onew] = out_slot.try_emplace({t, e[1]}, h);
            if (!onew && f.find(oi->second) != h) {
                f.unite(oi->second, h);
                changed = true;
            }
            auto [ii, inew] = in_slot.try_emplace({h, e[1]}, t);
            if (!inew && f.find(ii->second) != t) {
                f.unite(ii->second, t);
                changed = true;
            }
        }
    }
}

// Fused multigraph -> single-slot adjacency, dropping duplicate edges.
StallingsGraph compact(Fuse& f, int nv, int rank, const std::vector<std::array<int, 3>>& edges,
                       int base) {
    std::vector<int> id(static_cast<size_t>(nv), -1);
    int n = 0;
    for (int v = 0; v < nv; ++v)
        if (f.find(v) == v) id[static_cast<size_t>(v)] = n++;
    StallingsGraph g;
    g.rank = rank;
    g.out.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(rank), -1));
    g.in.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(rank), -1));
    g.base = id[static_cast<size_t>(f.find(base))];
    for (const auto& e : edges) {
        const int t = id[static_cast<size_t>(f.find(e[0]))];
        const int h = id[static_cast<size_t>(f.find(e[2]))];
        const size_t gidx = static_cast<size_t>(e[1]);
        int& os = g.out[static_cast<size_t>(t)][gidx];
        int& is = g.in[static_cast<size_t>(h)][gidx];
        if ((os != -1 && os != h) || (is != -1 && is != t))
            throw std::logic_error("separability: fold fixpoint violated");
        os = h;
        is = t;
    }
    return g;
}

int degree(const StallingsGraph& g, int v) {
    int d = 0;
    for (int l = 0; l < g.rank; ++l) {
        if (g.out[static_cast<size_t>(v)][static_cast<size_t>(l)] != -1) ++d;
        if (g.in[static_cast<size_t>(v)][static_cast<size_t>(l)] != -1) ++d;
    }
    return d;
}

// Removes non-base vertices of degree <= 1 until none remain; the survivors
// form the core. Cleared slots stay -1, canonicalize drops dead vertices.
void trim(StallingsGraph& g) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < static_cast<int>(g.out.size()); ++v) {
            if (v == g.base || degree(g, v) > 1) continue;
            if (degree(g, v) == 0) continue;
            for (int l = 0; l < g.rank; ++l) {
                const size_t lv = static_cast<size_t>(l);
                const int h = g.out[static_cast<size_t>(v)][lv];
                if (h != -1) {
                    g.in[static_cast<size_t>(h)][lv] = -1;
                    g.out[static_cast<size_t>(v)][lv] = -1;
                }
                const int t = g.in[static_cast<size_t>(v)][lv];
                if (t != -1) {
                    g.out[static_cast<size_t>(t)][lv] = -1;
                    g.in[static_cast<size_t>(v)][lv] = -1;
                }
            }
            changed = true;
        }
    }
}

// Renumbers vertices in breadth-first discovery order from the base,
// directions interleaved forward-then-backward per generator. Folded
// connected graphs get a unique numbering, so equal subgroups compare equal.
StallingsGraph canonicalize(const StallingsGraph& g) {
    std::vector<int> id(g.out.size(), -1);
    std::vector<int> order;
    std::queue<int> bfs;
    id[static_cast<size_t>(g.base)] = 0;
    order.push_back(g.base);
    bfs.push(g.base);
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop();
        for (int l = 0; l < g.rank; ++l) {
            const size_t lv = static_cast<size_t>(l);
            for (const int w : {g.out[static_cast<size_t>(v)][lv], g.in[static_cast<size_t>(v)][lv]}) {
                if (w == -1 || id[static_cast<size_t>(w)] != -1) continue;
                id[static_cast<size_t>(w)] = static_cast<int>(order.size());
                order.push_back(w);
                bfs.push(w);
            }
        }
    }
    StallingsGraph c;
    c.rank = g.rank;
    c.base = 0;
    c.out.assign(order.size(), std::vector<int>(static_cast<size_t>(g.rank), -1));
    c.in.assign(order.size(), std::vector<int>(static_cast<size_t>(g.rank), -1));
    for (size_t v = 0; v < order.size(); ++v) {
        for (int l = 0; l < g.rank; ++l) {
            const size_t lv = static_cast<size_t>(l);
            const int h = g.out[static_cast<size_t>(order[v])][lv];
            if (h != -1) {
                c.out[v][lv] = id[static_cast<size_t>(h)];
                c.in[static_cast<size_t>(id[static_cast<size_t>(h)])][lv] = static_cast<int>(v);
            }
        }
    }
    return c;
}

int direction(int letter) {
    return letter > 0 ? 2 * (letter - 1) : 2 * (-letter - 1) + 1;
}

// Permutations act on {0..d-1}; pmul(p, q) applies q first, matching the
// left-to-right reading of group words.
using Perm = std::vector<int>;

Perm pid(int d) {
    Perm p(static_cast<size_t>(d));
    std::iota(p.begin(), p.end(), 0);
    return p;
}

Perm pmul(const Perm& p, const Perm& q) {
    Perm r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[i] = p[static_cast<size_t>(q[i])];
    return r;
}

Perm pinv(const Perm& p) {
    Perm r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[static_cast<size_t>(p[i])] = static_cast<int>(i);
    return r;
}

Perm apply_word(const std::vector<Perm>& images, const Word& w, int d) {
    Perm r = pid(d);
    for (const int l : w.letters)
        r = pmul(r, l > 0 ? images[static_cast<size_t>(l - 1)]
                          : pinv(images[static_cast<size_t>(-l - 1)]));
    return r;
}

// Closure of the generated permutation subgroup; inverses come for free in a
// finite group, so right-multiplying by generators from the identity suffices.
std::set<Perm> close_subgroup(const std::vector<Perm>& gens, int d) {
    std::set<Perm> seen{pid(d)};
    std::queue<Perm> work;
    work.push(pid(d));
    while (!work.empty()) {
        const Perm cur = work.front();
        work.pop();
        for (const auto& g : gens) {
            Perm nxt = pmul(cur, g);
            if (seen.insert(nxt).second) work.push(std::move(nxt));
        }
    }
    return seen;
}

}  // namespace

Lattice make_lattice(int rank, std::vector<std::vector<long long>> basis) {
    if (rank < 1) throw DomainError("bad-rank", "ambient rank must be >= 1", {{"rank", rank}});
    for (size_t i = 0; i < basis.size(); ++i)
        if (static_cast<int>(basis[i].size()) != rank)
            throw DomainError("dim-mismatch", "basis row has the wrong dimension",
                              {{"row", i}, {"size", basis[i].size()}, {"rank", rank}});
    Lattice l;
    l.rank = rank;
    l.hnf = row_hnf(basis, rank);
    l.basis = std::move(basis);
    return l;
}

std::vector<std::vector<long long>> lattice_hnf(const Lattice& l) { return l.hnf; }

bool lattice_member(const Lattice& l, const std::vector<long long>& v) {
    require_dim(v, l.rank, "vector");
    return hnf_member(l.hnf, v);
}

long long lattice_separating_quotient(const Lattice& l, const std::vector<long long>& v) {
    if (lattice_member(l, v))
        throw DomainError("in-subgroup", "vector lies in the lattice; nothing to separate",
                          {{"vector", v}});
    for (long long m = 2;; ++m) {
        std::vector<std::vector<long long>> stacked = l.hnf;
        for (int i = 0; i < l.rank; ++i) {
            std::vector<long long> e(static_cast<size_t>(l.rank), 0);
            e[static_cast<size_t>(i)] = m;
            stacked.push_back(std::move(e));
        }
        if (!hnf_member(row_hnf(std::move(stacked), l.rank), v)) return m;
    }
}

StallingsGraph stallings_graph(int rank, const std::vector<Word>& gens) {
    if (rank < 1) throw DomainError("bad-rank", "free rank must be >= 1", {{"rank", rank}});
    for (const Word& w : gens) require_letter_word(w, rank);

    int nv = 1;
    std::vector<std::array<int, 3>> edges;
    for (const Word& w : gens) {
        int cur = 0;
        for (size_t j = 0; j < w.letters.size(); ++j) {
            const int nxt = (j + 1 == w.letters.size()) ? 0 : nv++;
            const int l = w.letters[j];
            if (l > 0)
                edges.push_back({cur, l - 1, nxt});
            else
                edges.push_back({nxt, -l - 1, cur});
            cur = nxt;
        }
    }
    Fuse f(nv);
    fold(f, edges);
    StallingsGraph g = compact(f, nv, rank, edges, 0);
    trim(g);
    return canonicalize(g);
}

bool subgroup_member(const StallingsGraph& g, const Word& w) {
    require_letter_word(w, g.rank);
    int v = g.base;
    for (const int l : w.letters) {
        v = l > 0 ? g.out[static_cast<size_t>(v)][static_cast<size_t>(l - 1)]
                  : g.in[static_cast<size_t>(v)][static_cast<size_t>(-l - 1)];
        if (v == -1) return false;
    }
    return v == g.base;
}

std::vector<Word> graph_generators(const StallingsGraph& g) {
    const size_t n = g.out.size();
    std::vector<std::vector<int>> path(n);
    std::vector<char> seen(n, 0);
    std::set<std::pair<int, int>> tree;
    std::queue<int> bfs;
    seen[static_cast<size_t>(g.base)] = 1;
    bfs.push(g.base);
    while (!bfs.empty()) {
        const int v = bfs.front();
        bfs.pop();
        for (int l = 0; l < g.rank; ++l) {
            const size_t lv = static_cast<size_t>(l);
            const int h = g.out[static_cast<size_t>(v)][lv];
            if (h != -1 && !seen[static_cast<size_t>(h)]) {
                seen[static_cast<size_t>(h)] = 1;
                path[static_cast<size_t>(h)] = path[static_cast<size_t>(v)];
                path[static_cast<size_t>(h)].push_back(l + 1);
                tree.insert({v, l});
                bfs.push(h);
            }
            const int t = g.in[static_cast<size_t>(v)][lv];
            if (t != -1 && !seen[static_cast<size_t>(t)]) {
                seen[static_cast<size_t>(t)] = 1;
                path[static_cast<size_t>(t)] = path[static_cast<size_t>(v)];
                path[static_cast<size_t>(t)].push_back(-(l + 1));
                tree.insert({t, l});
                bfs.push(t);
            }
        }
    }
    std::vector<Word> gens;
    for (int v = 0; v < static_cast<int>(n); ++v) {
        for (int l = 0; l < g.rank; ++l) {
            const int h = g.out[static_cast<size_t>(v)][static_cast<size_t>(l)];
            if (h == -1 || tree.count({v, l})) continue;
            std::vector<int> letters = path[static_cast<size_t>(v)];
            letters.push_back(l + 1);
            const auto& back = path[static_cast<size_t>(h)];
            for (auto it = back.rbegin(); it != back.rend(); ++it) letters.push_back(-*it);
            gens.push_back(Word::from_letters(std::move(letters)));
        }
    }
    return gens;
}

ProductAutomaton product_automaton(const std::vector<StallingsGraph>& hs) {
    for (size_t i = 1; i < hs.size(); ++i)
        if (hs[i].rank != hs[0].rank)
            throw DomainError("group-mismatch", "graphs live in different free groups",
                              {{"graph", i}, {"rank", hs[i].rank}, {"expected", hs[0].rank}});
    ProductAutomaton pa;
    pa.rank = hs.empty() ? 0 : hs[0].rank;
    int states = 0;
    std::vector<int> offset;
    for (const auto& g : hs) {
        offset.push_back(states);
        states += static_cast<int>(g.out.size());
    }
    if (hs.empty()) states = 1;
    const size_t ns = static_cast<size_t>(states);
    pa.step.assign(ns, std::vector<std::vector<int>>(static_cast<size_t>(2 * pa.rank)));
    pa.eps.assign(ns, std::vector<char>(ns, 0));
    for (size_t i = 0; i < hs.size(); ++i) {
        const int off = offset[i];
        for (size_t v = 0; v < hs[i].out.size(); ++v) {
            for (int l = 0; l < hs[i].rank; ++l) {
                const int h = hs[i].out[v][static_cast<size_t>(l)];
                if (h == -1) continue;
                const size_t sv = static_cast<size_t>(off + static_cast<int>(v));
                const size_t sh = static_cast<size_t>(off + h);
                pa.step[sv][static_cast<size_t>(2 * l)].push_back(static_cast<int>(sh));
                pa.step[sh][static_cast<size_t>(2 * l + 1)].push_back(static_cast<int>(sv));
            }
        }
    }
    pa.start = hs.empty() ? 0 : offset.front() + hs.front().base;
    pa.accept = hs.empty() ? 0 : offset.back() + hs.back().base;

    // Pair worklist: reflexive seeds plus the base-to-base links, then close
    // under transitivity and the cancellation rule until nothing new appears.
    std::queue<std::pair<int, int>> work;
    const auto add = [&](int p, int q) {
        char& cell = pa.eps[static_cast<size_t>(p)][static_cast<size_t>(q)];
        if (!cell) {
            cell = 1;
            work.push({p, q});
        }
    };
    for (int s = 0; s < states; ++s) add(s, s);
    for (size_t i = 0; i + 1 < hs.size(); ++i)
        add(offset[i] + hs[i].base, offset[i + 1] + hs[i + 1].base);
    while (!work.empty()) {
        const auto [r, s] = work.front();
        work.pop();
        for (int t = 0; t < states; ++t) {
            if (pa.eps[static_cast<size_t>(t)][static_cast<size_t>(r)]) add(t, s);
            if (pa.eps[static_cast<size_t>(s)][static_cast<size_t>(t)]) add(r, t);
        }
        for (int d = 0; d < 2 * pa.rank; ++d) {
            const size_t back = static_cast<size_t>(d ^ 1);
            for (const int p : pa.step[static_cast<size_t>(r)][back])
                for (const int q : pa.step[static_cast<size_t>(s)][back]) add(p, q);
        }
    }
    pa.saturated = true;
    return pa;
}

bool automaton_accepts(const ProductAutomaton& pa, const Word& w) {
    require_letter_word(w, pa.rank);
    const size_t ns = pa.eps.size();
    std::vector<char> cur(pa.eps[static_cast<size_t>(pa.start)]);
    for (const int l : w.letters) {
        std::vector<char> nxt(ns, 0);
        const size_t d = static_cast<size_t>(direction(l));
        for (size_t s = 0; s < ns; ++s) {
            if (!cur[s]) continue;
            for (const int t : pa.step[s][d])
                for (size_t u = 0; u < ns; ++u)
                    if (pa.eps[static_cast<size_t>(t)][u]) nxt[u] = 1;
        }
        cur = std::move(nxt);
    }
    return cur[static_cast<size_t>(pa.accept)] != 0;
}

bool benois_product_member(const std::vector<StallingsGraph>& hs, const Word& w) {
    return automaton_accepts(product_automaton(hs), w);
}

SeparationResult free_separating_quotient(const std::vector<StallingsGraph>& hs, const Word& w,
                                          int max_degree) {
    if (max_degree < 1)
        throw DomainError("bad-budget", "max degree must be >= 1", {{"max_degree", max_degree}});
    if (hs.empty())
        throw DomainError("bad-subgroup", "empty subgroup list; the product is undefined");
    if (benois_product_member(hs, w))
        throw DomainError("in-product", "word lies in the product; nothing to separate",
                          {{"letters", w.letters}});
    const int rank = hs[0].rank;
    std::vector<std::vector<Word>> gen_words;
    for (const auto& g : hs) gen_words.push_back(graph_generators(g));

    long long tried = 0;
    for (int d = 1; d <= max_degree; ++d) {
        std::vector<Perm> perms;
        Perm p = pid(d);
        do {
            perms.push_back(p);
        } while (std::next_permutation(p.begin(), p.end()));

        std::vector<size_t> tuple(static_cast<size_t>(rank), 0);
        for (;;) {
            ++tried;
            std::vector<Perm> images;
            for (const size_t t : tuple) images.push_back(perms[t]);

            std::set<Perm> product{pid(d)};
            for (const auto& words : gen_words) {
                std::vector<Perm> sub_gens;
                for (const Word& gw : words) sub_gens.push_back(apply_word(images, gw, d));
                const std::set<Perm> image = close_subgroup(sub_gens, d);
                std::set<Perm> next;
                for (const auto& left : product)
                    for (const auto& h : image) next.insert(pmul(left, h));
                product = std::move(next);
            }
            if (!product.count(apply_word(images, w, d)))
                return FiniteQuotient{d, std::move(images)};

            size_t pos = tuple.size();
            while (pos > 0 && ++tuple[pos - 1] == perms.size()) tuple[--pos] = 0;
            if (pos == 0) break;
        }
    }
    return SeparationExhausted{max_degree, tried};
}

}  // namespace forge
