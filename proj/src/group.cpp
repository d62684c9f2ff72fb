#include "forge/group.hpp"

#include <algorithm>
#include <set>

#include "forge/errors.hpp"

namespace forge {

namespace {

// Appends one signed letter, cancelling against the current tail.
void push_reduced(std::vector<int>& out, int letter) {
    if (!out.empty() && out.back() == -letter)
        out.pop_back();
    else
        out.push_back(letter);
}

void check_word(const GroupSpec& g, const Word& w, const char* op) {
    switch (g.variant) {
        case GroupSpec::Variant::finite_table:
            if (w.kind != Word::Kind::element || w.elem < 0 || w.elem >= g.table.size())
                throw DomainError("bad-word", std::string(op) + ": expected a table element index");
            return;
        case GroupSpec::Variant::free_abelian:
            if (w.kind != Word::Kind::exponents ||
                w.vec.size() != static_cast<size_t>(g.rank))
                throw DomainError("bad-word",
                                  std::string(op) + ": expected an exponent vector of the group's rank");
            return;
        case GroupSpec::Variant::free_group:
            if (w.kind != Word::Kind::letters)
                throw DomainError("bad-word", std::string(op) + ": expected a letter word");
            for (size_t i = 0; i < w.letters.size(); ++i) {
                int l = w.letters[i];
                if (l == 0 || l > g.rank || -l > g.rank)
                    throw DomainError("bad-word", std::string(op) + ": letter outside the group's rank",
                                      {{"letter", l}});
                if (i > 0 && w.letters[i - 1] == -l)
                    throw DomainError("bad-word", std::string(op) + ": word is not reduced");
            }
            return;
    }
}

}  // namespace

Word Word::from_elem(int e) {
    Word w;
    w.kind = Kind::element;
    w.elem = e;
    return w;
}

Word Word::from_vec(std::vector<long long> v) {
    Word w;
    w.kind = Kind::exponents;
    w.vec = std::move(v);
    return w;
}

Word Word::from_letters(std::vector<int> ls) {
    Word w;
    w.kind = Kind::letters;
    for (int l : ls) push_reduced(w.letters, l);
    return w;
}

GroupSpec make_finite_table(std::vector<std::string> elements, std::vector<std::vector<int>> rows,
                            std::vector<int> generators) {
    int n = static_cast<int>(elements.size());
    if (n < 1) throw DomainError("bad-group", "table needs at least one element");
    if (std::set<std::string>(elements.begin(), elements.end()).size() != elements.size())
        throw DomainError("bad-group", "duplicate element names");
    if (rows.size() != elements.size())
        throw DomainError("bad-group", "table must have one row per element");

    FiniteTable t;
    t.elements = std::move(elements);
    t.table.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
        if (rows[static_cast<size_t>(i)].size() != static_cast<size_t>(n))
            throw DomainError("bad-group", "table row has wrong length",
                              {{"row", t.elements[static_cast<size_t>(i)]}});
        for (int j = 0; j < n; ++j) {
            int v = rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (v < 0 || v >= n)
                throw DomainError("bad-group", "table entry out of range",
                                  {{"row", i}, {"col", j}, {"entry", v}});
            t.table[static_cast<size_t>(i) * n + j] = v;
        }
    }

    for (int e = 0; e < n && t.identity < 0; ++e) {
        bool two_sided = true;
        for (int x = 0; x < n && two_sided; ++x)
            two_sided = t.mul(e, x) == x && t.mul(x, e) == x;
        if (two_sided) t.identity = e;
    }
    if (t.identity < 0) throw DomainError("bad-group", "no two-sided identity");

    t.inverse.assign(static_cast<size_t>(n), -1);
    for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y)
            if (t.mul(x, y) == t.identity && t.mul(y, x) == t.identity) {
                t.inverse[static_cast<size_t>(x)] = y;
                break;
            }
        if (t.inverse[static_cast<size_t>(x)] < 0)
            throw DomainError("bad-group", "element has no two-sided inverse",
                              {{"element", t.elements[static_cast<size_t>(x)]}});
    }

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                if (t.mul(t.mul(i, j), k) != t.mul(i, t.mul(j, k)))
                    throw DomainError("bad-group", "associativity fails",
                                      {{"i", t.elements[static_cast<size_t>(i)]},
                                       {"j", t.elements[static_cast<size_t>(j)]},
                                       {"k", t.elements[static_cast<size_t>(k)]}});

    for (int s : generators)
        if (s < 0 || s >= n)
            throw DomainError("bad-generators", "generator index out of range", {{"index", s}});
    if (static_cast<int>(table_closure(t, generators).size()) != n)
        throw DomainError("bad-generators", "generating set does not generate",
                          {{"closure_size", table_closure(t, generators).size()}});

    GroupSpec g;
    g.variant = GroupSpec::Variant::finite_table;
    g.table = std::move(t);
    g.generators = std::move(generators);
    return g;
}

GroupSpec make_cyclic(int m) {
    if (m < 1) throw DomainError("bad-modulus", "cyclic group needs modulus >= 1", {{"m", m}});
    std::vector<std::string> names;
    std::vector<std::vector<int>> rows(static_cast<size_t>(m),
                                       std::vector<int>(static_cast<size_t>(m)));
    for (int i = 0; i < m; ++i) {
        names.push_back(std::to_string(i));
        for (int j = 0; j < m; ++j) rows[static_cast<size_t>(i)][static_cast<size_t>(j)] = (i + j) % m;
    }
    return make_finite_table(std::move(names), std::move(rows), {m == 1 ? 0 : 1});
}

GroupSpec make_free_abelian(int rank) {
    if (rank < 1) throw DomainError("bad-rank", "free abelian rank must be >= 1", {{"rank", rank}});
    GroupSpec g;
    g.variant = GroupSpec::Variant::free_abelian;
    g.rank = rank;
    return g;
}

GroupSpec make_free(int rank) {
    if (rank < 1) throw DomainError("bad-rank", "free rank must be >= 1", {{"rank", rank}});
    GroupSpec g;
    g.variant = GroupSpec::Variant::free_group;
    g.rank = rank;
    return g;
}

Word identity_word(const GroupSpec& g) {
    switch (g.variant) {
        case GroupSpec::Variant::finite_table:
            return Word::from_elem(g.table.identity);
        case GroupSpec::Variant::free_abelian:
            return Word::from_vec(std::vector<long long>(static_cast<size_t>(g.rank), 0));
        case GroupSpec::Variant::free_group:
            return Word::from_letters({});
    }
    throw DomainError("bad-group", "unknown variant");
}

bool is_identity(const GroupSpec& g, const Word& w) { return w == identity_word(g); }

bool same_group(const GroupSpec& a, const GroupSpec& b) {
    return a.variant == b.variant && a.rank == b.rank && a.generators == b.generators &&
           a.table.elements == b.table.elements && a.table.table == b.table.table;
}

Word group_op(const GroupSpec& g, const Word& u, const Word& v) {
    check_word(g, u, "group_op");
    check_word(g, v, "group_op");
    switch (g.variant) {
        case GroupSpec::Variant::finite_table:
            return Word::from_elem(g.table.mul(u.elem, v.elem));
        case GroupSpec::Variant::free_abelian: {
            std::vector<long long> sum(u.vec);
            for (size_t i = 0; i < sum.size(); ++i) sum[i] += v.vec[i];
            return Word::from_vec(std::move(sum));
        }
        case GroupSpec::Variant::free_group: {
            std::vector<int> cat(u.letters);
            cat.insert(cat.end(), v.letters.begin(), v.letters.end());
            return Word::from_letters(std::move(cat));
        }
    }
    throw DomainError("bad-group", "unknown variant");
}

Word group_inv(const GroupSpec& g, const Word& u) {
    check_word(g, u, "group_inv");
    switch (g.variant) {
        case GroupSpec::Variant::finite_table:
            return Word::from_elem(g.table.inverse[static_cast<size_t>(u.elem)]);
        case GroupSpec::Variant::free_abelian: {
            std::vector<long long> neg(u.vec);
            for (auto& x : neg) x = -x;
            return Word::from_vec(std::move(neg));
        }
        case GroupSpec::Variant::free_group: {
            std::vector<int> rev(u.letters.rbegin(), u.letters.rend());
            for (auto& l : rev) l = -l;
            return Word::from_letters(std::move(rev));
        }
    }
    throw DomainError("bad-group", "unknown variant");
}

namespace {

std::vector<Word> ball_table(const GroupSpec& g, int r) {
    // Multipliers: generators in order, then their inverses, first occurrence kept.
    std::vector<int> mult;
    for (int s : g.generators)
        if (std::find(mult.begin(), mult.end(), s) == mult.end()) mult.push_back(s);
    for (int s : g.generators) {
        int si = g.table.inverse[static_cast<size_t>(s)];
        if (std::find(mult.begin(), mult.end(), si) == mult.end()) mult.push_back(si);
    }
    std::vector<bool> seen(static_cast<size_t>(g.table.size()), false);
    std::vector<int> order{g.table.identity};
    seen[static_cast<size_t>(g.table.identity)] = true;
    size_t layer_begin = 0;
    for (int step = 0; step < r; ++step) {
        size_t layer_end = order.size();
        for (size_t i = layer_begin; i < layer_end; ++i)
            for (int s : mult) {
                int y = g.table.mul(order[i], s);
                if (!seen[static_cast<size_t>(y)]) {
                    seen[static_cast<size_t>(y)] = true;
                    order.push_back(y);
                }
            }
        if (order.size() == layer_end) break;
        layer_begin = layer_end;
    }
    std::vector<Word> out;
    out.reserve(order.size());
    for (int e : order) out.push_back(Word::from_elem(e));
    return out;
}

std::vector<Word> ball_abelian(const GroupSpec& g, int r) {
    std::vector<Word> out{identity_word(g)};
    std::set<std::vector<long long>> seen{out[0].vec};
    size_t layer_begin = 0;
    for (int step = 0; step < r; ++step) {
        size_t layer_end = out.size();
        std::set<std::vector<long long>> layer;
        for (size_t i = layer_begin; i < layer_end; ++i)
            for (int k = 0; k < g.rank; ++k)
                for (int d : {-1, 1}) {
                    std::vector<long long> v = out[i].vec;
                    v[static_cast<size_t>(k)] += d;
                    if (!seen.count(v)) layer.insert(std::move(v));
                }
        for (const auto& v : layer) {
            seen.insert(v);
            out.push_back(Word::from_vec(v));
        }
        layer_begin = layer_end;
    }
    return out;
}

std::vector<Word> ball_free(const GroupSpec& g, int r) {
    std::vector<Word> out{identity_word(g)};
    size_t layer_begin = 0;
    for (int step = 0; step < r; ++step) {
        size_t layer_end = out.size();
        for (size_t i = layer_begin; i < layer_end; ++i)
            for (int k = 1; k <= g.rank; ++k)
                for (int l : {k, -k}) {
                    // Reduced words only: never undo the last letter.
                    if (!out[i].letters.empty() && out[i].letters.back() == -l) continue;
                    std::vector<int> w = out[i].letters;
                    w.push_back(l);
                    out.push_back(Word::from_letters(std::move(w)));
                }
        layer_begin = layer_end;
    }
    return out;
}

}  // namespace

std::vector<Word> ball(const GroupSpec& g, int r) {
    if (r < 0) throw DomainError("bad-radius", "ball radius must be >= 0", {{"r", r}});
    switch (g.variant) {
        case GroupSpec::Variant::finite_table:
            return ball_table(g, r);
        case GroupSpec::Variant::free_abelian:
            return ball_abelian(g, r);
        case GroupSpec::Variant::free_group:
            return ball_free(g, r);
    }
    throw DomainError("bad-group", "unknown variant");
}

std::vector<int> table_closure(const FiniteTable& t, const std::vector<int>& seeds) {
    std::vector<int> mult;
    for (int s : seeds) {
        if (std::find(mult.begin(), mult.end(), s) == mult.end()) mult.push_back(s);
        int si = t.inverse[static_cast<size_t>(s)];
        if (std::find(mult.begin(), mult.end(), si) == mult.end()) mult.push_back(si);
    }
    std::vector<bool> seen(static_cast<size_t>(t.size()), false);
    std::vector<int> work{t.identity};
    seen[static_cast<size_t>(t.identity)] = true;
    for (size_t i = 0; i < work.size(); ++i)
        for (int s : mult) {
            int y = t.mul(work[i], s);
            if (!seen[static_cast<size_t>(y)]) {
                seen[static_cast<size_t>(y)] = true;
                work.push_back(y);
            }
        }
    std::sort(work.begin(), work.end());
    return work;
}

Word parse_free_word(const std::string& s, int rank) {
    std::vector<int> letters;
    size_t i = 0;
    if (s == "1" || s.empty()) return Word::from_letters({});
    while (i < s.size()) {
        char c = s[i];
        int base, sign;
        if (c >= 'a' && c <= 'z') {
            base = c - 'a';
            sign = 1;
        } else if (c >= 'A' && c <= 'Z') {
            base = c - 'A';
            sign = -1;
        } else {
            throw DomainError("bad-word", "unexpected character in word",
                              {{"char", std::string(1, c)}, {"pos", i}});
        }
        if (base >= rank)
            throw DomainError("bad-word", "letter outside the group's rank",
                              {{"char", std::string(1, c)}, {"rank", rank}});
        ++i;
        long long exp = 1;
        if (i < s.size() && s[i] == '^') {
            ++i;
            size_t start = i;
            if (i < s.size() && s[i] == '-') ++i;
            while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
            if (i == start || (s[start] == '-' && i == start + 1))
                throw DomainError("bad-word", "missing exponent after ^", {{"pos", start}});
            exp = std::stoll(s.substr(start, i - start));
        }
        long long total = sign * exp;
        if (total > 100000 || total < -100000)
            throw DomainError("bad-word", "exponent too large", {{"exponent", total}});
        int letter = total > 0 ? base + 1 : -(base + 1);
        for (long long k = 0; k < (total < 0 ? -total : total); ++k) push_reduced(letters, letter);
    }
    Word w;
    w.kind = Word::Kind::letters;
    w.letters = std::move(letters);
    return w;
}

std::string format_free_word(const Word& w) {
    if (w.letters.empty()) return "1";
    std::string out;
    size_t i = 0;
    while (i < w.letters.size()) {
        int l = w.letters[i];
        size_t j = i;
        while (j < w.letters.size() && w.letters[j] == l) ++j;
        long long exp = static_cast<long long>(j - i) * (l > 0 ? 1 : -1);
        out += static_cast<char>('a' + (l > 0 ? l : -l) - 1);
        if (exp != 1) out += "^" + std::to_string(exp);
        i = j;
    }
    return out;
}

}  // namespace forge
