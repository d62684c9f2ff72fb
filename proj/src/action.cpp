#include "forge/action.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "forge/errors.hpp"

namespace forge {

namespace {

using Violation = ActionViolation;
using Kind = ActionViolation::Kind;

std::vector<int> identity_perm(int n) {
    std::vector<int> id(static_cast<size_t>(n));
    std::iota(id.begin(), id.end(), 0);
    return id;
}

bool is_permutation_of(const std::vector<int>& map, int n) {
    if (static_cast<int>(map.size()) != n) return false;
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (int v : map) {
        if (v < 0 || v >= n || seen[static_cast<size_t>(v)]) return false;
        seen[static_cast<size_t>(v)] = 1;
    }
    return true;
}

std::vector<int> inverse_perm(const std::vector<int>& p) {
    std::vector<int> inv(p.size());
    for (size_t i = 0; i < p.size(); ++i) inv[static_cast<size_t>(p[i])] = static_cast<int>(i);
    return inv;
}

// (p * q)(x) = p(q(x))
std::vector<int> compose(const std::vector<int>& p, const std::vector<int>& q) {
    std::vector<int> r(q.size());
    for (size_t i = 0; i < q.size(); ++i) r[i] = p[static_cast<size_t>(q[i])];
    return r;
}

std::vector<int> perm_power(std::vector<int> base, long long e) {
    if (e < 0) {
        base = inverse_perm(base);
        e = -e;
    }
    std::vector<int> r = identity_perm(static_cast<int>(base.size()));
    while (e > 0) {
        if (e & 1) r = compose(r, base);
        base = compose(base, base);
        e >>= 1;
    }
    return r;
}

std::string gen_label(const GroupSpec& g, int t) {
    if (g.variant == GroupSpec::Variant::finite_table)
        return g.table.elements[static_cast<size_t>(g.generators[static_cast<size_t>(t)])];
    if (g.rank <= 26) return std::string(1, static_cast<char>('a' + t));
    return "g" + std::to_string(t);
}

// Maps of all table elements grown along products of generators from the
// identity. A conflict between two generator chains, or an unreachable
// element, lands in `bad` and the result is empty.
std::vector<std::vector<int>> induced_element_maps(const FiniteAction& act,
                                                   std::optional<Violation>& bad) {
    const FiniteTable& t = act.group.table;
    const int n = act.space.size();
    std::vector<std::vector<int>> perms(static_cast<size_t>(t.size()));
    std::vector<char> seen(static_cast<size_t>(t.size()), 0);
    std::vector<int> order;
    perms[static_cast<size_t>(t.identity)] = identity_perm(n);
    seen[static_cast<size_t>(t.identity)] = 1;
    order.push_back(t.identity);
    for (size_t qi = 0; qi < order.size(); ++qi) {
        int x = order[qi];
        for (size_t gi = 0; gi < act.group.generators.size(); ++gi) {
            int y = t.mul(act.group.generators[gi], x);
            std::vector<int> cand = compose(act.gen_maps[gi], perms[static_cast<size_t>(x)]);
            if (!seen[static_cast<size_t>(y)]) {
                perms[static_cast<size_t>(y)] = std::move(cand);
                seen[static_cast<size_t>(y)] = 1;
                order.push_back(y);
            } else if (perms[static_cast<size_t>(y)] != cand) {
                bad = Violation{Kind::relations,
                                {t.elements[static_cast<size_t>(y)]},
                                "generator chains assign conflicting maps to element " +
                                    t.elements[static_cast<size_t>(y)]};
                return {};
            }
        }
    }
    for (int e = 0; e < t.size(); ++e)
        if (!seen[static_cast<size_t>(e)]) {
            bad = Violation{Kind::relations,
                            {t.elements[static_cast<size_t>(e)]},
                            "generators do not reach element " + t.elements[static_cast<size_t>(e)]};
            return {};
        }
    return perms;
}

void require_valid(const FiniteAction& act, const std::string& role) {
    if (auto v = validate_action(act))
        throw DomainError("bad-action", role + ": " + v->message);
}

}  // namespace

int generator_count(const GroupSpec& g) {
    if (g.variant == GroupSpec::Variant::finite_table)
        return static_cast<int>(g.generators.size());
    return g.rank;
}

std::optional<ActionViolation> validate_action(const FiniteAction& act) {
    const int n = act.space.size();
    const int gens = generator_count(act.group);
    if (static_cast<int>(act.gen_maps.size()) != gens)
        return Violation{Kind::shape,
                         {},
                         "expected " + std::to_string(gens) + " generator maps, got " +
                             std::to_string(act.gen_maps.size())};
    for (int t = 0; t < gens; ++t) {
        const auto& m = act.gen_maps[static_cast<size_t>(t)];
        if (static_cast<int>(m.size()) != n)
            return Violation{Kind::shape,
                             {gen_label(act.group, t)},
                             "generator " + gen_label(act.group, t) + " maps " +
                                 std::to_string(m.size()) + " points, space has " +
                                 std::to_string(n)};
        if (!is_permutation_of(m, n))
            return Violation{Kind::bijection,
                             {gen_label(act.group, t)},
                             "generator " + gen_label(act.group, t) + " is not a bijection"};
    }
    for (int t = 0; t < gens; ++t) {
        const auto& m = act.gen_maps[static_cast<size_t>(t)];
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (act.space.at(m[static_cast<size_t>(i)], m[static_cast<size_t>(j)]) !=
                    act.space.at(i, j))
                    return Violation{
                        Kind::isometry,
                        {gen_label(act.group, t), act.space.points[static_cast<size_t>(i)],
                         act.space.points[static_cast<size_t>(j)]},
                        "generator " + gen_label(act.group, t) + " changes the distance between " +
                            act.space.points[static_cast<size_t>(i)] + " and " +
                            act.space.points[static_cast<size_t>(j)]};
    }
    if (act.group.variant == GroupSpec::Variant::finite_table) {
        std::optional<Violation> bad;
        induced_element_maps(act, bad);
        if (bad) return bad;
    } else if (act.group.variant == GroupSpec::Variant::free_abelian) {
        for (int t = 0; t < gens; ++t)
            for (int u = t + 1; u < gens; ++u) {
                const auto& mt = act.gen_maps[static_cast<size_t>(t)];
                const auto& mu = act.gen_maps[static_cast<size_t>(u)];
                for (int i = 0; i < n; ++i)
                    if (mt[static_cast<size_t>(mu[static_cast<size_t>(i)])] !=
                        mu[static_cast<size_t>(mt[static_cast<size_t>(i)])])
                        return Violation{Kind::commutation,
                                         {gen_label(act.group, t), gen_label(act.group, u),
                                          act.space.points[static_cast<size_t>(i)]},
                                         "generators " + gen_label(act.group, t) + " and " +
                                             gen_label(act.group, u) + " disagree at point " +
                                             act.space.points[static_cast<size_t>(i)]};
            }
    }
    return std::nullopt;
}

bool satisfies_constraint(const FiniteAction& act, const AgreementConstraint& c) {
    const int gens = generator_count(act.group);
    const int n = act.space.size();
    if (static_cast<int>(c.required_images.size()) != gens)
        throw DomainError("bad-constraint", "one required-image list per generator");
    for (const auto& imgs : c.required_images)
        if (imgs.size() != c.anchor_points.size())
            throw DomainError("bad-constraint", "image list length differs from anchor count");
    for (int a : c.anchor_points)
        if (a < 0 || a >= n)
            throw DomainError("bad-constraint", "anchor out of range", {{"index", a}});
    for (int t = 0; t < gens; ++t)
        for (size_t ai = 0; ai < c.anchor_points.size(); ++ai)
            if (act.gen_maps[static_cast<size_t>(t)][static_cast<size_t>(c.anchor_points[ai])] !=
                c.required_images[static_cast<size_t>(t)][ai])
                return false;
    return true;
}

std::vector<std::vector<int>> element_maps(const FiniteAction& act) {
    if (act.group.variant != GroupSpec::Variant::finite_table)
        throw DomainError("bad-group", "element_maps needs a finite-table group");
    std::optional<Violation> bad;
    auto perms = induced_element_maps(act, bad);
    if (bad) throw DomainError("bad-action", bad->message);
    return perms;
}

std::vector<int> word_map(const FiniteAction& act, const Word& w) {
    const int n = act.space.size();
    switch (act.group.variant) {
        case GroupSpec::Variant::finite_table: {
            if (w.kind != Word::Kind::element || w.elem < 0 || w.elem >= act.group.table.size())
                throw DomainError("bad-word", "word does not name a table element");
            return element_maps(act)[static_cast<size_t>(w.elem)];
        }
        case GroupSpec::Variant::free_abelian: {
            if (w.kind != Word::Kind::exponents ||
                static_cast<int>(w.vec.size()) != act.group.rank)
                throw DomainError("bad-word", "word is not an exponent vector of the right rank");
            std::vector<int> r = identity_perm(n);
            for (size_t i = 0; i < w.vec.size(); ++i)
                r = compose(r, perm_power(act.gen_maps[i], w.vec[i]));
            return r;
        }
        case GroupSpec::Variant::free_group: {
            if (w.kind != Word::Kind::letters)
                throw DomainError("bad-word", "word is not a letter word");
            std::vector<int> r = identity_perm(n);
            for (int l : w.letters) {
                int idx = (l > 0 ? l : -l) - 1;
                if (l == 0 || idx >= act.group.rank)
                    throw DomainError("bad-word", "letter out of rank", {{"letter", l}});
                r = compose(r, l > 0 ? act.gen_maps[static_cast<size_t>(idx)]
                                     : inverse_perm(act.gen_maps[static_cast<size_t>(idx)]));
            }
            return r;
        }
    }
    throw DomainError("bad-group", "unknown variant");
}

FiniteAction uspenskii_extend(const FiniteAction& act, const FinMetric& ext) {
    if (act.group.variant != GroupSpec::Variant::finite_table)
        throw DomainError("bad-group", "uspenskii_extend needs a finite group");
    require_valid(act, "act");
    if (auto v = validate_metric(ext))
        throw DomainError("bad-extension", "ext is not a metric: " + v->message);
    const FinMetric& a = act.space;
    const int na = a.size();
    if (ext.size() != na + 1)
        throw DomainError("bad-extension", "ext must add exactly one point to the space",
                          {{"space", na}, {"ext", ext.size()}});
    std::vector<int> a_in_ext(static_cast<size_t>(na));
    std::vector<char> hit(static_cast<size_t>(ext.size()), 0);
    for (int i = 0; i < na; ++i) {
        int idx = ext.index_of(a.points[static_cast<size_t>(i)]);
        if (idx < 0)
            throw DomainError("bad-extension", "ext is missing point " + a.points[static_cast<size_t>(i)]);
        a_in_ext[static_cast<size_t>(i)] = idx;
        hit[static_cast<size_t>(idx)] = 1;
    }
    int star = -1;
    for (int j = 0; j < ext.size(); ++j)
        if (!hit[static_cast<size_t>(j)]) star = j;
    for (int i = 0; i < na; ++i)
        for (int j = i + 1; j < na; ++j)
            if (ext.at(a_in_ext[static_cast<size_t>(i)], a_in_ext[static_cast<size_t>(j)]) !=
                a.at(i, j))
                throw DomainError("bad-extension",
                                  "ext disagrees with the space between " +
                                      a.points[static_cast<size_t>(i)] + " and " +
                                      a.points[static_cast<size_t>(j)]);

    const FiniteTable& t = act.group.table;
    const int ng = t.size();
    if (na == 0 && ng > 1)
        throw DomainError("empty-part", "cannot metrize the group block over an empty space");
    auto perms = element_maps(act);

    std::vector<std::string> ids(a.points);
    for (int e = 0; e < ng; ++e)
        ids.push_back(mint_point_id(ids, t.elements[static_cast<size_t>(e)]));
    FinMetric c(ids);
    for (int i = 0; i < na; ++i)
        for (int j = i + 1; j < na; ++j) c.set(i, j, a.at(i, j));
    // d(a, h) = ext(h^-1 a, star)
    for (int h = 0; h < ng; ++h) {
        const auto& pull = perms[static_cast<size_t>(t.inverse[static_cast<size_t>(h)])];
        for (int i = 0; i < na; ++i)
            c.set(i, na + h, ext.at(a_in_ext[static_cast<size_t>(pull[static_cast<size_t>(i)])], star));
    }
    // d(g, h) = min over a of d(a, g) + d(a, h)
    for (int g = 0; g < ng; ++g)
        for (int h = g + 1; h < ng; ++h) {
            Rat best = c.at(0, na + g) + c.at(0, na + h);
            for (int i = 1; i < na; ++i) {
                Rat cand = c.at(i, na + g) + c.at(i, na + h);
                if (cand < best) best = cand;
            }
            c.set(na + g, na + h, best);
        }

    std::vector<std::vector<int>> maps;
    for (size_t gi = 0; gi < act.group.generators.size(); ++gi) {
        std::vector<int> m(static_cast<size_t>(na + ng));
        for (int i = 0; i < na; ++i) m[static_cast<size_t>(i)] = act.gen_maps[gi][static_cast<size_t>(i)];
        for (int e = 0; e < ng; ++e)
            m[static_cast<size_t>(na + e)] = na + t.mul(act.group.generators[gi], e);
        maps.push_back(std::move(m));
    }
    return FiniteAction{act.group, std::move(c), std::move(maps)};
}

FiniteAction invariant_closure(const FiniteAction& act, const std::vector<KatetovFn>& new_points) {
    if (act.group.variant != GroupSpec::Variant::finite_table)
        throw DomainError("bad-group", "invariant_closure needs a finite group");
    require_valid(act, "act");
    FiniteAction cur = act;
    for (size_t i = 0; i < new_points.size(); ++i) {
        const KatetovFn& r = new_points[i];
        const int m = cur.space.size();
        bool full = static_cast<int>(r.anchor.size()) == m && r.value.size() == r.anchor.size();
        for (int j = 0; full && j < m; ++j) full = r.anchor[static_cast<size_t>(j)] == j;
        if (!full)
            throw DomainError("bad-extension",
                              "extension must anchor every current point in index order",
                              {{"index", i}});
        FinMetric ext(cur.space.points);
        ext.points.push_back(mint_point_id(ext.points, "y"));
        ext.dist.assign(static_cast<size_t>(m + 1) * static_cast<size_t>(m + 1), Rat(0));
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) ext.set(p, q, cur.space.at(p, q));
        for (int p = 0; p < m; ++p) ext.set(p, m, r.value[static_cast<size_t>(p)]);
        try {
            cur = uspenskii_extend(cur, ext);
        } catch (const DomainError& e) {
            throw DomainError("bad-extension", e.what(), {{"index", i}});
        }
    }
    return cur;
}

FiniteAction action_sum(const FiniteAction& pi, const FiniteAction& sigma) {
    if (!same_group(pi.group, sigma.group))
        throw DomainError("group-mismatch", "action_sum needs one group acting on both blocks");
    require_valid(pi, "pi");
    require_valid(sigma, "sigma");
    GlueResult glue = disjoint_sum(pi.space, sigma.space);
    const int n = glue.space.size();
    std::vector<std::vector<int>> maps;
    for (int t = 0; t < generator_count(pi.group); ++t) {
        std::vector<int> m(static_cast<size_t>(n));
        for (size_t i = 0; i < glue.x_image.size(); ++i)
            m[static_cast<size_t>(glue.x_image[i])] =
                glue.x_image[static_cast<size_t>(pi.gen_maps[static_cast<size_t>(t)][i])];
        for (size_t j = 0; j < glue.y_image.size(); ++j)
            m[static_cast<size_t>(glue.y_image[j])] =
                glue.y_image[static_cast<size_t>(sigma.gen_maps[static_cast<size_t>(t)][j])];
        maps.push_back(std::move(m));
    }
    return FiniteAction{pi.group, std::move(glue.space), std::move(maps)};
}

ActionGlueResult amalgamate_over_invariant(const FiniteAction& sigma, const FiniteAction& tau,
                                           const FiniteAction& pi) {
    if (!same_group(sigma.group, tau.group) || !same_group(sigma.group, pi.group))
        throw DomainError("group-mismatch", "all three actions must share one group");
    require_valid(sigma, "sigma");
    require_valid(tau, "tau");
    require_valid(pi, "pi");
    const FinMetric& b = sigma.space;
    const FinMetric& x = tau.space;
    const FinMetric& y = pi.space;
    const int nb = b.size();
    std::vector<int> into_x(static_cast<size_t>(nb)), into_y(static_cast<size_t>(nb));
    for (int bi = 0; bi < nb; ++bi) {
        into_x[static_cast<size_t>(bi)] = x.index_of(b.points[static_cast<size_t>(bi)]);
        into_y[static_cast<size_t>(bi)] = y.index_of(b.points[static_cast<size_t>(bi)]);
        if (into_x[static_cast<size_t>(bi)] < 0 || into_y[static_cast<size_t>(bi)] < 0)
            throw DomainError("bad-embedding", "both spaces must contain the common part",
                              {{"point", b.points[static_cast<size_t>(bi)]}});
    }
    std::vector<int> x_to_b(static_cast<size_t>(x.size()), -1), y_to_b(static_cast<size_t>(y.size()), -1);
    for (int bi = 0; bi < nb; ++bi) {
        x_to_b[static_cast<size_t>(into_x[static_cast<size_t>(bi)])] = bi;
        y_to_b[static_cast<size_t>(into_y[static_cast<size_t>(bi)])] = bi;
    }
    const int gens = generator_count(sigma.group);
    for (int t = 0; t < gens; ++t)
        for (int bi = 0; bi < nb; ++bi) {
            int xi = tau.gen_maps[static_cast<size_t>(t)][static_cast<size_t>(into_x[static_cast<size_t>(bi)])];
            int yi = pi.gen_maps[static_cast<size_t>(t)][static_cast<size_t>(into_y[static_cast<size_t>(bi)])];
            if (x_to_b[static_cast<size_t>(xi)] < 0 || y_to_b[static_cast<size_t>(yi)] < 0)
                throw DomainError("not-invariant",
                                  "generator " + gen_label(sigma.group, t) +
                                      " moves the common part off itself",
                                  {{"point", b.points[static_cast<size_t>(bi)]}});
            int want = sigma.gen_maps[static_cast<size_t>(t)][static_cast<size_t>(bi)];
            if (x_to_b[static_cast<size_t>(xi)] != want || y_to_b[static_cast<size_t>(yi)] != want)
                throw DomainError("restriction-mismatch",
                                  "generator " + gen_label(sigma.group, t) +
                                      " disagrees with the common action at " +
                                      b.points[static_cast<size_t>(bi)],
                                  {{"point", b.points[static_cast<size_t>(bi)]}});
        }
    GlueResult glue = free_amalgam(x, y, b, into_x, into_y);
    const int n = glue.space.size();
    std::vector<std::vector<int>> maps;
    for (int t = 0; t < gens; ++t) {
        std::vector<int> m(static_cast<size_t>(n), -1);
        for (size_t i = 0; i < glue.x_image.size(); ++i)
            m[static_cast<size_t>(glue.x_image[i])] =
                glue.x_image[static_cast<size_t>(tau.gen_maps[static_cast<size_t>(t)][i])];
        for (size_t j = 0; j < glue.y_image.size(); ++j)
            m[static_cast<size_t>(glue.y_image[j])] =
                glue.y_image[static_cast<size_t>(pi.gen_maps[static_cast<size_t>(t)][j])];
        maps.push_back(std::move(m));
    }
    return ActionGlueResult{FiniteAction{sigma.group, std::move(glue.space), std::move(maps)},
                            std::move(glue.x_image), std::move(glue.y_image)};
}

namespace {

// Shared quotient step of globalize: merge zero classes of the pair
// pseudometric, name representatives, transport the translation maps, and
// reject metric failures, blaming the cap only when it was actually used.
struct PairWorld {
    const FinMetric* y = nullptr;
    int window = 0;
    std::vector<Rat> pd;  // (|Y| * window)^2 row-major pair distances
    bool used_cap = false;
    std::vector<std::vector<int>> pair_gen_maps;
    int identity_slot = 0;
    std::vector<std::string> slot_names;
};

GlobalizeResult finish_globalize(const GroupSpec& group, PairWorld w) {
    const int ny = w.y->size();
    const int np = ny * w.window;
    auto pd = [&](int p, int q) -> const Rat& { return w.pd[static_cast<size_t>(p) * np + q]; };

    std::vector<int> parent(static_cast<size_t>(np));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int v) -> int {
        while (parent[static_cast<size_t>(v)] != v) {
            parent[static_cast<size_t>(v)] = parent[static_cast<size_t>(parent[static_cast<size_t>(v)])];
            v = parent[static_cast<size_t>(v)];
        }
        return v;
    };
    for (int p = 0; p < np; ++p)
        for (int q = p + 1; q < np; ++q)
            if (pd(p, q) == Rat(0)) {
                int rp = find(p), rq = find(q);
                if (rp != rq) parent[static_cast<size_t>(std::max(rp, rq))] = std::min(rp, rq);
            }

    // classes indexed by their least pair, in pair order
    std::vector<int> class_of(static_cast<size_t>(np), -1);
    std::vector<int> reps;
    for (int p = 0; p < np; ++p) {
        int r = find(p);
        if (class_of[static_cast<size_t>(r)] < 0) {
            class_of[static_cast<size_t>(r)] = static_cast<int>(reps.size());
            reps.push_back(r);
        }
        class_of[static_cast<size_t>(p)] = class_of[static_cast<size_t>(r)];
    }

    std::vector<std::string> ids;
    for (int r : reps) {
        int yi = r / w.window, slot = r % w.window;
        std::string want;
        if (slot == w.identity_slot) {
            want = w.y->points[static_cast<size_t>(yi)];
        } else {
            // a class through the identity slot keeps that Y id instead
            int alt = -1;
            for (int p = 0; p < np && alt < 0; ++p)
                if (p % w.window == w.identity_slot && class_of[static_cast<size_t>(p)] == class_of[static_cast<size_t>(r)])
                    alt = p / w.window;
            want = alt >= 0 ? w.y->points[static_cast<size_t>(alt)]
                            : w.y->points[static_cast<size_t>(yi)] + "@" +
                                  w.slot_names[static_cast<size_t>(slot)];
        }
        ids.push_back(mint_point_id(ids, want));
    }

    FinMetric z(ids);
    for (size_t ci = 0; ci < reps.size(); ++ci)
        for (size_t cj = ci + 1; cj < reps.size(); ++cj)
            z.set(static_cast<int>(ci), static_cast<int>(cj), pd(reps[ci], reps[cj]));
    if (auto v = validate_metric(z)) {
        if (w.used_cap)
            throw DomainError("cap-too-small", "cap breaks the quotient metric: " + v->message,
                              {{"witness", v->witness}});
        throw std::logic_error("globalize quotient is not a metric: " + v->message);
    }

    std::vector<std::vector<int>> maps;
    for (const auto& pm : w.pair_gen_maps) {
        std::vector<int> m(reps.size(), -1);
        for (int p = 0; p < np; ++p) {
            int from = class_of[static_cast<size_t>(p)];
            int to = class_of[static_cast<size_t>(pm[static_cast<size_t>(p)])];
            if (m[static_cast<size_t>(from)] >= 0 && m[static_cast<size_t>(from)] != to)
                throw std::logic_error("globalize action does not factor through the quotient");
            m[static_cast<size_t>(from)] = to;
        }
        maps.push_back(std::move(m));
    }

    std::vector<int> y_image(static_cast<size_t>(ny));
    for (int yi = 0; yi < ny; ++yi)
        y_image[static_cast<size_t>(yi)] = class_of[static_cast<size_t>(yi * w.window + w.identity_slot)];
    return GlobalizeResult{FiniteAction{group, std::move(z), std::move(maps)}, std::move(y_image),
                           w.window};
}

}  // namespace

GlobalizeResult globalize_subgroup_action(const FiniteAction& pi, const FiniteAction& sigma,
                                          const SubgroupSpec& lambda, const Rat& cap) {
    require_valid(pi, "pi");
    require_valid(sigma, "sigma");
    if (!(Rat(0) < cap)) throw DomainError("bad-cap", "cap must be positive");
    const FinMetric& x = pi.space;
    const FinMetric& y = sigma.space;
    const int nx = x.size();
    const int ny = y.size();
    if (ny == 0) throw DomainError("empty-part", "the subgroup action needs a nonempty space");
    std::vector<int> x_in_y(static_cast<size_t>(nx));
    std::vector<int> y_to_x(static_cast<size_t>(ny), -1);
    for (int i = 0; i < nx; ++i) {
        int idx = y.index_of(x.points[static_cast<size_t>(i)]);
        if (idx < 0)
            throw DomainError("bad-embedding", "the big space is missing point " + x.points[static_cast<size_t>(i)]);
        x_in_y[static_cast<size_t>(i)] = idx;
        y_to_x[static_cast<size_t>(idx)] = i;
    }
    for (int i = 0; i < nx; ++i)
        for (int j = i + 1; j < nx; ++j)
            if (y.at(x_in_y[static_cast<size_t>(i)], x_in_y[static_cast<size_t>(j)]) != x.at(i, j))
                throw DomainError("bad-embedding",
                                  "the small space does not sit isometrically: " +
                                      x.points[static_cast<size_t>(i)] + ", " +
                                      x.points[static_cast<size_t>(j)]);

    PairWorld w;
    w.y = &y;

    if (pi.group.variant == GroupSpec::Variant::finite_table) {
        const FiniteTable& t = pi.group.table;
        std::vector<int> lam = lambda.elements;
        std::sort(lam.begin(), lam.end());
        lam.erase(std::unique(lam.begin(), lam.end()), lam.end());
        if (lam.empty() || lam.front() < 0 || lam.back() >= t.size())
            throw DomainError("bad-subgroup", "subgroup elements out of range");
        if (table_closure(t, lam) != lam)
            throw DomainError("bad-subgroup", "subgroup list is not closed");
        if (sigma.group.variant != GroupSpec::Variant::finite_table ||
            sigma.group.table.size() != static_cast<int>(lam.size()))
            throw DomainError("bad-subgroup", "subgroup action group must be the listed subgroup");
        const FiniteTable& lt = sigma.group.table;
        std::vector<int> lam_to_gamma(static_cast<size_t>(lt.size()), -1);
        for (int li = 0; li < lt.size(); ++li) {
            for (int g : lam)
                if (t.elements[static_cast<size_t>(g)] == lt.elements[static_cast<size_t>(li)])
                    lam_to_gamma[static_cast<size_t>(li)] = g;
            if (lam_to_gamma[static_cast<size_t>(li)] < 0)
                throw DomainError("bad-subgroup", "subgroup element " + lt.elements[static_cast<size_t>(li)] +
                                                      " is not in the ambient list");
        }
        for (int li = 0; li < lt.size(); ++li)
            for (int lj = 0; lj < lt.size(); ++lj)
                if (t.mul(lam_to_gamma[static_cast<size_t>(li)], lam_to_gamma[static_cast<size_t>(lj)]) !=
                    lam_to_gamma[static_cast<size_t>(lt.mul(li, lj))])
                    throw DomainError("bad-subgroup", "subgroup products disagree with the ambient table");

        auto pi_elem = element_maps(pi);
        auto sig_elem = element_maps(sigma);
        std::vector<int> gamma_to_lam(static_cast<size_t>(t.size()), -1);
        for (int li = 0; li < lt.size(); ++li)
            gamma_to_lam[static_cast<size_t>(lam_to_gamma[static_cast<size_t>(li)])] = li;
        // the subgroup action extends pi on X, elementwise
        for (int li = 0; li < lt.size(); ++li) {
            const auto& sp = sig_elem[static_cast<size_t>(li)];
            const auto& pp = pi_elem[static_cast<size_t>(lam_to_gamma[static_cast<size_t>(li)])];
            for (int i = 0; i < nx; ++i)
                if (sp[static_cast<size_t>(x_in_y[static_cast<size_t>(i)])] !=
                    x_in_y[static_cast<size_t>(pp[static_cast<size_t>(i)])])
                    throw DomainError("restriction-mismatch",
                                      "subgroup element " + lt.elements[static_cast<size_t>(li)] +
                                          " disagrees with the ambient action at " +
                                          x.points[static_cast<size_t>(i)]);
        }

        const int W = t.size();
        w.window = W;
        w.identity_slot = t.identity;
        w.slot_names = t.elements;
        const int np = ny * W;
        w.pd.assign(static_cast<size_t>(np) * np, Rat(0));
        for (int p = 0; p < np; ++p)
            for (int q = p + 1; q < np; ++q) {
                int y1 = p / W, g1 = p % W, y2 = q / W, g2 = q % W;
                int rel = t.mul(t.inverse[static_cast<size_t>(g2)], g1);
                Rat d(0);
                if (gamma_to_lam[static_cast<size_t>(rel)] >= 0) {
                    const auto& sp = sig_elem[static_cast<size_t>(gamma_to_lam[static_cast<size_t>(rel)])];
                    d = y.at(sp[static_cast<size_t>(y1)], y2);
                } else if (y_to_x[static_cast<size_t>(y1)] >= 0 && y_to_x[static_cast<size_t>(y2)] >= 0) {
                    const auto& pp = pi_elem[static_cast<size_t>(rel)];
                    d = y.at(x_in_y[static_cast<size_t>(pp[static_cast<size_t>(y_to_x[static_cast<size_t>(y1)])])], y2);
                } else if (nx == 0) {
                    d = cap;
                    w.used_cap = true;
                } else {
                    const auto& inv1 = pi_elem[static_cast<size_t>(t.inverse[static_cast<size_t>(g1)])];
                    const auto& inv2 = pi_elem[static_cast<size_t>(t.inverse[static_cast<size_t>(g2)])];
                    bool first = true;
                    for (int xi = 0; xi < nx; ++xi) {
                        Rat cand = y.at(y1, x_in_y[static_cast<size_t>(inv1[static_cast<size_t>(xi)])]) +
                                   y.at(x_in_y[static_cast<size_t>(inv2[static_cast<size_t>(xi)])], y2);
                        if (first || cand < d) d = cand;
                        first = false;
                    }
                }
                w.pd[static_cast<size_t>(p) * np + q] = d;
                w.pd[static_cast<size_t>(q) * np + p] = d;
            }
        for (int s : pi.group.generators) {
            std::vector<int> m(static_cast<size_t>(np));
            for (int p = 0; p < np; ++p) m[static_cast<size_t>(p)] = (p / W) * W + t.mul(s, p % W);
            w.pair_gen_maps.push_back(std::move(m));
        }
        return finish_globalize(pi.group, std::move(w));
    }

    if (pi.group.variant != GroupSpec::Variant::free_abelian || pi.group.rank != 1)
        throw DomainError("bad-group", "globalize supports finite tables and Z only");
    if (sigma.group.variant != GroupSpec::Variant::free_abelian || sigma.group.rank != 1)
        throw DomainError("bad-subgroup", "the subgroup of Z must act as Z");
    if (!lambda.elements.empty())
        throw DomainError("bad-subgroup", "element lists are for finite tables; use z_index");
    const int m = lambda.z_index;
    if (m < 1)
        throw DomainError("bad-subgroup",
                          "Z mode needs index m >= 1; the trivial subgroup has infinite index");
    const auto& P = pi.gen_maps[0];
    const auto& S = sigma.gen_maps[0];
    // the subgroup generator is the m-th power of the ambient one on X
    auto Pm = perm_power(P, m);
    for (int i = 0; i < nx; ++i)
        if (S[static_cast<size_t>(x_in_y[static_cast<size_t>(i)])] !=
            x_in_y[static_cast<size_t>(Pm[static_cast<size_t>(i)])])
            throw DomainError("restriction-mismatch",
                              "the subgroup generator disagrees with the m-th ambient power at " +
                                  x.points[static_cast<size_t>(i)]);

    w.window = m;
    w.identity_slot = 0;
    for (int i = 0; i < m; ++i) w.slot_names.push_back(std::to_string(i));
    std::vector<std::vector<int>> pw(static_cast<size_t>(2 * m - 1));
    for (int e = -(m - 1); e <= m - 1; ++e) pw[static_cast<size_t>(e + m - 1)] = perm_power(P, e);
    auto pxp = [&](int e) -> const std::vector<int>& { return pw[static_cast<size_t>(e + m - 1)]; };
    const int np = ny * m;
    w.pd.assign(static_cast<size_t>(np) * np, Rat(0));
    for (int p = 0; p < np; ++p)
        for (int q = p + 1; q < np; ++q) {
            int y1 = p / m, g1 = p % m, y2 = q / m, g2 = q % m;
            Rat d(0);
            if (g1 == g2) {
                d = y.at(y1, y2);
            } else if (y_to_x[static_cast<size_t>(y1)] >= 0 && y_to_x[static_cast<size_t>(y2)] >= 0) {
                const auto& pp = pxp(g1 - g2);
                d = y.at(x_in_y[static_cast<size_t>(pp[static_cast<size_t>(y_to_x[static_cast<size_t>(y1)])])], y2);
            } else if (nx == 0) {
                d = cap;
                w.used_cap = true;
            } else {
                const auto& inv1 = pxp(-g1);
                const auto& inv2 = pxp(-g2);
                bool first = true;
                for (int xi = 0; xi < nx; ++xi) {
                    Rat cand = y.at(y1, x_in_y[static_cast<size_t>(inv1[static_cast<size_t>(xi)])]) +
                               y.at(x_in_y[static_cast<size_t>(inv2[static_cast<size_t>(xi)])], y2);
                    if (first || cand < d) d = cand;
                    first = false;
                }
            }
            w.pd[static_cast<size_t>(p) * np + q] = d;
            w.pd[static_cast<size_t>(q) * np + p] = d;
        }
    std::vector<int> tmap(static_cast<size_t>(np));
    for (int p = 0; p < np; ++p) {
        int yi = p / m, slot = p % m;
        tmap[static_cast<size_t>(p)] =
            slot + 1 < m ? yi * m + slot + 1 : S[static_cast<size_t>(yi)] * m;
    }
    w.pair_gen_maps.push_back(std::move(tmap));
    return finish_globalize(pi.group, std::move(w));
}

RootResult nth_root_extension(const FiniteAction& act, int m, int n) {
    if (act.group.variant != GroupSpec::Variant::free_abelian || act.group.rank != 1)
        throw DomainError("bad-group", "nth_root_extension needs an action of Z");
    require_valid(act, "act");
    if (m < 1) throw DomainError("bad-size", "level count must be >= 1", {{"m", m}});
    if (n < 1) throw DomainError("bad-size", "distance bound must be >= 1", {{"n", n}});
    const FinMetric& b = act.space;
    const int nb = b.size();
    if (nb == 0) throw DomainError("empty-part", "cannot stack an empty space");
    std::vector<int> all(static_cast<size_t>(nb));
    std::iota(all.begin(), all.end(), 0);
    Rat c = std::min(Rat(n), std::max(diameter(b, all), Rat(1)));

    std::vector<std::string> ids(b.points);
    for (int lvl = 1; lvl < m; ++lvl)
        for (int j = 0; j < nb; ++j)
            ids.push_back(mint_point_id(ids, b.points[static_cast<size_t>(j)] + "@" + std::to_string(lvl)));
    FinMetric cm(ids);
    for (int l1 = 0; l1 < m; ++l1)
        for (int l2 = l1; l2 < m; ++l2)
            for (int j1 = 0; j1 < nb; ++j1)
                for (int j2 = 0; j2 < nb; ++j2) {
                    int p = l1 * nb + j1, q = l2 * nb + j2;
                    if (p >= q) continue;
                    cm.set(p, q, l1 == l2 ? b.at(j1, j2) : c);
                }

    const auto& g = act.gen_maps[0];
    std::vector<int> shift(static_cast<size_t>(m) * nb);
    for (int lvl = 0; lvl < m; ++lvl)
        for (int j = 0; j < nb; ++j)
            shift[static_cast<size_t>(lvl * nb + j)] =
                lvl + 1 < m ? (lvl + 1) * nb + j : g[static_cast<size_t>(j)];
    std::vector<int> b_image(static_cast<size_t>(nb));
    std::iota(b_image.begin(), b_image.end(), 0);
    return RootResult{std::move(cm), std::move(shift), std::move(b_image)};
}

std::optional<std::vector<int>> conjugacy_search(const FiniteAction& a, const FiniteAction& b) {
    if (!same_group(a.group, b.group))
        throw DomainError("group-mismatch", "conjugacy_search needs a common group");
    require_valid(a, "first action");
    require_valid(b, "second action");
    const int n = a.space.size();
    if (b.space.size() != n) return std::nullopt;
    if (n == 0) return std::vector<int>{};
    const int gens = generator_count(a.group);

    auto cycle_len = [](const std::vector<int>& p, int i) {
        int len = 1;
        for (int j = p[static_cast<size_t>(i)]; j != i; j = p[static_cast<size_t>(j)]) ++len;
        return len;
    };
    using Sig = std::pair<std::vector<Rat>, std::vector<int>>;
    auto signature = [&](const FiniteAction& act, int i) {
        std::vector<Rat> row;
        for (int j = 0; j < n; ++j) row.push_back(act.space.at(i, j));
        std::sort(row.begin(), row.end());
        std::vector<int> cyc;
        for (int t = 0; t < gens; ++t) cyc.push_back(cycle_len(act.gen_maps[static_cast<size_t>(t)], i));
        return Sig{std::move(row), std::move(cyc)};
    };
    std::vector<Sig> sa, sb;
    for (int i = 0; i < n; ++i) sa.push_back(signature(a, i));
    for (int j = 0; j < n; ++j) sb.push_back(signature(b, j));

    std::vector<std::vector<int>> a_inv, b_inv;
    for (int t = 0; t < gens; ++t) {
        a_inv.push_back(inverse_perm(a.gen_maps[static_cast<size_t>(t)]));
        b_inv.push_back(inverse_perm(b.gen_maps[static_cast<size_t>(t)]));
    }

    std::vector<int> k(static_cast<size_t>(n), -1);
    std::vector<char> used(static_cast<size_t>(n), 0);

    // forced closure under generator maps; trail records assignments to undo
    std::function<bool(int, int, std::vector<int>&)> place = [&](int i, int j,
                                                                 std::vector<int>& trail) -> bool {
        if (k[static_cast<size_t>(i)] >= 0) return k[static_cast<size_t>(i)] == j;
        if (used[static_cast<size_t>(j)]) return false;
        if (sa[static_cast<size_t>(i)] != sb[static_cast<size_t>(j)]) return false;
        for (int u = 0; u < n; ++u)
            if (k[static_cast<size_t>(u)] >= 0 &&
                a.space.at(i, u) != b.space.at(j, k[static_cast<size_t>(u)]))
                return false;
        k[static_cast<size_t>(i)] = j;
        used[static_cast<size_t>(j)] = 1;
        trail.push_back(i);
        for (int t = 0; t < gens; ++t) {
            if (!place(a.gen_maps[static_cast<size_t>(t)][static_cast<size_t>(i)],
                       b.gen_maps[static_cast<size_t>(t)][static_cast<size_t>(j)], trail))
                return false;
            if (!place(a_inv[static_cast<size_t>(t)][static_cast<size_t>(i)],
                       b_inv[static_cast<size_t>(t)][static_cast<size_t>(j)], trail))
                return false;
        }
        return true;
    };

    std::function<bool()> dfs = [&]() -> bool {
        int i = -1;
        for (int u = 0; u < n && i < 0; ++u)
            if (k[static_cast<size_t>(u)] < 0) i = u;
        if (i < 0) return true;
        for (int j = 0; j < n; ++j) {
            if (used[static_cast<size_t>(j)]) continue;
            std::vector<int> trail;
            if (place(i, j, trail) && dfs()) return true;
            for (int u : trail) {
                used[static_cast<size_t>(k[static_cast<size_t>(u)])] = 0;
                k[static_cast<size_t>(u)] = -1;
            }
        }
        return false;
    };

    if (!dfs()) return std::nullopt;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (a.space.at(i, j) != b.space.at(k[static_cast<size_t>(i)], k[static_cast<size_t>(j)]))
                throw std::logic_error("conjugacy witness fails the distance check");
    for (int t = 0; t < gens; ++t)
        for (int i = 0; i < n; ++i)
            if (k[static_cast<size_t>(a.gen_maps[static_cast<size_t>(t)][static_cast<size_t>(i)])] !=
                b.gen_maps[static_cast<size_t>(t)][static_cast<size_t>(k[static_cast<size_t>(i)])])
                throw std::logic_error("conjugacy witness fails equivariance");
    return k;
}

}  // namespace forge
