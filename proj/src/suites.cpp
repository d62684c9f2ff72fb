#include "forge/suites.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <variant>

#include "forge/action.hpp"
#include "forge/errors.hpp"
#include "forge/extension_search.hpp"
#include "forge/group.hpp"
#include "forge/metric.hpp"
#include "forge/separability.hpp"
#include "forge/testgen.hpp"
#include "forge/urysohn.hpp"

namespace forge {

namespace {

std::vector<int> range_vec(int n) {
    std::vector<int> v(static_cast<size_t>(n));
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// Superspace of b grown by `extra` realizing points; stays inside dset.
FinMetric grow_space(std::mt19937_64& rng, const FinMetric& b, int extra, const DistanceSet& dset) {
    FinMetric m = b;
    for (int t = 0; t < extra; ++t) {
        const KatetovFn r = random_katetov(rng, m, range_vec(m.size()), dset.values);
        m = add_realizing_point(m, r, dset, "u" + std::to_string(t));
    }
    return m;
}

bool isometry_between(const FinMetric& a, const FinMetric& b, const std::vector<int>& map_ab) {
    for (int i = 0; i < a.size(); ++i)
        for (int j = 0; j < a.size(); ++j)
            if (a.at(i, j) != b.at(map_ab[static_cast<size_t>(i)], map_ab[static_cast<size_t>(j)]))
                return false;
    return true;
}

// ---- metric-core ----

bool prop_random_spaces_validate(std::mt19937_64& rng) {
    const std::vector<Rat> pool = grid_pool(2, 8);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + static_cast<int>(rng() % 5);
        if (validate_metric(random_space(rng, n, pool))) return false;
    }
    return true;
}

bool prop_katetov_samples_admissible(std::mt19937_64& rng) {
    const std::vector<Rat> pool = grid_pool(2, 8);
    for (int t = 0; t < 30; ++t) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const FinMetric m = random_space(rng, n, pool);
        const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        const KatetovFn r = random_katetov(rng, m, random_subset(rng, n, k), pool);
        if (!katetov_check(m, r)) return false;
    }
    return true;
}

bool prop_truncation_respects_subset(std::mt19937_64& rng) {
    const std::vector<Rat> pool = grid_pool(1, 6);
    for (int t = 0; t < 20; ++t) {
        const int n = 3 + static_cast<int>(rng() % 3);
        const FinMetric m = random_space(rng, n, pool);
        const std::vector<int> sub = random_subset(rng, n, 2 + static_cast<int>(rng() % 2));
        const FinMetric cut = truncate_metric(m, sub);
        if (validate_metric(cut)) return false;
        const Rat cap = diameter(m, sub);
        for (size_t i = 0; i < sub.size(); ++i)
            for (size_t j = 0; j < sub.size(); ++j)
                if (cut.at(sub[i], sub[j]) != m.at(sub[i], sub[j])) return false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (cut.at(i, j) > cap || cut.at(i, j) < Rat(0)) return false;
    }
    return true;
}

bool prop_amalgams_restrict_isometrically(std::mt19937_64& rng) {
    const DistanceSet dset = DistanceSet::integer_range(4);
    for (int t = 0; t < 15; ++t) {
        const int k = 1 + static_cast<int>(rng() % 3);
        const FinMetric b = random_space(rng, k, dset.values);
        const FinMetric x = grow_space(rng, b, 1 + static_cast<int>(rng() % 2), dset);
        const FinMetric y = grow_space(rng, b, 1 + static_cast<int>(rng() % 2), dset);
        const GlueResult glue = free_amalgam(x, y, b, range_vec(k), range_vec(k));
        if (validate_metric(glue.space)) return false;
        if (!isometry_between(x, glue.space, glue.x_image)) return false;
        if (!isometry_between(y, glue.space, glue.y_image)) return false;
        for (int i = 0; i < k; ++i)
            if (glue.x_image[static_cast<size_t>(i)] != glue.y_image[static_cast<size_t>(i)])
                return false;
    }
    return true;
}

bool prop_sums_keep_parts_apart(std::mt19937_64& rng) {
    const std::vector<Rat> pool = grid_pool(2, 8);
    for (int t = 0; t < 15; ++t) {
        const FinMetric x = random_space(rng, 2 + static_cast<int>(rng() % 3), pool);
        const FinMetric y = random_space(rng, 2 + static_cast<int>(rng() % 3), pool);
        const GlueResult glue = disjoint_sum(x, y);
        if (validate_metric(glue.space)) return false;
        if (!isometry_between(x, glue.space, glue.x_image)) return false;
        if (!isometry_between(y, glue.space, glue.y_image)) return false;
        const Rat cross = glue.space.at(glue.x_image[0], glue.y_image[0]);
        for (const int xi : glue.x_image)
            for (const int yj : glue.y_image)
                if (glue.space.at(xi, yj) != cross) return false;
    }
    return true;
}

// ---- urysohn ----

const SaturationLevel& level_two() {
    static const SaturationLevel s = saturate(DistanceSet::integer_range(2), 2, 2000);
    return s;
}

bool prop_saturation_certificate(std::mt19937_64&) {
    const SaturationLevel& s = level_two();
    return check_saturation(s.space, s.dset, s.k).empty() && !validate_metric(s.space);
}

bool prop_realizing_points_hit_exact_distances(std::mt19937_64& rng) {
    const SaturationLevel& s = level_two();
    for (int t = 0; t < 20; ++t) {
        const int k = 1 + static_cast<int>(rng() % 3);
        const KatetovFn r = random_katetov(rng, s.space, random_subset(rng, s.space.size(), k),
                                           s.dset.values);
        const FinMetric grown = add_realizing_point(s.space, r, s.dset, "w");
        if (validate_metric(grown)) return false;
        const int w = grown.size() - 1;
        for (size_t i = 0; i < r.anchor.size(); ++i)
            if (grown.at(w, r.anchor[i]) != r.value[i]) return false;
    }
    return true;
}

bool prop_partial_isometries_walk(std::mt19937_64& rng) {
    const SaturationLevel& s = level_two();
    const int n = s.space.size();
    for (int t = 0; t < 20; ++t) {
        const int a = static_cast<int>(rng() % static_cast<unsigned>(n));
        const int b = static_cast<int>(rng() % static_cast<unsigned>(n));
        int c = static_cast<int>(rng() % static_cast<unsigned>(n));
        int d = static_cast<int>(rng() % static_cast<unsigned>(n));
        if ((a == b) != (c == d) || s.space.at(a, b) != s.space.at(c, d)) {
            c = a;
            d = b;
        }
        PartialIsometry p{{a}, {c}};
        if (b != a) {
            p.dom.push_back(b);
            p.img.push_back(d);
        }
        int target = static_cast<int>(rng() % static_cast<unsigned>(n));
        while (std::find(p.dom.begin(), p.dom.end(), target) != p.dom.end())
            target = (target + 1) % n;
        const PartialIsometry q = extend_partial_isometry(s, p, {target});
        if (q.dom.size() != p.dom.size() + 1) return false;
        for (size_t i = 0; i < q.dom.size(); ++i)
            for (size_t j = 0; j < q.dom.size(); ++j)
                if (s.space.at(q.dom[i], q.dom[j]) != s.space.at(q.img[i], q.img[j])) return false;
    }
    return true;
}

// ---- group-core ----

bool prop_free_ball_sizes(std::mt19937_64&) {
    // Rank 2 free: 2 * 3^r - 1 elements of length <= r.
    long long expect = 1;
    long long layer = 1;
    for (int r = 0; r <= 4; ++r) {
        if (static_cast<long long>(ball(make_free(2), r).size()) != expect) return false;
        layer *= 3;
        expect = 2 * layer - 1;
    }
    // Rank 2 free abelian: the diamond count 2r^2 + 2r + 1.
    for (int r = 0; r <= 4; ++r) {
        const long long want = 2LL * r * r + 2 * r + 1;
        if (static_cast<long long>(ball(make_free_abelian(2), r).size()) != want) return false;
    }
    return true;
}

bool prop_word_strings_round_trip(std::mt19937_64& rng) {
    for (int t = 0; t < 40; ++t) {
        std::vector<int> letters;
        const int len = static_cast<int>(rng() % 7);
        for (int i = 0; i < len; ++i) {
            int l = 1 + static_cast<int>(rng() % 3);
            if (rng() % 2) l = -l;
            if (!letters.empty() && letters.back() == -l) l = -l;
            letters.push_back(l);
        }
        const Word w = Word::from_letters(letters);
        if (parse_free_word(format_free_word(w), 3) != w) return false;
    }
    return true;
}

bool prop_cyclic_tables_are_groups(std::mt19937_64& rng) {
    for (int t = 0; t < 10; ++t) {
        const int m = 2 + static_cast<int>(rng() % 7);
        const FiniteTable& tab = make_cyclic(m).table;
        for (int reps = 0; reps < 20; ++reps) {
            const int a = static_cast<int>(rng() % static_cast<unsigned>(m));
            const int b = static_cast<int>(rng() % static_cast<unsigned>(m));
            const int c = static_cast<int>(rng() % static_cast<unsigned>(m));
            if (tab.mul(tab.mul(a, b), c) != tab.mul(a, tab.mul(b, c))) return false;
            if (tab.mul(a, tab.inverse[static_cast<size_t>(a)]) != tab.identity) return false;
            if (tab.mul(tab.identity, a) != a) return false;
        }
    }
    return true;
}

bool prop_table_closures_are_subgroups(std::mt19937_64& rng) {
    const FiniteTable tab = make_cyclic(12).table;
    for (int t = 0; t < 10; ++t) {
        std::vector<int> seeds;
        for (int i = 0, k = 1 + static_cast<int>(rng() % 2); i < k; ++i)
            seeds.push_back(static_cast<int>(rng() % 12));
        const std::vector<int> sub = table_closure(tab, seeds);
        const std::set<int> inside(sub.begin(), sub.end());
        for (const int s : seeds)
            if (!inside.count(s)) return false;
        if (!inside.count(tab.identity)) return false;
        for (const int a : sub) {
            if (!inside.count(tab.inverse[static_cast<size_t>(a)])) return false;
            for (const int b : sub)
                if (!inside.count(tab.mul(a, b))) return false;
        }
    }
    return true;
}

// ---- action-ops ----

std::vector<int> random_perm(std::mt19937_64& rng, int n) {
    std::vector<int> p = range_vec(n);
    std::shuffle(p.begin(), p.end(), rng);
    return p;
}

int perm_order(const std::vector<int>& p) {
    int order = 1;
    std::vector<int> cur = p;
    while (cur != range_vec(static_cast<int>(p.size()))) {
        std::vector<int> next(p.size());
        for (size_t i = 0; i < p.size(); ++i) next[i] = p[static_cast<size_t>(cur[i])];
        cur = std::move(next);
        ++order;
    }
    return order;
}

FinMetric equilateral(int n, const Rat& c) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    FinMetric m(std::move(ids));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) m.set(i, j, c);
    return m;
}

// Cyclic-group action by one random permutation on an equilateral space.
FiniteAction random_perm_action(std::mt19937_64& rng, int max_points) {
    const int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(max_points - 1));
    const std::vector<int> p = random_perm(rng, n);
    FiniteAction act{make_cyclic(perm_order(p)), equilateral(n, Rat(1 + static_cast<int>(rng() % 3))),
                     {p}};
    return act;
}

bool prop_perm_actions_validate(std::mt19937_64& rng) {
    for (int t = 0; t < 20; ++t)
        if (validate_action(random_perm_action(rng, 5))) return false;
    return true;
}

bool prop_absorption_extends_the_action(std::mt19937_64& rng) {
    for (int t = 0; t < 12; ++t) {
        const FiniteAction act = random_perm_action(rng, 4);
        const int n = act.space.size();
        FinMetric ext(act.space.points);
        ext.points.push_back(mint_point_id(ext.points, "star"));
        ext.dist.assign(static_cast<size_t>(n + 1) * (n + 1), Rat(0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ext.at(i, j) = act.space.at(i, j);
        const Rat reach = n > 1 ? act.space.at(0, 1) : Rat(1);
        for (int i = 0; i < n; ++i) ext.set(i, n, reach);
        const FiniteAction big = uspenskii_extend(act, ext);
        if (validate_action(big)) return false;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                if (big.space.at(i, j) != act.space.at(i, j)) return false;
            if (big.gen_maps[0][static_cast<size_t>(i)] != act.gen_maps[0][static_cast<size_t>(i)])
                return false;
        }
        if (big.space.size() != n + static_cast<int>(act.group.table.elements.size()))
            return false;
    }
    return true;
}

bool prop_action_sums_restrict(std::mt19937_64& rng) {
    for (int t = 0; t < 12; ++t) {
        const FiniteAction pi = random_perm_action(rng, 4);
        // Conjugating keeps the permutation order, so the group still fits.
        FiniteAction sigma = pi;
        const std::vector<int> c = random_perm(rng, pi.space.size());
        for (size_t i = 0; i < c.size(); ++i)
            sigma.gen_maps[0][static_cast<size_t>(c[i])] =
                c[static_cast<size_t>(pi.gen_maps[0][i])];
        const FiniteAction sum = action_sum(pi, sigma);
        if (validate_action(sum)) return false;
        const int n = pi.space.size();
        for (int i = 0; i < n; ++i) {
            if (sum.gen_maps[0][static_cast<size_t>(i)] != pi.gen_maps[0][static_cast<size_t>(i)])
                return false;
            if (sum.gen_maps[0][static_cast<size_t>(n + i)] !=
                n + sigma.gen_maps[0][static_cast<size_t>(i)])
                return false;
        }
    }
    return true;
}

bool prop_roots_power_back(std::mt19937_64& rng) {
    for (int t = 0; t < 12; ++t) {
        const int n = 2 + static_cast<int>(rng() % 3);
        FiniteAction act{make_free_abelian(1), equilateral(n, Rat(2)), {random_perm(rng, n)}};
        const int m = 2 + static_cast<int>(rng() % 3);
        const RootResult root = nth_root_extension(act, m, 4);
        const FiniteAction lifted{act.group, root.space, {root.shift}};
        if (validate_action(lifted)) return false;
        for (int i = 0; i < n; ++i) {
            int y = root.b_image[static_cast<size_t>(i)];
            for (int reps = 0; reps < m; ++reps) y = root.shift[static_cast<size_t>(y)];
            if (y != root.b_image[static_cast<size_t>(act.gen_maps[0][static_cast<size_t>(i)])])
                return false;
        }
    }
    return true;
}

// ---- extension-search ----

bool prop_witnesses_carry_full_isometries(std::mt19937_64& rng) {
    const std::vector<Rat> pool{Rat(1), Rat(2)};
    for (int t = 0; t < 8; ++t) {
        const FinMetric a = random_space(rng, 3, pool);
        const int i = static_cast<int>(rng() % 3);
        const int j = static_cast<int>(rng() % 3);
        const PartialIsometry p{{i}, {j}};
        const SoleckiResult res = solecki_extend(a, {p}, {8, {}, 2'000'000});
        const auto* wit = std::get_if<SoleckiWitness>(&res);
        if (!wit) return false;
        if (validate_metric(wit->space)) return false;
        const std::vector<int>& full = wit->fulls[0];
        std::vector<int> sorted = full;
        std::sort(sorted.begin(), sorted.end());
        if (sorted != range_vec(wit->space.size())) return false;
        if (!isometry_between(wit->space, wit->space, full)) return false;
        if (full[static_cast<size_t>(i)] != j) return false;
        for (int b = 0; b < a.size(); ++b)
            for (int c = 0; c < a.size(); ++c)
                if (wit->space.at(b, c) != a.at(b, c)) return false;
    }
    return true;
}

bool prop_exhaustion_is_honest(std::mt19937_64&) {
    // Sending one of two points to the other forces a third point.
    FinMetric a(std::vector<std::string>{"x", "y"});
    a.set(0, 1, Rat(1));
    const PartialIsometry flip{{0}, {1}};
    const SoleckiResult tight = solecki_extend(a, {flip}, {2, {}, 2'000'000});
    const auto* ex = std::get_if<Exhausted>(&tight);
    if (!ex || ex->node_budget_hit) return false;
    const SoleckiResult loose = solecki_extend(a, {flip}, {3, {}, 2'000'000});
    const auto* wit = std::get_if<SoleckiWitness>(&loose);
    return wit && wit->space.size() == 3;
}

bool prop_rank_one_pins_match_plain_search(std::mt19937_64& rng) {
    const std::vector<Rat> pool{Rat(1), Rat(2)};
    for (int t = 0; t < 6; ++t) {
        const FinMetric a = random_space(rng, 2 + static_cast<int>(rng() % 2), pool);
        const int i = static_cast<int>(rng() % static_cast<unsigned>(a.size()));
        const int j = static_cast<int>(rng() % static_cast<unsigned>(a.size()));
        const SearchBudget budget{8, {}, 2'000'000};
        const SoleckiResult plain = solecki_extend(a, {PartialIsometry{{i}, {j}}}, budget);
        const ApproxResult pinned =
            approximate_action(make_free_abelian(1), a, AgreementConstraint{{i}, {{j}}}, budget);
        const auto* wit = std::get_if<SoleckiWitness>(&plain);
        const auto* act = std::get_if<FiniteAction>(&pinned);
        if (!wit || !act) return false;
        if (wit->space.points != act->space.points || wit->space.dist != act->space.dist)
            return false;
        if (wit->fulls[0] != act->gen_maps[0]) return false;
    }
    return true;
}

// ---- separability ----

bool lattice_brute_member(const Lattice& l, const std::vector<long long>& v, long long bound) {
    std::vector<long long> coeff(l.basis.size(), -bound);
    if (l.basis.empty()) return std::all_of(v.begin(), v.end(), [](long long x) { return x == 0; });
    while (true) {
        std::vector<long long> acc(static_cast<size_t>(l.rank), 0);
        for (size_t r = 0; r < l.basis.size(); ++r)
            for (size_t c = 0; c < acc.size(); ++c) acc[c] += coeff[r] * l.basis[r][c];
        if (acc == v) return true;
        size_t pos = coeff.size();
        while (pos > 0 && ++coeff[pos - 1] > bound) coeff[--pos] = -bound;
        if (pos == 0) return false;
    }
}

bool prop_lattice_membership_matches_enumeration(std::mt19937_64& rng) {
    for (int t = 0; t < 25; ++t) {
        std::vector<std::vector<long long>> rows;
        for (int r = 0, k = 1 + static_cast<int>(rng() % 2); r < k; ++r)
            rows.push_back({static_cast<long long>(rng() % 7) - 3,
                            static_cast<long long>(rng() % 7) - 3});
        const Lattice l = make_lattice(2, rows);
        const std::vector<long long> v{static_cast<long long>(rng() % 13) - 6,
                                       static_cast<long long>(rng() % 13) - 6};
        // Entries <= 3 and targets <= 6 keep every witness coefficient within
        // +-64 (Cramer for independent rows, Bezout along a shared line).
        if (lattice_member(l, v) != lattice_brute_member(l, v, 64)) return false;
    }
    return true;
}

bool prop_separating_moduli_exclude(std::mt19937_64& rng) {
    for (int t = 0; t < 25; ++t) {
        std::vector<std::vector<long long>> rows;
        for (int r = 0, k = 1 + static_cast<int>(rng() % 2); r < k; ++r)
            rows.push_back({static_cast<long long>(rng() % 7) - 3,
                            static_cast<long long>(rng() % 7) - 3});
        const Lattice l = make_lattice(2, rows);
        std::vector<long long> v{static_cast<long long>(rng() % 9) - 4,
                                 static_cast<long long>(rng() % 9) - 4};
        if (lattice_member(l, v)) continue;
        const long long m = lattice_separating_quotient(l, v);
        // Close the residue image of the lattice and check v's residue is outside.
        std::set<std::vector<long long>> image{{0, 0}};
        std::queue<std::vector<long long>> work;
        work.push({0, 0});
        while (!work.empty()) {
            const std::vector<long long> cur = work.front();
            work.pop();
            for (const auto& row : l.basis) {
                std::vector<long long> nxt(2);
                for (size_t c = 0; c < 2; ++c) nxt[c] = ((cur[c] + row[c]) % m + m) % m;
                if (image.insert(nxt).second) work.push(nxt);
            }
        }
        for (auto& x : v) x = (x % m + m) % m;
        if (image.count(v)) return false;
    }
    return true;
}

Word random_reduced(std::mt19937_64& rng, int rank, int len) {
    std::vector<int> letters;
    for (int i = 0; i < len; ++i) {
        int l = 1 + static_cast<int>(rng() % static_cast<unsigned>(rank));
        if (rng() % 2) l = -l;
        if (!letters.empty() && letters.back() == -l) l = -l;
        letters.push_back(l);
    }
    return Word::from_letters(letters);
}

std::set<std::vector<int>> subgroup_ball(const std::vector<Word>& gens, int cap) {
    std::set<std::vector<int>> seen{{}};
    std::queue<std::vector<int>> work;
    work.push({});
    while (!work.empty()) {
        const std::vector<int> cur = work.front();
        work.pop();
        for (const Word& g : gens)
            for (int sign = 0; sign < 2; ++sign) {
                std::vector<int> nxt = cur;
                std::vector<int> letters = g.letters;
                if (sign) {
                    std::reverse(letters.begin(), letters.end());
                    for (int& l : letters) l = -l;
                }
                for (const int l : letters) {
                    if (!nxt.empty() && nxt.back() == -l)
                        nxt.pop_back();
                    else
                        nxt.push_back(l);
                }
                if (static_cast<int>(nxt.size()) <= cap && seen.insert(nxt).second) work.push(nxt);
            }
    }
    return seen;
}

bool prop_graph_membership_matches_balls(std::mt19937_64& rng) {
    for (int t = 0; t < 12; ++t) {
        std::vector<Word> gens;
        for (int i = 0, k = 1 + static_cast<int>(rng() % 2); i < k; ++i)
            gens.push_back(random_reduced(rng, 2, 1 + static_cast<int>(rng() % 3)));
        const StallingsGraph g = stallings_graph(2, gens);
        const std::set<std::vector<int>> inside = subgroup_ball(gens, 8);
        for (const auto& w : inside)
            if (static_cast<int>(w.size()) <= 3 && !subgroup_member(g, Word::from_letters(w)))
                return false;
        for (int reps = 0; reps < 20; ++reps) {
            const Word w = random_reduced(rng, 2, static_cast<int>(rng() % 4));
            if (subgroup_member(g, w) != (inside.count(w.letters) > 0)) return false;
        }
    }
    return true;
}

bool prop_product_membership_accepts_factored_words(std::mt19937_64& rng) {
    for (int t = 0; t < 12; ++t) {
        std::vector<StallingsGraph> factors;
        std::vector<int> product;
        for (int f = 0; f < 2; ++f) {
            const Word gen = random_reduced(rng, 2, 1 + static_cast<int>(rng() % 2));
            factors.push_back(stallings_graph(2, {gen}));
            const int pow = static_cast<int>(rng() % 3) - 1;
            std::vector<int> letters = gen.letters;
            if (pow < 0) {
                std::reverse(letters.begin(), letters.end());
                for (int& l : letters) l = -l;
            }
            for (int reps = 0; reps < std::abs(pow); ++reps)
                for (const int l : letters) {
                    if (!product.empty() && product.back() == -l)
                        product.pop_back();
                    else
                        product.push_back(l);
                }
        }
        if (!benois_product_member(factors, Word::from_letters(product))) return false;
    }
    return true;
}

std::vector<int> perm_mul(const std::vector<int>& p, const std::vector<int>& q) {
    std::vector<int> r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[i] = p[static_cast<size_t>(q[i])];
    return r;
}

std::vector<int> perm_apply_word(const std::vector<std::vector<int>>& images,
                                 const std::vector<int>& w, int d) {
    std::vector<int> r = range_vec(d);
    for (const int l : w) {
        std::vector<int> g = images[static_cast<size_t>(std::abs(l) - 1)];
        if (l < 0) {
            std::vector<int> inv(g.size());
            for (size_t i = 0; i < g.size(); ++i) inv[static_cast<size_t>(g[i])] = static_cast<int>(i);
            g = std::move(inv);
        }
        r = perm_mul(r, g);
    }
    return r;
}

bool prop_quotient_witnesses_separate(std::mt19937_64& rng) {
    int found = 0;
    for (int t = 0; t < 20; ++t) {
        std::vector<StallingsGraph> hs;
        for (int f = 0, k = 1 + static_cast<int>(rng() % 2); f < k; ++f)
            hs.push_back(stallings_graph(2, {random_reduced(rng, 2, 1 + static_cast<int>(rng() % 2))}));
        const Word w = random_reduced(rng, 2, 1 + static_cast<int>(rng() % 2));
        if (benois_product_member(hs, w)) continue;
        const SeparationResult res = free_separating_quotient(hs, w, 5);
        const auto* q = std::get_if<FiniteQuotient>(&res);
        if (!q) return false;
        std::set<std::vector<int>> product{range_vec(q->degree)};
        for (const StallingsGraph& h : hs) {
            std::vector<std::vector<int>> sub;
            for (const Word& gw : graph_generators(h))
                sub.push_back(perm_apply_word(q->gen_images, gw.letters, q->degree));
            std::set<std::vector<int>> image{range_vec(q->degree)};
            std::queue<std::vector<int>> work;
            work.push(range_vec(q->degree));
            while (!work.empty()) {
                const std::vector<int> cur = work.front();
                work.pop();
                for (const auto& s : sub) {
                    std::vector<int> nxt = perm_mul(cur, s);
                    if (image.insert(nxt).second) work.push(std::move(nxt));
                }
            }
            std::set<std::vector<int>> next;
            for (const auto& left : product)
                for (const auto& h2 : image) next.insert(perm_mul(left, h2));
            product = std::move(next);
        }
        if (product.count(perm_apply_word(q->gen_images, w.letters, q->degree))) return false;
        ++found;
    }
    return found > 0;
}

// ---- registry ----

struct Suite {
    const char* name;
    std::vector<std::pair<const char*, bool (*)(std::mt19937_64&)>> props;
};

const std::vector<Suite>& registry() {
    static const std::vector<Suite> suites{
        {"metric-core",
         {{"random spaces satisfy the metric axioms", prop_random_spaces_validate},
          {"sampled one-point extensions are admissible", prop_katetov_samples_admissible},
          {"subset truncation fixes the subset and caps elsewhere", prop_truncation_respects_subset},
          {"amalgams restrict isometrically to both parts", prop_amalgams_restrict_isometrically},
          {"disjoint sums keep a constant gap between parts", prop_sums_keep_parts_apart}}},
        {"urysohn",
         {{"the saturation certificate verifies", prop_saturation_certificate},
          {"realizing points hit their prescribed distances", prop_realizing_points_hit_exact_distances},
          {"partial isometries extend pointwise", prop_partial_isometries_walk}}},
        {"group-core",
         {{"ball sizes match the closed forms", prop_free_ball_sizes},
          {"word strings round-trip", prop_word_strings_round_trip},
          {"cyclic tables satisfy the group axioms", prop_cyclic_tables_are_groups},
          {"table closures are subgroups", prop_table_closures_are_subgroups}}},
        {"action-ops",
         {{"permutation actions validate", prop_perm_actions_validate},
          {"absorbing a one-point extension preserves the action", prop_absorption_extends_the_action},
          {"action sums restrict to both summands", prop_action_sums_restrict},
          {"root shifts power back to the base generator", prop_roots_power_back}}},
        {"extension-search",
         {{"witnesses carry verified full isometries", prop_witnesses_carry_full_isometries},
          {"exhaustion reports are honest", prop_exhaustion_is_honest},
          {"rank-one pinned searches match the plain search", prop_rank_one_pins_match_plain_search}}},
        {"separability",
         {{"lattice membership matches coefficient enumeration",
           prop_lattice_membership_matches_enumeration},
          {"separating moduli exclude the target vector", prop_separating_moduli_exclude},
          {"graph membership matches ball enumeration", prop_graph_membership_matches_balls},
          {"product membership accepts factored words",
           prop_product_membership_accepts_factored_words},
          {"quotient witnesses separate in the image", prop_quotient_witnesses_separate}}}};
    return suites;
}

}  // namespace

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const Suite& s : registry()) names.push_back(s.name);
    return names;
}

bool run_suite(const std::string& name, std::ostream& os, std::uint64_t seed) {
    for (const Suite& s : registry()) {
        if (name != s.name) continue;
        bool all = true;
        std::uint64_t salt = 0;
        for (const auto& [prop, fn] : s.props) {
            std::mt19937_64 rng(seed + 0x9e3779b97f4a7c15ULL * ++salt);
            bool ok = false;
            try {
                ok = fn(rng);
            } catch (const std::exception&) {
                ok = false;
            }
            os << (ok ? "ok " : "FAIL ") << prop << "\n";
            all = all && ok;
        }
        return all;
    }
    throw DomainError("bad-suite", "unknown suite name", {{"name", name}});
}

}  // namespace forge
