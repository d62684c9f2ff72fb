#include "forge/extension_search.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>

#include "forge/errors.hpp"

namespace forge {

namespace {

struct BudgetHit {};

/**
 * Union-find over point pairs with parent-only updates so choices can be
 * rolled back; a root may carry the known distance of its class.
 */
struct PairOrbits {
    int nb = 0;
    std::vector<int> parent;
    std::vector<Rat> value;
    std::vector<char> has_value;
    std::vector<int> parent_trail;
    std::vector<int> value_trail;

    struct Mark {
        size_t parents, values;
    };

    explicit PairOrbits(int nb_)
        : nb(nb_),
          parent(static_cast<size_t>(nb_) * static_cast<size_t>(nb_)),
          value(parent.size(), Rat(0)),
          has_value(parent.size(), 0) {
        std::iota(parent.begin(), parent.end(), 0);
    }

    int key(int i, int j) const { return std::min(i, j) * nb + std::max(i, j); }

    int find(int v) const {
        while (parent[static_cast<size_t>(v)] != v) v = parent[static_cast<size_t>(v)];
        return v;
    }

    Mark mark() const { return {parent_trail.size(), value_trail.size()}; }

    void rollback(const Mark& m) {
        while (parent_trail.size() > m.parents) {
            int v = parent_trail.back();
            parent_trail.pop_back();
            parent[static_cast<size_t>(v)] = v;
        }
        while (value_trail.size() > m.values) {
            has_value[static_cast<size_t>(value_trail.back())] = 0;
            value_trail.pop_back();
        }
    }

    bool set_value(int root, const Rat& r) {
        if (has_value[static_cast<size_t>(root)]) return value[static_cast<size_t>(root)] == r;
        value[static_cast<size_t>(root)] = r;
        has_value[static_cast<size_t>(root)] = 1;
        value_trail.push_back(root);
        return true;
    }

    // false on a known-value clash; the smaller key stays the root
    bool unite(int x, int y) {
        x = find(x);
        y = find(y);
        if (x == y) return true;
        if (x > y) std::swap(x, y);
        parent[static_cast<size_t>(y)] = x;
        parent_trail.push_back(y);
        if (has_value[static_cast<size_t>(y)]) return set_value(x, value[static_cast<size_t>(y)]);
        return true;
    }
};

/**
 * Depth-first search for a tuple of permutations of a superspace of the base
 * meeting the pins, plus a distance completion from the candidate set.
 * Sizes are tried ascending by the caller; within a size, image choices run
 * in point order with new points introduced in first-use order (relabeling
 * symmetry makes this complete), pair orbits under the partial tuple are
 * merged so known base distances propagate, and free orbits are filled
 * lexicographically. Every attempted choice costs one node.
 */
struct Searcher {
    const FinMetric& a;
    int na;
    int tuple;
    std::vector<std::vector<int>> pins;  // tuple x na, -1 = free
    bool commute;
    bool fresh;  // unpinned base points must map to new points
    std::vector<Rat> cands;
    long long max_nodes;

    long long nodes = 0;
    int nb = 0;
    int intro = 0;
    std::vector<std::vector<int>> img{};
    std::vector<std::vector<char>> used{};
    std::vector<std::pair<int, int>> slots{};  // (point, tuple position)
    PairOrbits orbits{1};
    std::optional<std::pair<FinMetric, std::vector<std::vector<int>>>> out{};

    void bump() {
        if (++nodes > max_nodes) throw BudgetHit{};
    }

    bool commutation_ok() const {
        for (int s = 0; s < tuple; ++s)
            for (int t = s + 1; t < tuple; ++t)
                for (int p = 0; p < intro; ++p) {
                    int sp = img[static_cast<size_t>(s)][static_cast<size_t>(p)];
                    int tp = img[static_cast<size_t>(t)][static_cast<size_t>(p)];
                    if (sp < 0 || tp < 0) continue;
                    int ts = img[static_cast<size_t>(t)][static_cast<size_t>(sp)];
                    int st = img[static_cast<size_t>(s)][static_cast<size_t>(tp)];
                    if (ts >= 0 && st >= 0 && ts != st) return false;
                }
        return true;
    }

    bool finish() {
        std::vector<std::string> ids = a.points;
        for (int k = na; k < nb; ++k)
            ids.push_back(mint_point_id(ids, "u" + std::to_string(k - na)));

        std::vector<std::vector<std::pair<int, int>>> members(
            static_cast<size_t>(nb) * static_cast<size_t>(nb));
        for (int i = 0; i < nb; ++i)
            for (int j = i + 1; j < nb; ++j)
                members[static_cast<size_t>(orbits.find(orbits.key(i, j)))].push_back({i, j});

        FinMetric b(ids);
        std::vector<std::vector<char>> known(static_cast<size_t>(nb),
                                             std::vector<char>(static_cast<size_t>(nb), 0));
        auto place = [&](int i, int j, const Rat& r) -> bool {
            for (int k = 0; k < nb; ++k) {
                if (k == i || k == j || !known[static_cast<size_t>(i)][static_cast<size_t>(k)] ||
                    !known[static_cast<size_t>(j)][static_cast<size_t>(k)])
                    continue;
                const Rat& ik = b.at(i, k);
                const Rat& jk = b.at(j, k);
                Rat lo = ik >= jk ? ik - jk : jk - ik;
                if (r < lo || ik + jk < r) return false;
            }
            b.set(i, j, r);
            known[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
            known[static_cast<size_t>(j)][static_cast<size_t>(i)] = 1;
            return true;
        };

        // orbits carrying a base distance are forced; the rest are searched
        std::vector<int> free_roots;
        for (int r = 0; r < nb * nb; ++r) {
            if (members[static_cast<size_t>(r)].empty()) continue;
            if (orbits.has_value[static_cast<size_t>(r)]) {
                for (auto [i, j] : members[static_cast<size_t>(r)])
                    if (!place(i, j, orbits.value[static_cast<size_t>(r)])) return false;
            } else {
                free_roots.push_back(r);
            }
        }
        std::function<bool(size_t)> fill = [&](size_t fi) -> bool {
            if (fi == free_roots.size()) {
                out = std::make_pair(b, img);
                return true;
            }
            const auto& orb = members[static_cast<size_t>(free_roots[fi])];
            for (const Rat& c : cands) {
                bump();
                size_t done = 0;
                bool ok = true;
                for (; done < orb.size(); ++done)
                    if (!place(orb[done].first, orb[done].second, c)) {
                        ok = false;
                        break;
                    }
                if (ok && fill(fi + 1)) return true;
                for (size_t u = 0; u < done; ++u) {
                    known[static_cast<size_t>(orb[u].first)][static_cast<size_t>(orb[u].second)] = 0;
                    known[static_cast<size_t>(orb[u].second)][static_cast<size_t>(orb[u].first)] = 0;
                }
            }
            return false;
        };
        return fill(0);
    }

    bool assign(size_t qi) {
        if (qi == slots.size()) {
            // a closed tuple smaller than nb was already settled at its own size
            if (intro != nb) return false;
            return finish();
        }
        auto [p, t] = slots[qi];
        std::vector<int> options;
        if (p < na && pins[static_cast<size_t>(t)][static_cast<size_t>(p)] >= 0) {
            options.push_back(pins[static_cast<size_t>(t)][static_cast<size_t>(p)]);
        } else {
            if (p >= na || !fresh)
                for (int v = 0; v < na; ++v) options.push_back(v);
            for (int v = na; v < intro; ++v) options.push_back(v);
            if (intro < nb) options.push_back(intro);
        }
        for (int v : options) {
            if (used[static_cast<size_t>(t)][static_cast<size_t>(v)]) continue;
            bump();
            PairOrbits::Mark m = orbits.mark();
            bool introduced = v == intro;
            img[static_cast<size_t>(t)][static_cast<size_t>(p)] = v;
            used[static_cast<size_t>(t)][static_cast<size_t>(v)] = 1;
            size_t slot_mark = slots.size();
            if (introduced) {
                ++intro;
                for (int s = 0; s < tuple; ++s) slots.emplace_back(v, s);
            }
            bool ok = true;
            for (int q = 0; ok && q < intro; ++q) {
                if (q == p) continue;
                int w = img[static_cast<size_t>(t)][static_cast<size_t>(q)];
                if (w < 0) continue;
                ok = orbits.unite(orbits.key(p, q), orbits.key(v, w));
            }
            if (ok && commute) ok = commutation_ok();
            if (ok && assign(qi + 1)) return true;
            if (introduced) {
                --intro;
                slots.resize(slot_mark);
            }
            img[static_cast<size_t>(t)][static_cast<size_t>(p)] = -1;
            used[static_cast<size_t>(t)][static_cast<size_t>(v)] = 0;
            orbits.rollback(m);
        }
        return false;
    }

    bool search_size(int nb_) {
        nb = nb_;
        intro = na;
        img.assign(static_cast<size_t>(tuple), std::vector<int>(static_cast<size_t>(nb), -1));
        used.assign(static_cast<size_t>(tuple), std::vector<char>(static_cast<size_t>(nb), 0));
        slots.clear();
        for (int p = 0; p < na; ++p)
            for (int t = 0; t < tuple; ++t) slots.emplace_back(p, t);
        orbits = PairOrbits(nb);
        for (int i = 0; i < na; ++i)
            for (int j = i + 1; j < na; ++j) orbits.set_value(orbits.key(i, j), a.at(i, j));
        return assign(0);
    }
};

struct EngineOut {
    std::optional<std::pair<FinMetric, std::vector<std::vector<int>>>> witness;
    long long nodes = 0;
    bool hit = false;
};

EngineOut run_engine(const FinMetric& a, std::vector<std::vector<int>> pins, bool commute,
                     bool fresh, std::vector<Rat> cands, int max_points, long long max_nodes) {
    Searcher s{a,       a.size(),         static_cast<int>(pins.size()),
               std::move(pins), commute,  fresh,
               std::move(cands), max_nodes};
    EngineOut eo;
    try {
        for (int nb = a.size(); nb <= max_points; ++nb)
            if (s.search_size(nb)) {
                eo.witness = std::move(s.out);
                break;
            }
    } catch (const BudgetHit&) {
        eo.hit = true;
    }
    eo.nodes = s.nodes;
    return eo;
}

std::vector<Rat> checked_candidates(const FinMetric& a, const SearchBudget& budget) {
    if (budget.max_points <= 0 || budget.max_nodes <= 0)
        throw DomainError("bad-budget", "search bounds must be positive");
    std::vector<Rat> cands =
        budget.candidate_distances.empty() ? default_candidates(a) : budget.candidate_distances;
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    if (cands.empty()) throw DomainError("bad-budget", "candidate distance set is empty");
    if (!(Rat(0) < cands.front()))
        throw DomainError("bad-budget", "candidate distances must be positive");
    return cands;
}

void require_valid_space(const FinMetric& a) {
    if (auto v = validate_metric(a))
        throw DomainError("bad-space", "base space: " + v->message);
}

// Independent post-check of a search result; a failure is a search bug.
void verify_witness(const FinMetric& a, const std::vector<std::vector<int>>& pins, bool commute,
                    bool fresh, const FinMetric& b, const std::vector<std::vector<int>>& fulls) {
    const int na = a.size();
    const int nb = b.size();
    if (validate_metric(b)) throw std::logic_error("search returned an invalid metric");
    if (nb < na || fulls.size() != pins.size())
        throw std::logic_error("search returned a malformed witness");
    for (int i = 0; i < na; ++i)
        if (b.points[static_cast<size_t>(i)] != a.points[static_cast<size_t>(i)])
            throw std::logic_error("search relabeled the base");
    for (int i = 0; i < na; ++i)
        for (int j = i + 1; j < na; ++j)
            if (b.at(i, j) != a.at(i, j)) throw std::logic_error("search changed a base distance");
    for (size_t t = 0; t < fulls.size(); ++t) {
        const auto& f = fulls[t];
        std::vector<char> seen(static_cast<size_t>(nb), 0);
        if (static_cast<int>(f.size()) != nb) throw std::logic_error("full map has wrong length");
        for (int v : f) {
            if (v < 0 || v >= nb || seen[static_cast<size_t>(v)])
                throw std::logic_error("full map is not a bijection");
            seen[static_cast<size_t>(v)] = 1;
        }
        for (int i = 0; i < nb; ++i)
            for (int j = i + 1; j < nb; ++j)
                if (b.at(f[static_cast<size_t>(i)], f[static_cast<size_t>(j)]) != b.at(i, j))
                    throw std::logic_error("full map is not an isometry");
        for (int p = 0; p < na; ++p) {
            int pin = pins[t][static_cast<size_t>(p)];
            if (pin >= 0 && f[static_cast<size_t>(p)] != pin)
                throw std::logic_error("full map breaks a pinned image");
            if (pin < 0 && fresh && f[static_cast<size_t>(p)] < na)
                throw std::logic_error("full map reuses a base point for a free image");
        }
    }
    if (commute)
        for (size_t s = 0; s < fulls.size(); ++s)
            for (size_t t = s + 1; t < fulls.size(); ++t)
                for (int p = 0; p < nb; ++p)
                    if (fulls[s][static_cast<size_t>(fulls[t][static_cast<size_t>(p)])] !=
                        fulls[t][static_cast<size_t>(fulls[s][static_cast<size_t>(p)])])
                        throw std::logic_error("full maps do not commute");
}

std::vector<std::vector<int>> pins_from_partials(const FinMetric& a,
                                                 const std::vector<PartialIsometry>& partials) {
    const int na = a.size();
    std::vector<std::vector<int>> pins;
    for (size_t pi = 0; pi < partials.size(); ++pi) {
        const PartialIsometry& p = partials[pi];
        if (p.dom.size() != p.img.size())
            throw DomainError("bad-isometry", "domain and image lists differ in length",
                              {{"partial", pi}});
        std::vector<int> pin(static_cast<size_t>(na), -1);
        std::vector<char> hit(static_cast<size_t>(na), 0);
        for (size_t i = 0; i < p.dom.size(); ++i) {
            int d = p.dom[i], m = p.img[i];
            if (d < 0 || d >= na || m < 0 || m >= na)
                throw DomainError("bad-isometry", "point index out of range", {{"partial", pi}});
            if (pin[static_cast<size_t>(d)] >= 0 || hit[static_cast<size_t>(m)])
                throw DomainError("bad-isometry", "domain or image repeats a point",
                                  {{"partial", pi}});
            pin[static_cast<size_t>(d)] = m;
            hit[static_cast<size_t>(m)] = 1;
        }
        for (size_t i = 0; i < p.dom.size(); ++i)
            for (size_t j = i + 1; j < p.dom.size(); ++j)
                if (a.at(p.dom[i], p.dom[j]) != a.at(p.img[i], p.img[j]))
                    throw DomainError("bad-isometry", "map does not preserve distances",
                                      {{"partial", pi},
                                       {"points",
                                        {a.points[static_cast<size_t>(p.dom[i])],
                                         a.points[static_cast<size_t>(p.dom[j])]}}});
        pins.push_back(std::move(pin));
    }
    return pins;
}

}  // namespace

std::vector<Rat> default_candidates(const FinMetric& a) {
    if (a.size() < 2) return {};
    std::vector<int> all(static_cast<size_t>(a.size()));
    std::iota(all.begin(), all.end(), 0);
    std::vector<Rat> pos;
    for (const Rat& r : expanded_value_set(a, all))
        if (Rat(0) < r) pos.push_back(r);
    Rat cap = diameter(a, all) + diameter(a, all);
    std::vector<Rat> out = pos;
    for (size_t i = 0; i < pos.size(); ++i)
        for (size_t j = i; j < pos.size(); ++j) {
            Rat sum = pos[i] + pos[j];
            if (!(cap < sum)) out.push_back(sum);
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SoleckiResult solecki_extend(const FinMetric& a, const std::vector<PartialIsometry>& partials,
                             const SearchBudget& budget) {
    require_valid_space(a);
    std::vector<std::vector<int>> pins = pins_from_partials(a, partials);
    std::vector<Rat> cands = checked_candidates(a, budget);
    EngineOut eo = run_engine(a, pins, false, true, cands, budget.max_points, budget.max_nodes);
    if (!eo.witness) return Exhausted{budget.max_points, eo.nodes, eo.hit};
    verify_witness(a, pins, false, true, eo.witness->first, eo.witness->second);
    return SoleckiWitness{std::move(eo.witness->first), std::move(eo.witness->second)};
}

ApproxResult approximate_action(const GroupSpec& g, const FinMetric& a,
                                const AgreementConstraint& constraint, const SearchBudget& budget) {
    if (g.variant != GroupSpec::Variant::free_abelian)
        throw DomainError("bad-group", "approximate_action expects a free abelian group");
    require_valid_space(a);
    const int na = a.size();
    const int rank = g.rank;
    if (static_cast<int>(constraint.required_images.size()) != rank)
        throw DomainError("bad-constraint", "one required-image row per generator");
    std::vector<char> anchored(static_cast<size_t>(na), 0);
    for (int x : constraint.anchor_points) {
        if (x < 0 || x >= na) throw DomainError("bad-constraint", "anchor out of range");
        if (anchored[static_cast<size_t>(x)])
            throw DomainError("bad-constraint", "anchor repeats a point");
        anchored[static_cast<size_t>(x)] = 1;
    }
    std::vector<std::vector<int>> pins(static_cast<size_t>(rank),
                                       std::vector<int>(static_cast<size_t>(na), -1));
    for (int t = 0; t < rank; ++t) {
        const auto& row = constraint.required_images[static_cast<size_t>(t)];
        if (row.size() != constraint.anchor_points.size())
            throw DomainError("bad-constraint", "image row does not match the anchor list");
        std::vector<char> hit(static_cast<size_t>(na), 0);
        for (size_t i = 0; i < row.size(); ++i) {
            int v = row[i];
            if (v == -1) continue;
            if (v < 0 || v >= na) throw DomainError("bad-constraint", "required image out of range");
            if (hit[static_cast<size_t>(v)])
                throw DomainError("bad-constraint", "required images repeat a point");
            hit[static_cast<size_t>(v)] = 1;
            pins[static_cast<size_t>(t)][static_cast<size_t>(constraint.anchor_points[i])] = v;
        }
        for (int p = 0; p < na; ++p)
            for (int q = p + 1; q < na; ++q) {
                int fp = pins[static_cast<size_t>(t)][static_cast<size_t>(p)];
                int fq = pins[static_cast<size_t>(t)][static_cast<size_t>(q)];
                if (fp >= 0 && fq >= 0 && a.at(fp, fq) != a.at(p, q))
                    throw DomainError("bad-constraint", "required images are not a partial isometry",
                                      {{"points",
                                        {a.points[static_cast<size_t>(p)],
                                         a.points[static_cast<size_t>(q)]}}});
            }
    }
    // where both composites are pinned through, they must agree
    for (int s = 0; s < rank; ++s)
        for (int t = s + 1; t < rank; ++t)
            for (int x = 0; x < na; ++x) {
                int tx = pins[static_cast<size_t>(t)][static_cast<size_t>(x)];
                int sx = pins[static_cast<size_t>(s)][static_cast<size_t>(x)];
                if (tx < 0 || sx < 0) continue;
                int stx = pins[static_cast<size_t>(s)][static_cast<size_t>(tx)];
                int tsx = pins[static_cast<size_t>(t)][static_cast<size_t>(sx)];
                if (stx >= 0 && tsx >= 0 && stx != tsx)
                    throw DomainError("bad-constraint", "pinned images cannot commute",
                                      {{"point", a.points[static_cast<size_t>(x)]}});
            }
    std::vector<Rat> cands = checked_candidates(a, budget);
    // rank one is the single-partial extension search, fresh images included,
    // so both operations return the same canonical witness
    const bool fresh = rank == 1;
    EngineOut eo =
        run_engine(a, pins, rank > 1, fresh, cands, budget.max_points, budget.max_nodes);
    if (!eo.witness) return Exhausted{budget.max_points, eo.nodes, eo.hit};
    verify_witness(a, pins, rank > 1, fresh, eo.witness->first, eo.witness->second);
    FiniteAction act{g, std::move(eo.witness->first), std::move(eo.witness->second)};
    if (validate_action(act)) throw std::logic_error("search returned an invalid action");
    return act;
}

}  // namespace forge
