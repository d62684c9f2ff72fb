#include "forge/urysohn.hpp"

#include <algorithm>
#include <random>

#include "forge/errors.hpp"

namespace forge {

namespace {

// Integer distance matrix of a space whose values all lie in {1..n}.
std::vector<int> int_matrix(const FinMetric& m, const DistanceSet& dset, const char* op) {
    if (!dset.bound)
        throw DomainError("bad-dset", std::string(op) + ": needs an integer-range distance set");
    std::vector<int> d(m.dist.size());
    for (size_t i = 0; i < m.dist.size(); ++i) {
        const Rat& v = m.dist[i];
        if (!(v == Rat(0)) && !dset.contains(v))
            throw DomainError("dset-mismatch", std::string(op) + ": space distance outside dset",
                              {{"value", v.str()}});
        d[i] = static_cast<int>(v.num());
    }
    return d;
}

bool is_prime(int q) {
    if (q < 2) return false;
    for (int p = 2; p * p <= q; ++p)
        if (q % p == 0) return false;
    return true;
}

// Paley space on a prime q = 1 mod 4: distance 1 on quadratic-residue
// differences, 2 otherwise. Self-complementary and highly homogeneous, which
// is what makes small instances saturated.
FinMetric paley_space(int q) {
    std::vector<bool> residue(static_cast<size_t>(q), false);
    for (int x = 1; x < q; ++x) residue[static_cast<size_t>((x * x) % q)] = true;
    std::vector<std::string> ids;
    for (int i = 0; i < q; ++i) ids.push_back("p" + std::to_string(i));
    FinMetric m(std::move(ids));
    for (int i = 0; i < q; ++i)
        for (int j = i + 1; j < q; ++j)
            m.set(i, j, Rat(residue[static_cast<size_t>((j - i) % q)] ? 1 : 2));
    return m;
}

// Hamming space on words of length n over {0..q-1}: distance = number of
// differing coordinates. Realizes every admissible type over subsets of size
// <= 2 once q is large enough; coordinate rigidity blocks some triple types.
FinMetric hamming_space(int n, int q) {
    int m = 1;
    for (int i = 0; i < n; ++i) m *= q;
    std::vector<std::string> ids;
    for (int i = 0; i < m; ++i) ids.push_back("p" + std::to_string(i));
    FinMetric sp(std::move(ids));
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            int a = i, b = j, diff = 0;
            for (int t = 0; t < n; ++t) {
                if (a % q != b % q) ++diff;
                a /= q;
                b /= q;
            }
            sp.set(i, j, Rat(diff));
        }
    return sp;
}

// True when some point outside the anchor realizes the (integer) values.
bool realized_by_scan(const FinMetric& m, const std::vector<int>& d, const KatetovFn& r) {
    int n = m.size();
    for (int y = 0; y < n; ++y) {
        bool anchored = false, match = true;
        for (size_t t = 0; t < r.anchor.size() && match; ++t) {
            if (r.anchor[t] == y) anchored = true;
            match = Rat(d[static_cast<size_t>(r.anchor[t]) * m.points.size() + y]) == r.value[t];
        }
        if (match && !anchored) return true;
    }
    return false;
}

}  // namespace

FinMetric add_realizing_point(const FinMetric& m, const KatetovFn& r, const DistanceSet& dset,
                              const std::string& desired_id) {
    std::vector<int> d = int_matrix(m, dset, "add_realizing_point");
    int n = *dset.bound;
    for (const Rat& v : r.value)
        if (!dset.contains(v))
            throw DomainError("dset-mismatch", "add_realizing_point: r value outside dset",
                              {{"value", v.str()}});
    if (!katetov_check(m, r))
        throw DomainError("katetov-fail", "add_realizing_point: r is not admissible over its anchor");

    int old = m.size();
    FinMetric out(m.points);
    out.points.push_back(mint_point_id(m.points, desired_id));
    out.dist.assign(static_cast<size_t>(old + 1) * (old + 1), Rat(0));
    for (int i = 0; i < old; ++i)
        for (int j = 0; j < old; ++j) out.at(i, j) = m.at(i, j);

    std::vector<int> to_y(static_cast<size_t>(old), -1);
    for (size_t t = 0; t < r.anchor.size(); ++t)
        to_y[static_cast<size_t>(r.anchor[t])] = static_cast<int>(r.value[t].num());
    for (int z = 0; z < old; ++z) {
        if (to_y[static_cast<size_t>(z)] < 0) {
            int best = n;
            for (size_t t = 0; t < r.anchor.size(); ++t)
                best = std::min(best, static_cast<int>(r.value[t].num()) +
                                          d[static_cast<size_t>(r.anchor[t]) * m.points.size() + z]);
            to_y[static_cast<size_t>(z)] = best;
        }
        out.set(z, old, Rat(to_y[static_cast<size_t>(z)]));
    }
    return out;
}

std::vector<KatetovFn> check_saturation(const FinMetric& s, const DistanceSet& dset, int k) {
    if (k < 1) throw DomainError("bad-k", "check_saturation: k must be >= 1", {{"k", k}});
    std::vector<int> d = int_matrix(s, dset, "check_saturation");
    int n = *dset.bound;
    int m = s.size();
    auto dd = [&](int i, int j) { return d[static_cast<size_t>(i) * s.points.size() + j]; };

    std::vector<KatetovFn> missing;
    std::vector<int> a;  // current anchor, ascending indices

    // Realized value patterns of the current anchor, coded base n, digits v-1.
    auto sweep_anchor = [&]() {
        size_t codes = 1;
        for (size_t t = 0; t < a.size(); ++t) codes *= static_cast<size_t>(n);
        if (codes > 20000000)
            throw DomainError("too-large", "check_saturation: value pattern space too large",
                              {{"n", n}, {"k", k}});
        std::vector<char> realized(codes, 0);
        for (int y = 0; y < m; ++y) {
            if (std::find(a.begin(), a.end(), y) != a.end()) continue;
            size_t code = 0;
            for (size_t t = a.size(); t-- > 0;) code = code * n + (dd(a[t], y) - 1);
            realized[code] = 1;
        }
        // Odometer over value tuples; admissibility checked pairwise.
        std::vector<int> r(a.size(), 1);
        while (true) {
            bool ok = true;
            for (size_t i = 0; i < a.size() && ok; ++i)
                for (size_t j = i + 1; j < a.size() && ok; ++j) {
                    int diff = r[i] > r[j] ? r[i] - r[j] : r[j] - r[i];
                    ok = diff <= dd(a[i], a[j]) && dd(a[i], a[j]) <= r[i] + r[j];
                }
            if (ok) {
                size_t code = 0;
                for (size_t t = a.size(); t-- > 0;) code = code * n + (r[t] - 1);
                if (!realized[code]) {
                    KatetovFn f;
                    f.anchor = a;
                    for (int v : r) f.value.emplace_back(v);
                    missing.push_back(std::move(f));
                }
            }
            size_t t = 0;
            while (t < r.size() && r[t] == n) r[t++] = 1;
            if (t == r.size()) break;
            ++r[t];
        }
    };

    // Subsets in lexicographic index order within each size 1..k.
    for (int size = 1; size <= std::min(k, m); ++size) {
        a.assign(static_cast<size_t>(size), 0);
        for (int i = 0; i < size; ++i) a[static_cast<size_t>(i)] = i;
        while (true) {
            sweep_anchor();
            int i = size - 1;
            while (i >= 0 && a[static_cast<size_t>(i)] == m - size + i) --i;
            if (i < 0) break;
            ++a[static_cast<size_t>(i)];
            for (int j = i + 1; j < size; ++j)
                a[static_cast<size_t>(j)] = a[static_cast<size_t>(j - 1)] + 1;
        }
    }
    return missing;
}

SaturationLevel saturate(const DistanceSet& dset, int k, int size_cap) {
    if (!dset.bound) throw DomainError("bad-dset", "saturate: needs an integer-range distance set");
    if (k < 1) throw DomainError("bad-k", "saturate: k must be >= 1", {{"k", k}});
    if (size_cap < 1) throw DomainError("bad-cap", "saturate: size_cap must be >= 1");
    int n = *dset.bound;

    auto audit_cost = [&](int points) {
        double cost = 1;
        for (int i = 0; i < k; ++i) cost *= static_cast<double>(points - i) / (i + 1);
        double patterns = 1;
        for (int i = 0; i < k; ++i) patterns *= n;
        return cost * (points + patterns);
    };

    if (n == 1) {
        // Only r = 1 exists, so a (k+1)-clique at distance 1 saturates.
        std::vector<std::string> ids;
        for (int i = 0; i <= k; ++i) ids.push_back("p" + std::to_string(i));
        if (static_cast<int>(ids.size()) > size_cap)
            throw BudgetExhausted("saturate: size cap reached before saturation",
                                  {{"missing", 1}, {"points", size_cap}});
        FinMetric m(std::move(ids));
        for (int i = 0; i <= k; ++i)
            for (int j = i + 1; j <= k; ++j) m.set(i, j, Rat(1));
        if (check_saturation(m, dset, k).empty()) return {k, std::move(m), dset};
    }

    if (k == 1 && 2 * n + 1 <= size_cap) {
        // Capped cycle metric on 2n+1 points: every point sees every value.
        int m = 2 * n + 1;
        std::vector<std::string> ids;
        for (int i = 0; i < m; ++i) ids.push_back("p" + std::to_string(i));
        FinMetric cyc(std::move(ids));
        for (int i = 0; i < m; ++i)
            for (int j = i + 1; j < m; ++j) cyc.set(i, j, Rat(std::min({j - i, m - (j - i), n})));
        if (check_saturation(cyc, dset, 1).empty()) return {k, std::move(cyc), dset};
    }

    if (n == 2) {
        // Paley ladder; the feasibility guard keeps the checker affordable.
        for (int q = 5; q <= size_cap && q <= 1000; q += 4) {
            if (!is_prime(q)) continue;
            if (audit_cost(q) > 8e7) break;
            FinMetric m = paley_space(q);
            if (check_saturation(m, dset, k).empty()) return {k, std::move(m), dset};
        }
    }

    // Hamming ladder: H(n, q) covers all pair types once q is large enough.
    for (int q = 2;; ++q) {
        double points = 1;
        for (int i = 0; i < n; ++i) points *= q;
        if (points > size_cap || audit_cost(static_cast<int>(points)) > 8e7) break;
        FinMetric m = hamming_space(n, q);
        if (check_saturation(m, dset, k).empty()) return {k, std::move(m), dset};
    }

    // Greedy sweeps: realize every still-missing type with a fresh point.
    // Distances beyond the anchor are sampled from the admissible integer
    // intervals; the capped-shortest-path completion is avoided here because
    // under it fresh witnesses pile up without ever serving each other.
    std::mt19937_64 rng(1);
    FinMetric space({"p0"});
    while (true) {
        std::vector<KatetovFn> missing = check_saturation(space, dset, k);
        if (missing.empty()) return {k, std::move(space), dset};
        std::vector<int> d = int_matrix(space, dset, "saturate");
        for (const KatetovFn& r : missing) {
            if (realized_by_scan(space, d, r)) continue;
            if (space.size() >= size_cap) {
                auto still = check_saturation(space, dset, k);
                throw BudgetExhausted("saturate: size cap reached before saturation",
                                      {{"missing", still.size()}, {"points", space.size()}});
            }
            int old = space.size();
            FinMetric grown(space.points);
            grown.points.push_back("p" + std::to_string(old));
            grown.dist.assign(static_cast<size_t>(old + 1) * (old + 1), Rat(0));
            for (int i = 0; i < old; ++i)
                for (int j = 0; j < old; ++j) grown.at(i, j) = space.at(i, j);
            std::vector<int> to_y(static_cast<size_t>(old), -1);
            for (size_t t = 0; t < r.anchor.size(); ++t)
                to_y[static_cast<size_t>(r.anchor[t])] = static_cast<int>(r.value[t].num());
            for (int z = 0; z < old; ++z) {
                if (to_y[static_cast<size_t>(z)] < 0) {
                    int lo = 1, hi = n;
                    for (int w = 0; w < old; ++w)
                        if (to_y[static_cast<size_t>(w)] >= 0) {
                            int rw = to_y[static_cast<size_t>(w)];
                            int dwz = d[static_cast<size_t>(w) * space.points.size() + z];
                            lo = std::max(lo, rw > dwz ? rw - dwz : dwz - rw);
                            hi = std::min(hi, rw + dwz);
                        }
                    std::uniform_int_distribution<int> pick(lo, hi);
                    to_y[static_cast<size_t>(z)] = pick(rng);
                }
                grown.set(z, old, Rat(to_y[static_cast<size_t>(z)]));
            }
            space = std::move(grown);
            d = int_matrix(space, dset, "saturate");
        }
    }
}

PartialIsometry extend_partial_isometry(const SaturationLevel& s, const PartialIsometry& p,
                                        const std::vector<int>& targets) {
    const FinMetric& m = s.space;
    if (p.dom.size() != p.img.size())
        throw DomainError("bad-isometry", "extend_partial_isometry: dom/img length mismatch");
    for (const std::vector<int>& side : {p.dom, p.img}) {
        for (int x : side)
            if (x < 0 || x >= m.size())
                throw DomainError("bad-isometry", "extend_partial_isometry: point index out of range",
                                  {{"index", x}});
        std::vector<int> dedup = side;
        std::sort(dedup.begin(), dedup.end());
        if (std::adjacent_find(dedup.begin(), dedup.end()) != dedup.end())
            throw DomainError("bad-isometry", "extend_partial_isometry: map is not injective");
    }
    for (size_t i = 0; i < p.dom.size(); ++i)
        for (size_t j = i + 1; j < p.dom.size(); ++j)
            if (!(m.at(p.dom[i], p.dom[j]) == m.at(p.img[i], p.img[j])))
                throw DomainError("bad-isometry", "extend_partial_isometry: distances not preserved",
                                  {{"x", m.points[static_cast<size_t>(p.dom[i])]},
                                   {"y", m.points[static_cast<size_t>(p.dom[j])]}});

    std::vector<int> fresh;
    for (int t : targets) {
        if (t < 0 || t >= m.size())
            throw DomainError("bad-subset", "extend_partial_isometry: target out of range",
                              {{"index", t}});
        if (std::find(p.dom.begin(), p.dom.end(), t) == p.dom.end() &&
            std::find(fresh.begin(), fresh.end(), t) == fresh.end())
            fresh.push_back(t);
    }
    if (!fresh.empty() && p.dom.size() + fresh.size() - 1 > static_cast<size_t>(s.k))
        throw DomainError("k-exceeded",
                          "extend_partial_isometry: a step would anchor more points than the "
                          "saturation level covers",
                          {{"dom", p.dom.size()}, {"targets", fresh.size()}, {"k", s.k}});

    PartialIsometry out = p;
    for (int t : fresh) {
        int found = -1;
        for (int y = 0; y < m.size() && found < 0; ++y) {
            bool match = true;
            for (size_t i = 0; i < out.dom.size() && match; ++i)
                match = m.at(y, out.img[i]) == m.at(t, out.dom[i]);
            if (match && std::find(out.img.begin(), out.img.end(), y) == out.img.end()) found = y;
        }
        if (found < 0)
            throw DomainError("not-saturated",
                              "extend_partial_isometry: no realizing point for a transported type",
                              {{"target", m.points[static_cast<size_t>(t)]}});
        out.dom.push_back(t);
        out.img.push_back(found);
    }
    return out;
}

}  // namespace forge
