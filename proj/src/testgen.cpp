#include "forge/testgen.hpp"

#include <algorithm>

#include "forge/errors.hpp"

namespace forge {

namespace {

// Pool values v with lo <= v <= hi; uniform pick. Empty range throws.
Rat pick_in_range(std::mt19937_64& rng, const std::vector<Rat>& pool, const Rat& lo,
                  const Rat& hi) {
    auto first = std::lower_bound(pool.begin(), pool.end(), lo);
    auto last = std::upper_bound(pool.begin(), pool.end(), hi);
    if (first >= last)
        throw DomainError("sparse-pool", "no pool value in admissible interval",
                          {{"lo", lo.str()}, {"hi", hi.str()}});
    auto count = static_cast<size_t>(last - first);
    std::uniform_int_distribution<size_t> pick(0, count - 1);
    return *(first + pick(rng));
}

// Distances from a new point to m's points at `targets`, in target order.
// Each value is drawn from the interval forced by the values already chosen:
// max_i |r_i - d(t_i, t_j)| <= r_j <= min_i (r_i + d(t_i, t_j)).
std::vector<Rat> sample_extension(std::mt19937_64& rng, const FinMetric& m,
                                  const std::vector<int>& targets,
                                  const std::vector<Rat>& pool) {
    std::vector<Rat> r;
    r.reserve(targets.size());
    for (size_t j = 0; j < targets.size(); ++j) {
        Rat lo = pool.front();
        Rat hi = pool.back();
        for (size_t i = 0; i < j; ++i) {
            const Rat& d = m.at(targets[i], targets[j]);
            lo = max(lo, abs(r[i] - d));
            hi = min(hi, r[i] + d);
        }
        r.push_back(pick_in_range(rng, pool, lo, hi));
    }
    return r;
}

}  // namespace

std::vector<Rat> grid_pool(int q, int max_num) {
    if (q < 1 || max_num < 1)
        throw DomainError("bad-pool", "grid_pool needs q >= 1 and max_num >= 1",
                          {{"q", q}, {"max_num", max_num}});
    std::vector<Rat> pool;
    pool.reserve(static_cast<size_t>(max_num));
    for (int i = 1; i <= max_num; ++i) pool.emplace_back(i, q);
    return pool;
}

FinMetric random_space(std::mt19937_64& rng, int n, const std::vector<Rat>& pool) {
    if (n < 1) throw DomainError("bad-size", "random_space needs n >= 1", {{"n", n}});
    if (pool.empty()) throw DomainError("bad-pool", "random_space needs a nonempty pool");
    std::vector<std::string> ids;
    ids.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ids.push_back("p" + std::to_string(i));
    FinMetric m(std::move(ids));
    for (int j = 1; j < n; ++j) {
        std::vector<int> prefix(static_cast<size_t>(j));
        for (int i = 0; i < j; ++i) prefix[static_cast<size_t>(i)] = i;
        std::vector<Rat> r = sample_extension(rng, m, prefix, pool);
        for (int i = 0; i < j; ++i) m.set(i, j, r[static_cast<size_t>(i)]);
    }
    return m;
}

std::vector<int> random_subset(std::mt19937_64& rng, int n, int k) {
    if (k < 0 || k > n)
        throw DomainError("bad-size", "random_subset needs 0 <= k <= n", {{"n", n}, {"k", k}});
    std::vector<int> all(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) all[static_cast<size_t>(i)] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<size_t>(k));
    std::sort(all.begin(), all.end());
    return all;
}

KatetovFn random_katetov(std::mt19937_64& rng, const FinMetric& m,
                         const std::vector<int>& anchor, const std::vector<Rat>& pool) {
    if (anchor.empty()) throw DomainError("bad-subset", "random_katetov: empty anchor");
    KatetovFn r;
    r.anchor = anchor;
    r.value = sample_extension(rng, m, anchor, pool);
    return r;
}

}  // namespace forge
