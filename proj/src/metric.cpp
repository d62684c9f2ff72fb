#include "forge/metric.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "forge/errors.hpp"

namespace forge {

namespace {

void require_subset(const FinMetric& m, const std::vector<int>& subset, const char* op) {
    std::set<int> seen;
    for (int i : subset) {
        if (i < 0 || i >= m.size())
            throw DomainError("bad-subset", std::string(op) + ": point index out of range",
                              {{"index", i}});
        if (!seen.insert(i).second)
            throw DomainError("bad-subset", std::string(op) + ": duplicate point index",
                              {{"index", i}});
    }
}

}  // namespace

DistanceSet DistanceSet::integer_range(int n) {
    if (n < 1) throw DomainError("bad-dset", "integer range bound must be >= 1", {{"n", n}});
    DistanceSet s;
    for (int v = 1; v <= n; ++v) s.values.emplace_back(v);
    s.bound = n;
    return s;
}

DistanceSet DistanceSet::from_values(std::vector<Rat> vals) {
    if (vals.empty()) throw DomainError("bad-dset", "distance set must be nonempty");
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    if (vals.front() <= Rat(0))
        throw DomainError("bad-dset", "distance values must be positive");
    DistanceSet s;
    s.values = std::move(vals);
    return s;
}

bool DistanceSet::contains(const Rat& v) const {
    return std::binary_search(values.begin(), values.end(), v);
}

std::optional<MetricViolation> validate_metric(const FinMetric& m) {
    const size_t n = m.points.size();
    if (m.dist.size() != n * n)
        return MetricViolation{MetricViolation::Kind::shape,
                               {},
                               "distance matrix is " + std::to_string(m.dist.size()) +
                                   " entries, expected " + std::to_string(n * n)};
    {
        std::set<std::string> ids(m.points.begin(), m.points.end());
        if (ids.size() != n)
            return MetricViolation{MetricViolation::Kind::shape, {}, "duplicate point ids"};
    }
    for (size_t i = 0; i < n; ++i)
        if (!m.at(i, i).is_zero())
            return MetricViolation{MetricViolation::Kind::diagonal,
                                   {m.points[i]},
                                   "d(" + m.points[i] + "," + m.points[i] + ") = " +
                                       m.at(i, i).str()};
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (!(m.at(i, j) == m.at(j, i)))
                return MetricViolation{MetricViolation::Kind::symmetry,
                                       {m.points[i], m.points[j]},
                                       "d(" + m.points[i] + "," + m.points[j] + ") != d(" +
                                           m.points[j] + "," + m.points[i] + ")"};
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j)
            if (i != j && !(Rat(0) < m.at(i, j)))
                return MetricViolation{MetricViolation::Kind::positivity,
                                       {m.points[i], m.points[j]},
                                       "d(" + m.points[i] + "," + m.points[j] + ") = " +
                                           m.at(i, j).str()};
    // Witness order (x, y, z) means d(x,z) > d(x,y) + d(y,z).
    for (size_t x = 0; x < n; ++x)
        for (size_t y = 0; y < n; ++y)
            for (size_t z = 0; z < n; ++z)
                if (m.at(x, y) + m.at(y, z) < m.at(x, z))
                    return MetricViolation{
                        MetricViolation::Kind::triangle,
                        {m.points[x], m.points[y], m.points[z]},
                        "d(" + m.points[x] + "," + m.points[z] + ") = " + m.at(x, z).str() +
                            " > " + m.at(x, y).str() + " + " + m.at(y, z).str()};
    return std::nullopt;
}

bool katetov_check(const FinMetric& m, const KatetovFn& r) {
    if (r.anchor.size() != r.value.size())
        throw DomainError("bad-katetov", "anchor/value length mismatch");
    require_subset(m, r.anchor, "katetov_check");
    for (const Rat& v : r.value)
        if (!(Rat(0) < v))
            throw DomainError("bad-katetov", "katetov values must be positive",
                              {{"value", v.str()}});
    for (size_t i = 0; i < r.anchor.size(); ++i)
        for (size_t j = 0; j < r.anchor.size(); ++j) {
            const Rat& d = m.at(r.anchor[i], r.anchor[j]);
            if (d < abs(r.value[i] - r.value[j])) return false;
            if (r.value[i] + r.value[j] < d) return false;
        }
    return true;
}

Rat diameter(const FinMetric& m, const std::vector<int>& subset) {
    Rat best(0);
    for (int a : subset)
        for (int b : subset) best = max(best, m.at(a, b));
    return best;
}

std::vector<Rat> expanded_value_set(const FinMetric& m, const std::vector<int>& subset) {
    require_subset(m, subset, "expanded_value_set");
    if (subset.empty())
        throw DomainError("bad-subset", "expanded_value_set: empty subset");
    const Rat diam = diameter(m, subset);
    std::set<Rat> base;
    for (int a : subset)
        for (int b : subset)
            if (a != b) base.insert(m.at(a, b));
    // Closure of {0} under adding base values while staying <= diam. Base
    // values are positive, so every chain strictly increases and terminates.
    std::set<Rat> out{Rat(0)};
    std::vector<Rat> work{Rat(0)};
    while (!work.empty()) {
        Rat s = work.back();
        work.pop_back();
        for (const Rat& v : base) {
            Rat t = s + v;
            if (diam < t) continue;
            if (out.insert(t).second) work.push_back(t);
        }
    }
    return std::vector<Rat>(out.begin(), out.end());
}

FinMetric truncate_metric(const FinMetric& m, const std::vector<int>& subset) {
    require_subset(m, subset, "truncate_metric");
    if (subset.empty())
        throw DomainError("bad-subset", "truncate_metric: empty subset");
    if (subset.size() == 1 && m.size() > 1)
        throw DomainError("bad-subset",
                          "truncate_metric: singleton subset of a multi-point space",
                          {{"point", m.points[subset[0]]}});
    const std::vector<Rat> ex = expanded_value_set(m, subset);
    const Rat diam = diameter(m, subset);
    FinMetric out(m.points);
    for (int i = 0; i < m.size(); ++i)
        for (int j = i + 1; j < m.size(); ++j) {
            const Rat& d = m.at(i, j);
            Rat v;
            if (diam < d) {
                v = diam;
            } else {
                auto it = std::lower_bound(ex.begin(), ex.end(), d);
                v = *it;  // d <= diam and diam is in ex, so it exists
            }
            out.set(i, j, v);
        }
    return out;
}

std::string mint_point_id(const std::vector<std::string>& used, const std::string& desired) {
    auto taken = [&](const std::string& s) {
        return std::find(used.begin(), used.end(), s) != used.end();
    };
    if (!taken(desired)) return desired;
    for (int k = 2;; ++k) {
        std::string s = desired + "#" + std::to_string(k);
        if (!taken(s)) return s;
    }
}

GlueResult free_amalgam(const FinMetric& x, const FinMetric& y, const FinMetric& b,
                        const std::vector<int>& into_x, const std::vector<int>& into_y) {
    if (b.size() == 0)
        throw DomainError("empty-part", "free_amalgam: common part is empty");
    if (static_cast<int>(into_x.size()) != b.size() ||
        static_cast<int>(into_y.size()) != b.size())
        throw DomainError("bad-embedding", "free_amalgam: embedding size mismatch");
    require_subset(x, into_x, "free_amalgam");
    require_subset(y, into_y, "free_amalgam");
    for (int i = 0; i < b.size(); ++i)
        for (int j = 0; j < b.size(); ++j) {
            if (!(x.at(into_x[i], into_x[j]) == b.at(i, j)))
                throw DomainError("bad-embedding", "free_amalgam: embedding into X not isometric",
                                  {{"points", {b.points[i], b.points[j]}}});
            if (!(y.at(into_y[i], into_y[j]) == b.at(i, j)))
                throw DomainError("bad-embedding", "free_amalgam: embedding into Y not isometric",
                                  {{"points", {b.points[i], b.points[j]}}});
        }

    std::vector<int> y_to_b(y.size(), -1);
    for (int i = 0; i < b.size(); ++i) y_to_b[into_y[i]] = i;

    GlueResult res;
    res.space = FinMetric(x.points);
    res.x_image.resize(x.size());
    for (int i = 0; i < x.size(); ++i) res.x_image[i] = i;
    res.y_image.assign(y.size(), -1);
    for (int j = 0; j < y.size(); ++j) {
        if (y_to_b[j] >= 0) {
            res.y_image[j] = into_x[y_to_b[j]];
            continue;
        }
        std::string id = mint_point_id(res.space.points, y.points[j]);
        res.y_image[j] = res.space.size();
        res.space.points.push_back(id);
    }
    const int n = res.space.size();
    res.space.dist.assign(static_cast<size_t>(n) * n, Rat(0));

    for (int i = 0; i < x.size(); ++i)
        for (int j = 0; j < x.size(); ++j)
            res.space.at(res.x_image[i], res.x_image[j]) = x.at(i, j);
    for (int i = 0; i < y.size(); ++i)
        for (int j = 0; j < y.size(); ++j)
            res.space.at(res.y_image[i], res.y_image[j]) = y.at(i, j);
    // Cross distances: shortest join through the common part.
    for (int i = 0; i < x.size(); ++i) {
        for (int j = 0; j < y.size(); ++j) {
            if (y_to_b[j] >= 0) continue;
            Rat best = x.at(i, into_x[0]) + y.at(into_y[0], j);
            for (int t = 1; t < b.size(); ++t)
                best = min(best, x.at(i, into_x[t]) + y.at(into_y[t], j));
            res.space.set(res.x_image[i], res.y_image[j], best);
        }
    }
    return res;
}

GlueResult free_amalgam_shared(const FinMetric& x, const FinMetric& y) {
    std::vector<int> into_x, into_y;
    std::vector<std::string> ids;
    for (int i = 0; i < x.size(); ++i) {
        int j = y.index_of(x.points[i]);
        if (j < 0) continue;
        into_x.push_back(i);
        into_y.push_back(j);
        ids.push_back(x.points[i]);
    }
    FinMetric b(ids);
    for (size_t i = 0; i < ids.size(); ++i)
        for (size_t j = 0; j < ids.size(); ++j) {
            if (!(x.at(into_x[i], into_x[j]) == y.at(into_y[i], into_y[j])))
                throw DomainError("bad-embedding",
                                  "free_amalgam: shared ids carry different metrics",
                                  {{"points", {ids[i], ids[j]}}});
            b.at(i, j) = x.at(into_x[i], into_x[j]);
        }
    return free_amalgam(x, y, b, into_x, into_y);
}

GlueResult disjoint_sum(const FinMetric& x, const FinMetric& y) {
    if (x.size() == 0 || y.size() == 0)
        throw DomainError("empty-part", "disjoint_sum: empty summand");
    std::vector<int> all_x(x.size()), all_y(y.size());
    for (int i = 0; i < x.size(); ++i) all_x[i] = i;
    for (int i = 0; i < y.size(); ++i) all_y[i] = i;

    bool all_integer = true;
    std::optional<Rat> min_pos;
    auto scan = [&](const FinMetric& m) {
        for (int i = 0; i < m.size(); ++i)
            for (int j = i + 1; j < m.size(); ++j) {
                if (!m.at(i, j).is_integer()) all_integer = false;
                if (!min_pos || m.at(i, j) < *min_pos) min_pos = m.at(i, j);
            }
    };
    scan(x);
    scan(y);
    Rat floor = all_integer ? Rat(1) : (min_pos ? *min_pos : Rat(1));
    Rat cross = max(max(diameter(x, all_x), diameter(y, all_y)), floor);

    GlueResult res;
    res.space = FinMetric(x.points);
    res.x_image = all_x;
    res.y_image.resize(y.size());
    for (int j = 0; j < y.size(); ++j) {
        std::string id = mint_point_id(res.space.points, y.points[j]);
        res.y_image[j] = res.space.size();
        res.space.points.push_back(id);
    }
    const int n = res.space.size();
    res.space.dist.assign(static_cast<size_t>(n) * n, Rat(0));
    for (int i = 0; i < x.size(); ++i)
        for (int j = 0; j < x.size(); ++j) res.space.at(i, j) = x.at(i, j);
    for (int i = 0; i < y.size(); ++i)
        for (int j = 0; j < y.size(); ++j)
            res.space.at(res.y_image[i], res.y_image[j]) = y.at(i, j);
    for (int i = 0; i < x.size(); ++i)
        for (int j = 0; j < y.size(); ++j) res.space.set(i, res.y_image[j], cross);
    return res;
}

}  // namespace forge
