#pragma once

#include <optional>
#include <string>
#include <vector>

#include "forge/rational.hpp"

namespace forge {

/**
 * Finite metric space over named points. Distances are kept as a full n*n
 * symmetric matrix of exact rationals with zero diagonal. The struct itself
 * is plain data; validate_metric reports axiom violations instead of the
 * constructor enforcing them, so malformed spaces can be loaded and examined.
 */
struct FinMetric {
    std::vector<std::string> points;
    std::vector<Rat> dist;  // row-major, size points.size()^2

    FinMetric() = default;
    explicit FinMetric(std::vector<std::string> ids)
        : points(std::move(ids)), dist(points.size() * points.size(), Rat(0)) {}

    int size() const { return static_cast<int>(points.size()); }

    const Rat& at(int i, int j) const { return dist[static_cast<size_t>(i) * points.size() + j]; }
    Rat& at(int i, int j) { return dist[static_cast<size_t>(i) * points.size() + j]; }

    void set(int i, int j, const Rat& v) {
        at(i, j) = v;
        at(j, i) = v;
    }

    // -1 when the id is absent.
    int index_of(const std::string& id) const {
        for (int i = 0; i < size(); ++i)
            if (points[i] == id) return i;
        return -1;
    }

    bool has_point(const std::string& id) const { return index_of(id) >= 0; }
};

struct MetricViolation {
    enum class Kind { shape, diagonal, symmetry, positivity, triangle };
    Kind kind;
    std::vector<std::string> witness;  // offending point ids, in check order
    std::string message;
};

/**
 * Set of allowed distance values. `bound` is set for the integer ranges
 * {1, ..., n}; generic finite value sets keep it empty. `values` is sorted
 * ascending and strictly positive.
 */
struct DistanceSet {
    std::vector<Rat> values;
    std::optional<int> bound;

    static DistanceSet integer_range(int n);
    static DistanceSet from_values(std::vector<Rat> vals);

    bool contains(const Rat& v) const;
    Rat maximum() const { return values.back(); }
};

/** One-point extension data: r(anchor[i]) = value[i] over a host space. */
struct KatetovFn {
    std::vector<int> anchor;  // distinct point indices of the host
    std::vector<Rat> value;   // parallel to anchor, strictly positive
};

/** Result of a gluing construction, with index maps from each input. */
struct GlueResult {
    FinMetric space;
    std::vector<int> x_image;  // X point index -> result index
    std::vector<int> y_image;  // Y point index -> result index
};

// Checks shape, zero diagonal, symmetry, positivity, and every ordered
// triangle d(x,z) <= d(x,y) + d(y,z); reports the first violation in point
// order, with malformed shape reported distinctly from axiom violations.
std::optional<MetricViolation> validate_metric(const FinMetric& m);

// True iff |r(x) - r(y)| <= d(x,y) <= r(x) + r(y) for all x, y in the anchor.
// Throws DomainError for out-of-range indices, duplicates, or r <= 0.
bool katetov_check(const FinMetric& m, const KatetovFn& r);

Rat diameter(const FinMetric& m, const std::vector<int>& subset);

// All sums r_1 + ... + r_t of values of d on subset x subset that stay
// <= diam(subset), as a sorted vector. Always contains 0 and the diameter.
std::vector<Rat> expanded_value_set(const FinMetric& m, const std::vector<int>& subset);

// Metric with d'(x,y) = min{s in Ex(subset) : d(x,y) <= s} when
// d(x,y) <= diam(subset), else diam(subset). Rejects empty subsets, and
// singleton subsets when the space has more than one point (Ex would be {0}).
FinMetric truncate_metric(const FinMetric& m, const std::vector<int>& subset);

// Gluing of X and Y along isometric copies of a common part B. into_x / into_y
// list the X / Y point index of each B point. Cross distances are
// min over b of d_X(x, b) + d_Y(b, y). Result keeps X ids; Y ids are minted
// fresh on collision.
GlueResult free_amalgam(const FinMetric& x, const FinMetric& y, const FinMetric& b,
                        const std::vector<int>& into_x, const std::vector<int>& into_y);

// Convenience overload: B is the set of ids present in both spaces (checked
// to carry identical metrics).
GlueResult free_amalgam_shared(const FinMetric& x, const FinMetric& y);

// Disjoint union with constant cross distance max(diam X, diam Y, floor),
// where floor is 1 when all distances are integers, else the smallest
// positive distance of either space, else 1. Rejects empty inputs.
GlueResult disjoint_sum(const FinMetric& x, const FinMetric& y);

// `desired` if unused, else the first free "desired#k" for k = 2, 3, ...
std::string mint_point_id(const std::vector<std::string>& used, const std::string& desired);

}  // namespace forge
