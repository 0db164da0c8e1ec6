#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "crnrobust/model.hpp"

namespace crnrobust {

struct Bound {
    double value = 0.0;
    bool closed = false;

    friend bool operator==(const Bound&, const Bound&) = default;
};

/// One coordinate of a box: an interval of the extended real line whose
/// endpoints may be open or closed. Infinite endpoints are always open.
struct Range {
    Bound lo{-kInfinity, false};
    Bound hi{kInfinity, false};

    static Range all() { return {}; }
    static Range below(double v, bool closed) { return {{-kInfinity, false}, {v, closed}}; }
    static Range above(double v, bool closed) { return {{v, closed}, {kInfinity, false}}; }

    bool empty() const noexcept;
    bool unbounded() const noexcept { return lo.value == -kInfinity && hi.value == kInfinity; }
    bool contains(double y) const noexcept;
    /// Distance from y to the closure of the range.
    double distance(double y) const noexcept;

    friend bool operator==(const Range&, const Range&) = default;
};

using Box = std::vector<Range>;

/// Finite union of axis-aligned boxes in R^q. Boxes may overlap; empty boxes
/// and boxes contained in another box are pruned after every operation.
class BoxSet {
public:
    explicit BoxSet(std::size_t dim = 0) : dim_(dim) {}

    static BoxSet empty_set(std::size_t dim) { return BoxSet(dim); }
    static BoxSet full(std::size_t dim);
    /// {y | y_k in r}, other coordinates unconstrained.
    static BoxSet slab(std::size_t dim, std::size_t k, Range r);
    static BoxSet from_boxes(std::size_t dim, std::vector<Box> boxes);

    std::size_t dimension() const noexcept { return dim_; }
    const std::vector<Box>& boxes() const noexcept { return boxes_; }
    bool is_empty() const noexcept { return boxes_.empty(); }
    bool is_full() const;

    bool contains(std::span<const double> y) const;
    /// Euclidean distance from y to the closure; +inf for the empty set.
    double distance(std::span<const double> y) const;
    /// True when y lies on the boundary of some box (measure-zero set).
    bool on_boundary(std::span<const double> y) const;

    BoxSet unite(const BoxSet& other) const;
    BoxSet intersect(const BoxSet& other) const;
    BoxSet complement() const;
    /// this \ box
    BoxSet subtract(const Box& box) const;

    /// Closure rendering such as `(y1 <= 10 & y2 >= 2)`, boxes joined by ` | `;
    /// `true` for R^q and `false` for the empty set. Boxes are sorted.
    std::string to_string() const;

private:
    void add(Box b);
    std::size_t dim_;
    std::vector<Box> boxes_;
};

bool box_empty(const Box& b) noexcept;
bool box_contains(const Box& outer, const Box& inner) noexcept;
Box box_intersect(const Box& a, const Box& b);

}  // namespace crnrobust
