#include "crnrobust/boxset.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "crnrobust/ltl.hpp"

namespace crnrobust {

bool Range::empty() const noexcept {
    if (lo.value > hi.value) return true;
    return lo.value == hi.value && !(lo.closed && hi.closed);
}

bool Range::contains(double y) const noexcept {
    const bool above_lo = y > lo.value || (y == lo.value && lo.closed);
    const bool below_hi = y < hi.value || (y == hi.value && hi.closed);
    return above_lo && below_hi;
}

double Range::distance(double y) const noexcept {
    if (y < lo.value) return lo.value - y;
    if (y > hi.value) return y - hi.value;
    return 0.0;
}

namespace {

Bound max_lo(const Bound& a, const Bound& b) {
    if (a.value != b.value) return a.value > b.value ? a : b;
    return {a.value, a.closed && b.closed};
}

Bound min_hi(const Bound& a, const Bound& b) {
    if (a.value != b.value) return a.value < b.value ? a : b;
    return {a.value, a.closed && b.closed};
}

// outer lower bound admits everything the inner lower bound admits
bool lo_covers(const Bound& outer, const Bound& inner) {
    return outer.value < inner.value || (outer.value == inner.value && (outer.closed || !inner.closed));
}

bool hi_covers(const Bound& outer, const Bound& inner) {
    return outer.value > inner.value || (outer.value == inner.value && (outer.closed || !inner.closed));
}

Range range_intersect(const Range& a, const Range& b) { return {max_lo(a.lo, b.lo), min_hi(a.hi, b.hi)}; }

bool range_contains(const Range& outer, const Range& inner) {
    return inner.empty() || (lo_covers(outer.lo, inner.lo) && hi_covers(outer.hi, inner.hi));
}

/// Union of two ranges when it is itself a range.
std::optional<Range> range_merge(const Range& a, const Range& b) {
    const Range& first = lo_covers(a.lo, b.lo) ? a : b;
    const Range& second = &first == &a ? b : a;
    const bool joined = first.hi.value > second.lo.value ||
                        (first.hi.value == second.lo.value && (first.hi.closed || second.lo.closed));
    if (!joined) return std::nullopt;
    Range r;
    r.lo = first.lo;
    r.hi = hi_covers(first.hi, second.hi) ? first.hi : second.hi;
    return r;
}

std::optional<Box> box_merge(const Box& a, const Box& b) {
    std::optional<std::size_t> diff;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == b[k]) continue;
        if (diff) return std::nullopt;
        diff = k;
    }
    if (!diff) return a;
    auto r = range_merge(a[*diff], b[*diff]);
    if (!r) return std::nullopt;
    Box m = a;
    m[*diff] = *r;
    return m;
}

}  // namespace

bool box_empty(const Box& b) noexcept {
    return std::any_of(b.begin(), b.end(), [](const Range& r) { return r.empty(); });
}

bool box_contains(const Box& outer, const Box& inner) noexcept {
    if (box_empty(inner)) return true;
    for (std::size_t k = 0; k < outer.size(); ++k)
        if (!range_contains(outer[k], inner[k])) return false;
    return true;
}

Box box_intersect(const Box& a, const Box& b) {
    Box out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = range_intersect(a[k], b[k]);
    return out;
}

BoxSet BoxSet::full(std::size_t dim) {
    BoxSet s(dim);
    s.boxes_.push_back(Box(dim));
    return s;
}

BoxSet BoxSet::slab(std::size_t dim, std::size_t k, Range r) {
    BoxSet s(dim);
    Box b(dim);
    b.at(k) = r;
    s.add(std::move(b));
    return s;
}

BoxSet BoxSet::from_boxes(std::size_t dim, std::vector<Box> boxes) {
    BoxSet s(dim);
    for (auto& b : boxes) {
        if (b.size() != dim) throw std::invalid_argument("box dimension mismatch");
        s.add(std::move(b));
    }
    return s;
}

bool BoxSet::is_full() const {
    return std::any_of(boxes_.begin(), boxes_.end(), [](const Box& b) {
        return std::all_of(b.begin(), b.end(), [](const Range& r) { return r.unbounded(); });
    });
}

void BoxSet::add(Box b) {
    if (box_empty(b)) return;
    for (const auto& existing : boxes_)
        if (box_contains(existing, b)) return;
    std::erase_if(boxes_, [&](const Box& existing) { return box_contains(b, existing); });
    // Coalesce with neighbours that differ in a single coordinate; repeat
    // because a merged box may absorb or join further boxes.
    for (bool merged = true; merged;) {
        merged = false;
        for (auto it = boxes_.begin(); it != boxes_.end(); ++it) {
            if (auto m = box_merge(*it, b)) {
                b = std::move(*m);
                boxes_.erase(it);
                std::erase_if(boxes_, [&](const Box& existing) { return box_contains(b, existing); });
                merged = true;
                break;
            }
        }
    }
    boxes_.push_back(std::move(b));
}

bool BoxSet::contains(std::span<const double> y) const {
    for (const auto& b : boxes_) {
        bool in = true;
        for (std::size_t k = 0; k < dim_ && in; ++k) in = b[k].contains(y[k]);
        if (in) return true;
    }
    return false;
}

double BoxSet::distance(std::span<const double> y) const {
    double best = kInfinity;
    for (const auto& b : boxes_) {
        double s = 0.0;
        for (std::size_t k = 0; k < dim_; ++k) {
            const double d = b[k].distance(y[k]);
            s += d * d;
        }
        best = std::min(best, std::sqrt(s));
    }
    return best;
}

bool BoxSet::on_boundary(std::span<const double> y) const {
    for (const auto& b : boxes_)
        for (std::size_t k = 0; k < dim_; ++k)
            if (y[k] == b[k].lo.value || y[k] == b[k].hi.value) return true;
    return false;
}

BoxSet BoxSet::unite(const BoxSet& other) const {
    BoxSet out = *this;
    for (const auto& b : other.boxes_) out.add(b);
    return out;
}

BoxSet BoxSet::intersect(const BoxSet& other) const {
    BoxSet out(dim_);
    for (const auto& a : boxes_)
        for (const auto& b : other.boxes_) out.add(box_intersect(a, b));
    return out;
}

BoxSet BoxSet::subtract(const Box& cut) const {
    BoxSet out(dim_);
    for (const auto& a : boxes_) {
        if (box_empty(box_intersect(a, cut))) {
            out.add(a);
            continue;
        }
        // Peel off the parts of `a` outside `cut`, one coordinate at a time.
        Box rest = a;
        for (std::size_t k = 0; k < dim_; ++k) {
            if (cut[k].lo.value != -kInfinity) {
                Box below = rest;
                below[k] = range_intersect(rest[k], Range{{-kInfinity, false}, {cut[k].lo.value, !cut[k].lo.closed}});
                out.add(std::move(below));
            }
            if (cut[k].hi.value != kInfinity) {
                Box above = rest;
                above[k] = range_intersect(rest[k], Range{{cut[k].hi.value, !cut[k].hi.closed}, {kInfinity, false}});
                out.add(std::move(above));
            }
            rest[k] = range_intersect(rest[k], cut[k]);
        }
    }
    return out;
}

BoxSet BoxSet::complement() const {
    BoxSet out = full(dim_);
    for (const auto& b : boxes_) {
        out = out.subtract(b);
        if (out.is_empty()) break;
    }
    return out;
}

std::string BoxSet::to_string() const {
    if (boxes_.empty()) return "false";
    if (is_full()) return "true";
    auto sorted = boxes_;
    std::sort(sorted.begin(), sorted.end(), [](const Box& a, const Box& b) {
        for (std::size_t k = 0; k < a.size(); ++k) {
            if (a[k].lo.value != b[k].lo.value) return a[k].lo.value < b[k].lo.value;
            if (a[k].hi.value != b[k].hi.value) return a[k].hi.value < b[k].hi.value;
        }
        return false;
    });
    std::string out;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i) out += " | ";
        out += '(';
        bool first = true;
        for (std::size_t k = 0; k < dim_; ++k) {
            const auto var = "y" + std::to_string(k + 1);
            const auto& r = sorted[i][k];
            if (r.lo.value != -kInfinity) {
                out += (first ? "" : " & ") + var + " >= " + format_number(r.lo.value);
                first = false;
            }
            if (r.hi.value != kInfinity) {
                out += (first ? "" : " & ") + var + " <= " + format_number(r.hi.value);
                first = false;
            }
        }
        out += ')';
    }
    return out;
}

}  // namespace crnrobust
