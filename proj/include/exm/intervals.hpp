#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exm/error.hpp"
#include "exm/xreal.hpp"

namespace exm {

/// Half-open interval ]lo, hi] over the rationals. lo may be -oo and hi may
/// be +oo (rays); lo < hi always, so the interval is nonempty.
struct Interval {
    XReal lo;
    XReal hi;

    Interval(XReal lo_, XReal hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
        if (!(lo < hi)) throw domain_error("Interval: requires lo < hi");
    }

    bool contains(const Q& x) const { return lo < XReal(x) && XReal(x) <= hi; }
    XReal length() const { return sub(hi, lo); }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Canonical finite union of half-open intervals: components sorted by lower
/// bound, pairwise disjoint and non-adjacent (hi_i < lo_{i+1}). Two sets
/// denote the same points iff their representations are equal.
class IntervalSet {
public:
    IntervalSet() = default;   // empty set

    /// Union of arbitrary bound pairs; pairs with lo >= hi are empty and are
    /// dropped, the rest is merged into canonical form.
    static IntervalSet normalized(std::vector<std::pair<XReal, XReal>> raw) {
        std::vector<std::pair<XReal, XReal>> live;
        live.reserve(raw.size());
        for (auto& p : raw)
            if (p.first < p.second) live.push_back(std::move(p));
        std::sort(live.begin(), live.end(), [](const auto& a, const auto& b) {
            return a.first < b.first || (a.first == b.first && a.second < b.second);
        });
        IntervalSet out;
        for (auto& [lo, hi] : live) {
            if (!out.comps_.empty() && lo <= out.comps_.back().hi) {
                if (out.comps_.back().hi < hi) out.comps_.back().hi = hi;
            } else {
                out.comps_.emplace_back(lo, hi);
            }
        }
        return out;
    }

    static IntervalSet interval(const XReal& lo, const XReal& hi) {
        IntervalSet out;
        if (lo < hi) out.comps_.emplace_back(lo, hi);
        return out;
    }

    static IntervalSet full_line() {
        return interval(XReal::neg_inf(), XReal::pos_inf());
    }

    /// The decomposition into disjoint semiring pieces; empty list for the
    /// empty set.
    const std::vector<Interval>& components() const { return comps_; }

    bool is_empty() const { return comps_.empty(); }

    bool contains(const Q& x) const {
        const XReal xv{x};
        auto it = std::partition_point(comps_.begin(), comps_.end(),
                                       [&](const Interval& c) { return c.lo < xv; });
        if (it == comps_.begin()) return false;
        return xv <= std::prev(it)->hi;
    }

    /// Smallest interval containing the set; nullopt for the empty set.
    std::optional<Interval> hull() const {
        if (comps_.empty()) return std::nullopt;
        return Interval(comps_.front().lo, comps_.back().hi);
    }

    /// Length of the hull (not of the set): 0 on empty, +oo when unbounded.
    XReal hull_length() const {
        if (comps_.empty()) return XReal(Q(0));
        return sub(comps_.back().hi, comps_.front().lo);
    }

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<Interval> comps_;
};

inline IntervalSet set_union(const IntervalSet& a, const IntervalSet& b) {
    std::vector<std::pair<XReal, XReal>> raw;
    raw.reserve(a.components().size() + b.components().size());
    for (const auto& c : a.components()) raw.emplace_back(c.lo, c.hi);
    for (const auto& c : b.components()) raw.emplace_back(c.lo, c.hi);
    return IntervalSet::normalized(std::move(raw));
}

inline IntervalSet set_intersection(const IntervalSet& a, const IntervalSet& b) {
    std::vector<std::pair<XReal, XReal>> raw;
    std::size_t i = 0, j = 0;
    const auto& ca = a.components();
    const auto& cb = b.components();
    while (i < ca.size() && j < cb.size()) {
        const XReal lo = max(ca[i].lo, cb[j].lo);
        const XReal hi = min(ca[i].hi, cb[j].hi);
        if (lo < hi) raw.emplace_back(lo, hi);
        // advance the component that ends first
        if (ca[i].hi < cb[j].hi)
            ++i;
        else
            ++j;
    }
    return IntervalSet::normalized(std::move(raw));
}

inline IntervalSet set_difference(const IntervalSet& a, const IntervalSet& b) {
    std::vector<std::pair<XReal, XReal>> raw;
    const auto& cb = b.components();
    std::size_t j = 0;
    for (const auto& c : a.components()) {
        XReal cur = c.lo;
        // skip b-components entirely to the left of c
        while (j < cb.size() && cb[j].hi <= c.lo) ++j;
        for (std::size_t k = j; k < cb.size() && cb[k].lo < c.hi; ++k) {
            if (cur < cb[k].lo) raw.emplace_back(cur, cb[k].lo);
            cur = max(cur, cb[k].hi);
        }
        if (cur < c.hi) raw.emplace_back(cur, c.hi);
    }
    return IntervalSet::normalized(std::move(raw));
}

/// Complement within the full line; exact because ]a,b] complements split
/// into the rays ]-oo,a] and ]b,+oo].
inline IntervalSet complement(const IntervalSet& a) {
    std::vector<std::pair<XReal, XReal>> raw;
    XReal cur = XReal::neg_inf();
    for (const auto& c : a.components()) {
        if (cur < c.lo) raw.emplace_back(cur, c.lo);
        cur = c.hi;
    }
    if (cur < XReal::pos_inf()) raw.emplace_back(cur, XReal::pos_inf());
    return IntervalSet::normalized(std::move(raw));
}

enum class SetOp { Union, Intersection, Difference };

inline IntervalSet set_op(SetOp kind, const IntervalSet& a, const IntervalSet& b) {
    switch (kind) {
        case SetOp::Union: return set_union(a, b);
        case SetOp::Intersection: return set_intersection(a, b);
        default: return set_difference(a, b);
    }
}

/// Does some component of the set contain the whole interval? No
/// allocation; used as the fast path for restriction and inclusion.
inline bool covers(const IntervalSet& s, const Interval& c) {
    const auto& cs = s.components();
    auto it = std::partition_point(cs.begin(), cs.end(),
                                   [&](const Interval& d) { return d.lo <= c.lo; });
    if (it == cs.begin()) return false;
    return c.hi <= std::prev(it)->hi;
}

inline bool is_subset(const IntervalSet& a, const IntervalSet& b) {
    for (const auto& c : a.components())
        if (!covers(b, c)) return false;
    return true;
}

/// Exact length measure: the sum of component lengths. Coincides with
/// hull_length on single bounded intervals but not on sets with gaps.
inline XReal lebesgue_measure(const IntervalSet& a) {
    XReal total{Q(0)};
    for (const auto& c : a.components()) total = add(total, c.length());
    return total;
}

inline std::string to_string(const Interval& c) {
    return "(" + to_string(c.lo) + "," + to_string(c.hi) + "]";
}

// Canonical rendering; the empty set prints as the empty interval "(0,0]".
inline std::string to_string(const IntervalSet& s) {
    if (s.is_empty()) return "(0,0]";
    std::string out;
    for (std::size_t i = 0; i < s.components().size(); ++i) {
        if (i > 0) out += " U ";
        out += to_string(s.components()[i]);
    }
    return out;
}

} // namespace exm
