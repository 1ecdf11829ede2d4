#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exm/intervals.hpp"
#include "exm/measure.hpp"
#include "exm/xreal.hpp"

namespace exm {

namespace detail {

// Cut the line at the given points: ]-oo,e1], ]e1,e2], ..., ]ek,+oo].
// Each cell carries a representative point (step functions over these cuts
// are constant on every cell, and every cell contains its representative).
struct LineCell {
    XReal lo;
    XReal hi;
    Q rep;
};

inline std::vector<LineCell> line_cells(std::vector<Q> cuts) {
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<LineCell> cells;
    if (cuts.empty()) {
        cells.push_back({XReal::neg_inf(), XReal::pos_inf(), Q(0)});
        return cells;
    }
    cells.push_back({XReal::neg_inf(), XReal(cuts.front()), cuts.front()});
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        cells.push_back({XReal(cuts[i]), XReal(cuts[i + 1]), cuts[i + 1]});
    cells.push_back({XReal(cuts.back()), XReal::pos_inf(), Q(cuts.back() + 1)});
    return cells;
}

inline void collect_cuts(const IntervalSet& s, std::vector<Q>& cuts) {
    for (const auto& c : s.components()) {
        if (c.lo.is_finite()) cuts.push_back(c.lo.fin());
        if (c.hi.is_finite()) cuts.push_back(c.hi.fin());
    }
}

} // namespace detail

struct StepPiece {
    Q value;
    IntervalSet support;

    friend bool operator==(const StepPiece&, const StepPiece&) = default;
};

// One constancy region ]lo, hi] with its nonzero value; the position-sorted
// view of a step function.
struct FlatPiece {
    XReal lo;
    XReal hi;
    Q value;
};

/// Simple function on the line in partition-by-value normal form: one piece
/// per distinct nonzero value, supports pairwise disjoint and canonical,
/// pieces sorted by value, zero everywhere else. Equal functions have equal
/// representations. A derived position-sorted view backs logarithmic
/// evaluation and linear pointwise sweeps.
class StepFn {
public:
    StepFn() = default;   // the zero function

    /// Pointwise sum of the raw pieces (overlapping supports add values).
    /// A single boundary sweep: +value where a component starts, -value
    /// where one ends, regions grouped by the running sum.
    static StepFn make(const std::vector<StepPiece>& raw) {
        std::vector<std::pair<Q, Q>> events;   // coordinate -> value delta
        Q at_minus_inf(0);
        for (const auto& p : raw)
            for (const auto& c : p.support.components()) {
                if (c.lo.is_finite())
                    events.emplace_back(c.lo.fin(), p.value);
                else
                    at_minus_inf += p.value;
                if (c.hi.is_finite()) events.emplace_back(c.hi.fin(), Q(-p.value));
            }
        std::sort(events.begin(), events.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });

        StepFn f;
        std::map<Q, std::vector<std::pair<XReal, XReal>>> by_value;
        XReal prev = XReal::neg_inf();
        Q running = at_minus_inf;
        std::size_t i = 0;
        auto emit = [&](const XReal& hi) {
            if (running != 0 && prev < hi) {
                auto& regions = by_value[running];
                if (!regions.empty() && regions.back().second == prev)
                    regions.back().second = hi;   // adjacent, same value
                else
                    regions.emplace_back(prev, hi);
                f.flat_.push_back({prev, hi, running});
            }
        };
        while (i < events.size()) {
            const Q coord = events[i].first;
            emit(XReal(coord));
            while (i < events.size() && events[i].first == coord) {
                running += events[i].second;
                ++i;
            }
            prev = XReal(coord);
        }
        emit(XReal::pos_inf());

        // Merge flat regions that stayed adjacent with equal values.
        std::vector<FlatPiece> merged;
        for (auto& r : f.flat_) {
            if (!merged.empty() && merged.back().hi == r.lo && merged.back().value == r.value)
                merged.back().hi = r.hi;
            else
                merged.push_back(std::move(r));
        }
        f.flat_ = std::move(merged);
        for (auto& [v, regions] : by_value)
            f.pieces_.push_back({v, IntervalSet::normalized(std::move(regions))});
        return f;
    }

    /// Adopt pieces that already form a canonical step function: strictly
    /// increasing nonzero values and pairwise disjoint canonical supports.
    /// Linear when the supports are listed left to right.
    static StepFn from_canonical(std::vector<StepPiece> pieces) {
        StepFn f;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            if (pieces[i].value == 0 || pieces[i].support.is_empty())
                throw domain_error("StepFn: canonical pieces must be nonzero and nonempty");
            if (i > 0 && !(pieces[i - 1].value < pieces[i].value))
                throw domain_error("StepFn: canonical pieces must have increasing values");
            for (const auto& c : pieces[i].support.components())
                f.flat_.push_back({c.lo, c.hi, pieces[i].value});
        }
        auto by_pos = [](const FlatPiece& a, const FlatPiece& b) { return a.lo < b.lo; };
        if (!std::is_sorted(f.flat_.begin(), f.flat_.end(), by_pos))
            std::sort(f.flat_.begin(), f.flat_.end(), by_pos);
        for (std::size_t i = 0; i + 1 < f.flat_.size(); ++i)
            if (!(f.flat_[i].hi <= f.flat_[i + 1].lo))
                throw domain_error("StepFn: canonical pieces must be disjoint");
        f.pieces_ = std::move(pieces);
        return f;
    }

    const std::vector<StepPiece>& pieces() const { return pieces_; }

    /// All constancy regions with nonzero value, left to right.
    const std::vector<FlatPiece>& flat() const { return flat_; }

    bool is_zero() const { return pieces_.empty(); }

    Q operator()(const Q& x) const {
        const XReal xv{x};
        auto it = std::partition_point(flat_.begin(), flat_.end(),
                                       [&](const FlatPiece& p) { return p.lo < xv; });
        if (it == flat_.begin()) return Q(0);
        --it;
        return xv <= it->hi ? it->value : Q(0);
    }

    /// Union of the nonzero-value supports.
    IntervalSet support() const {
        std::vector<std::pair<XReal, XReal>> raw;
        for (const auto& p : flat_) raw.emplace_back(p.lo, p.hi);
        return IntervalSet::normalized(std::move(raw));
    }

    bool nonnegative() const {
        return pieces_.empty() || pieces_.front().value > 0;
    }

    friend bool operator==(const StepFn& a, const StepFn& b) {
        return a.pieces_ == b.pieces_;
    }

private:
    std::vector<StepPiece> pieces_;
    std::vector<FlatPiece> flat_;
};

inline StepFn step_add(const StepFn& f, const StepFn& g) {
    std::vector<StepPiece> raw = f.pieces();
    raw.insert(raw.end(), g.pieces().begin(), g.pieces().end());
    return StepFn::make(raw);
}

inline StepFn step_neg(const StepFn& f) {
    std::vector<StepPiece> pieces;
    for (auto it = f.pieces().rbegin(); it != f.pieces().rend(); ++it)
        pieces.push_back({Q(-it->value), it->support});
    return StepFn::from_canonical(std::move(pieces));
}

inline StepFn step_sub(const StepFn& f, const StepFn& g) { return step_add(f, step_neg(g)); }

inline StepFn step_scale(const Q& c, const StepFn& f) {
    if (c == 0) return StepFn();
    std::vector<StepPiece> pieces;
    if (c > 0)
        for (const auto& p : f.pieces()) pieces.push_back({Q(c * p.value), p.support});
    else
        for (auto it = f.pieces().rbegin(); it != f.pieces().rend(); ++it)
            pieces.push_back({Q(c * it->value), it->support});
    return StepFn::from_canonical(std::move(pieces));
}

/// Pointwise product over the common refinement of both support partitions.
inline StepFn step_mul(const StepFn& f, const StepFn& g) {
    std::vector<Q> cuts;
    for (const auto& p : f.pieces()) detail::collect_cuts(p.support, cuts);
    for (const auto& p : g.pieces()) detail::collect_cuts(p.support, cuts);
    std::vector<StepPiece> raw;
    for (const auto& cell : detail::line_cells(std::move(cuts))) {
        const Q v = f(cell.rep) * g(cell.rep);
        if (v != 0) raw.push_back({v, IntervalSet::interval(cell.lo, cell.hi)});
    }
    return StepFn::make(raw);
}

/// The preimage partition of the line: every piece, plus the implicit zero
/// piece on the complement of the support when that is nonempty.
inline std::vector<StepPiece> range_preimage(const StepFn& f) {
    std::vector<StepPiece> out = f.pieces();
    IntervalSet zero_cell = complement(f.support());
    if (!zero_cell.is_empty()) out.push_back({Q(0), std::move(zero_cell)});
    return out;
}

/// The function as a combination of indicators: (y, preimage of y) for each
/// nonzero value y. Feeding the result back through StepFn::make reproduces
/// the function exactly.
inline std::vector<StepPiece> value_decomposition(const StepFn& f) { return f.pieces(); }

/// Split into nonnegative parts: f = plus - minus, plus * minus = 0.
inline std::pair<StepFn, StepFn> pos_neg_parts(const StepFn& f) {
    std::vector<StepPiece> pos, neg;
    for (const auto& p : f.pieces())
        if (p.value > 0) pos.push_back(p);
    for (auto it = f.pieces().rbegin(); it != f.pieces().rend(); ++it)
        if (it->value < 0) neg.push_back({Q(-it->value), it->support});
    return {StepFn::from_canonical(std::move(pos)), StepFn::from_canonical(std::move(neg))};
}

/// Total function on a finite universe; finite image is automatic.
struct DiscreteFn {
    FiniteUniverse universe;
    std::vector<Q> values;

    DiscreteFn(FiniteUniverse u, std::vector<Q> v)
        : universe(std::move(u)), values(std::move(v)) {
        if (values.size() != universe.size())
            throw domain_error("discrete function: one value per atom required");
    }
};

/// The measure an integral runs against: either length measure on interval
/// sets, or a weight measure on a finite universe.
class MeasureSpec {
public:
    static MeasureSpec lebesgue() { return MeasureSpec(std::nullopt); }
    static MeasureSpec weights(WeightMeasure wm) { return MeasureSpec(std::move(wm)); }

    bool is_lebesgue() const { return !wm_.has_value(); }

    const WeightMeasure& weight_measure() const {
        if (!wm_) throw domain_error("measure spec: not a weight measure");
        return *wm_;
    }

    XReal measure_of(const IntervalSet& a) const {
        if (wm_) throw domain_error("measure spec: weight measures do not measure "
                                    "interval sets");
        return lebesgue_measure(a);
    }

private:
    explicit MeasureSpec(std::optional<WeightMeasure> wm) : wm_(std::move(wm)) {}
    std::optional<WeightMeasure> wm_;
};

namespace detail {

// Common integral core: consumes a finite value partition (value, measure
// of its preimage) in ascending value order. Terms y * mu(preimage) use the
// 0 * oo = 0 convention; a sum holding both +oo and -oo terms is rejected
// instead of silently collapsing to -oo.
class IntegralAccumulator {
public:
    explicit IntegralAccumulator(bool nonneg_required)
        : nonneg_required_(nonneg_required) {}

    void feed(const Q& y, const XReal& m) {
        if (nonneg_required_ && y < 0)
            throw domain_error("simple_integral: negative value where nonnegative "
                               "values are required");
        const XReal t = mul(XReal(y), m);
        seen_pos_inf_ |= t.is_pos_inf();
        seen_neg_inf_ |= t.is_neg_inf();
        total_ = add(total_, t);
    }

    XReal finish() const {
        if (seen_pos_inf_ && seen_neg_inf_)
            throw non_integrable_error("simple_integral: +oo and -oo terms in one sum");
        return total_;
    }

private:
    bool nonneg_required_;
    bool seen_pos_inf_ = false, seen_neg_inf_ = false;
    XReal total_{Q(0)};
};

} // namespace detail

/// Integral of a simple function: sum over the nonzero range of
/// value * measure(preimage), in ascending value order.
inline XReal simple_integral(const MeasureSpec& mu, const StepFn& f,
                             bool nonneg_required = false) {
    detail::IntegralAccumulator acc(nonneg_required);
    for (const auto& p : f.pieces()) acc.feed(p.value, mu.measure_of(p.support));
    return acc.finish();
}

inline XReal simple_integral(const MeasureSpec& mu, const DiscreteFn& f,
                             bool nonneg_required = false) {
    const WeightMeasure& wm = mu.weight_measure();
    if (!(wm.universe == f.universe))
        throw domain_error("simple_integral: function and measure live on different "
                           "universes");
    std::map<Q, mask_t> preimages;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (f.values[i] != 0) preimages[f.values[i]] |= mask_t(1) << i;
    detail::IntegralAccumulator acc(nonneg_required);
    for (const auto& [y, m] : preimages) acc.feed(y, eval(wm, m));
    return acc.finish();
}

inline std::string to_string(const StepFn& f) {
    if (f.is_zero()) return "0*1[(0,0]]";
    std::string out;
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        const auto& p = f.pieces()[i];
        if (i == 0) {
            out += to_string(p.value);
        } else if (p.value < 0) {
            out += " - " + to_string(Q(-p.value));
        } else {
            out += " + " + to_string(p.value);
        }
        out += "*1[" + to_string(p.support) + "]";
    }
    return out;
}

} // namespace exm
