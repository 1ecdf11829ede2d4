#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "exm/intervals.hpp"
#include "exm/simplefn.hpp"
#include "exm/xreal.hpp"

namespace exm {

/// f restricted to D: equals f on D, zero elsewhere.
inline StepFn restrict_to(const StepFn& f, const IntervalSet& d) {
    std::vector<StepPiece> pieces;
    pieces.reserve(f.pieces().size());
    for (const auto& p : f.pieces()) {
        if (is_subset(p.support, d)) {   // common case, no sweep needed
            pieces.push_back(p);
            continue;
        }
        IntervalSet s = set_intersection(p.support, d);
        if (!s.is_empty()) pieces.push_back({p.value, std::move(s)});
    }
    return StepFn::from_canonical(std::move(pieces));
}

inline StepFn step_abs(const StepFn& f) {
    auto [plus, minus] = pos_neg_parts(f);
    return step_add(plus, minus);
}

/// Lebesgue integral of a step function over a domain, via positive and
/// negative parts. Exact: for a step function the supremum over dominated
/// simple functions is attained at the function itself, so no approximation
/// enters. Both parts infinite is a non-integrable function.
inline XReal integrate(const MeasureSpec& mu, const IntervalSet& d, const StepFn& f) {
    const StepFn g = restrict_to(f, d);
    auto [plus, minus] = pos_neg_parts(g);
    const XReal ip = simple_integral(mu, plus, true);
    const XReal im = simple_integral(mu, minus, true);
    if (ip.is_pos_inf() && im.is_pos_inf())
        throw non_integrable_error("integrate: positive and negative parts both "
                                   "infinite");
    return sub(ip, im);
}

/// A point with f(x) > g(x), if one exists. Exact and linear: one merged
/// sweep over both position-sorted views, comparing the constant value on
/// every region of the common refinement.
inline std::optional<Q> pointwise_le_witness(const StepFn& f, const StepFn& g) {
    const auto& fa = f.flat();
    const auto& ga = g.flat();
    std::size_t i = 0, j = 0;
    XReal cur = XReal::neg_inf();
    auto witness_in = [](const XReal& lo, const XReal& hi) {
        if (hi.is_finite()) return hi.fin();
        if (lo.is_finite()) return Q(lo.fin() + 1);
        return Q(0);
    };
    while (i < fa.size() || j < ga.size()) {
        // Next boundary strictly right of cur, from either function.
        XReal next = XReal::pos_inf();
        if (i < fa.size()) next = min(next, cur < fa[i].lo ? fa[i].lo : fa[i].hi);
        if (j < ga.size()) next = min(next, cur < ga[j].lo ? ga[j].lo : ga[j].hi);
        // Region ]cur, next] lies inside one constancy region of each.
        const bool in_f = i < fa.size() && !(cur < fa[i].lo);
        const bool in_g = j < ga.size() && !(cur < ga[j].lo);
        const Q vf = in_f ? fa[i].value : Q(0);
        const Q vg = in_g ? ga[j].value : Q(0);
        if (vf > vg) return witness_in(cur, next);
        if (i < fa.size() && fa[i].hi == next) ++i;
        if (j < ga.size() && ga[j].hi == next) ++j;
        cur = next;
    }
    return std::nullopt;
}

/// Caller-supplied approximating sequence of step functions. The generator
/// must be a pure function of the index.
struct ApproxSeq {
    std::function<StepFn(std::size_t)> at;
    bool declared_monotone = true;
};

struct SupResult {
    XReal value;
    bool converged = false;
    std::size_t index = 0;   // last index evaluated
};

/// Supremum of integrals along a monotone nonnegative sequence: integrals
/// are evaluated exactly and the scan stops once an increment drops below
/// tol (or immediately on +oo). The value is always an exact lower bound
/// for the supremum. Monotonicity is spot-checked on the probe grid at
/// every step, which is a sound total check for step functions.
inline SupResult nnintegral_sup(const MeasureSpec& mu, const IntervalSet& d,
                                const ApproxSeq& seq, const Q& tol, std::size_t max_n) {
    if (!seq.declared_monotone)
        throw domain_error("nnintegral_sup: sequence not declared monotone");
    if (max_n == 0) throw domain_error("nnintegral_sup: needs at least one index");
    StepFn prev = seq.at(0);
    if (!prev.nonnegative()) throw domain_error("nnintegral_sup: negative value at index 0");
    XReal cur = simple_integral(mu, restrict_to(prev, d), true);
    if (cur.is_pos_inf()) return {cur, true, 0};
    for (std::size_t n = 1; n < max_n; ++n) {
        StepFn f = seq.at(n);
        if (!f.nonnegative())
            throw domain_error("nnintegral_sup: negative value at index " + std::to_string(n));
        if (auto x = pointwise_le_witness(prev, f))
            throw domain_error("nnintegral_sup: sequence decreases at index " +
                               std::to_string(n) + ", x = " + to_string(*x));
        const XReal next = simple_integral(mu, restrict_to(f, d), true);
        if (next.is_pos_inf()) return {next, true, n};
        if (sub(next, cur).fin() < tol) return {next, true, n};
        cur = next;
        prev = std::move(f);
    }
    return {cur, false, max_n - 1};
}

struct DominationWitness {
    std::size_t index = 0;
    Q point;
};

struct DominatedReport {
    bool domination_ok = true;
    std::optional<DominationWitness> domination_witness;
    bool limit_integrable = false;
    XReal limit_integral;
    bool abs_converged = false;        // integral of |f_n - f| fell below tol
    std::size_t abs_index = 0;
    bool int_converged = false;        // integral of f_n came within tol of the limit
    std::size_t int_index = 0;
    bool holds = false;
};

/// Numeric check of dominated convergence on step functions: verifies the
/// three conclusions (limit integrable, L1 distance to the limit below tol,
/// integrals within tol of the limit integral) for some index up to max_n,
/// spot-checking |f_n| <= g on the probe grid along the way.
inline DominatedReport dominated_check(const MeasureSpec& mu, const IntervalSet& d,
                                       const std::function<StepFn(std::size_t)>& seq,
                                       const StepFn& f_limit, const StepFn& g_dom,
                                       const Q& tol, std::size_t max_n) {
    if (!g_dom.nonnegative())
        throw domain_error("dominated_check: dominating function must be nonnegative");
    const XReal gi = integrate(mu, d, g_dom);
    if (!gi.is_finite())
        throw domain_error("dominated_check: dominating function not integrable");

    DominatedReport r;
    const XReal li_abs = integrate(mu, d, step_abs(f_limit));
    r.limit_integrable = li_abs.is_finite();
    r.limit_integral = r.limit_integrable ? integrate(mu, d, f_limit) : XReal(Q(0));

    const StepFn g_d = restrict_to(g_dom, d);
    for (std::size_t n = 0; n <= max_n; ++n) {
        const StepFn fn = seq(n);
        if (auto x = pointwise_le_witness(restrict_to(step_abs(fn), d), g_d)) {
            r.domination_ok = false;
            r.domination_witness = DominationWitness{n, *x};
            break;
        }
        const XReal an = integrate(mu, d, step_abs(step_sub(fn, f_limit)));
        if (!r.abs_converged && an < XReal(tol)) {
            r.abs_converged = true;
            r.abs_index = n;
        }
        if (r.limit_integrable && !r.int_converged) {
            const XReal in = integrate(mu, d, fn);
            const XReal gap = in < r.limit_integral ? sub(r.limit_integral, in)
                                                    : sub(in, r.limit_integral);
            if (gap < XReal(tol)) {
                r.int_converged = true;
                r.int_index = n;
            }
        }
        if (r.abs_converged && r.int_converged) break;
    }
    r.holds = r.domination_ok && r.limit_integrable && r.abs_converged && r.int_converged;
    return r;
}

struct RectPiece {
    Q value;
    IntervalSet sx;
    IntervalSet sy;

    friend bool operator==(const RectPiece&, const RectPiece&) = default;
};

/// Plane step function: a finite sum of value * indicator(Sx x Sy). After
/// construction the pieces have pairwise disjoint plane supports and
/// nonzero values (grouped by x-strip section).
class StepFn2 {
public:
    StepFn2() = default;

    static StepFn2 make(const std::vector<RectPiece>& raw) {
        std::vector<Q> xcuts;
        for (const auto& p : raw) detail::collect_cuts(p.sx, xcuts);
        // Section through every elementary x-strip; strips with equal
        // sections merge into one x-support.
        std::vector<std::pair<StepFn, std::vector<std::pair<XReal, XReal>>>> groups;
        for (const auto& cell : detail::line_cells(std::move(xcuts))) {
            std::vector<StepPiece> sec;
            for (const auto& p : raw)
                if (p.sx.contains(cell.rep)) sec.push_back({p.value, p.sy});
            StepFn section = StepFn::make(sec);
            if (section.is_zero()) continue;
            auto it = std::find_if(groups.begin(), groups.end(),
                                   [&](const auto& g) { return g.first == section; });
            if (it == groups.end()) {
                groups.push_back({std::move(section), {{cell.lo, cell.hi}}});
            } else {
                it->second.emplace_back(cell.lo, cell.hi);
            }
        }
        StepFn2 f;
        for (auto& [section, strips] : groups) {
            IntervalSet sx = IntervalSet::normalized(std::move(strips));
            for (const auto& p : section.pieces()) f.pieces_.push_back({p.value, sx, p.support});
        }
        return f;
    }

    const std::vector<RectPiece>& pieces() const { return pieces_; }
    bool is_zero() const { return pieces_.empty(); }

    Q operator()(const Q& x, const Q& y) const {
        for (const auto& p : pieces_)
            if (p.sx.contains(x) && p.sy.contains(y)) return p.value;
        return Q(0);
    }

    friend bool operator==(const StepFn2&, const StepFn2&) = default;

private:
    std::vector<RectPiece> pieces_;
};

/// The one-variable function y -> f2(x, y).
inline StepFn xsection(const StepFn2& f2, const Q& x) {
    std::vector<StepPiece> raw;
    for (const auto& p : f2.pieces())
        if (p.sx.contains(x)) raw.push_back({p.value, p.sy});
    return StepFn::make(raw);
}

inline StepFn ysection(const StepFn2& f2, const Q& y) {
    std::vector<StepPiece> raw;
    for (const auto& p : f2.pieces())
        if (p.sy.contains(y)) raw.push_back({p.value, p.sx});
    return StepFn::make(raw);
}

/// Set form: {y | (x, y) in the rectangle union}.
inline IntervalSet xsection(const std::vector<std::pair<IntervalSet, IntervalSet>>& rects,
                            const Q& x) {
    IntervalSet out;
    for (const auto& [sx, sy] : rects)
        if (sx.contains(x)) out = set_union(out, sy);
    return out;
}

namespace detail {

// Sum of strip-value * strip-measure terms with the 0 * oo convention;
// mixed infinite terms abort (the function is not integrable in this
// order).
inline XReal strip_sum(const std::vector<std::pair<XReal, XReal>>& terms,
                       const std::string& who) {
    XReal acc{Q(0)};
    bool pos = false, neg = false;
    for (const auto& [v, m] : terms) {
        const XReal t = mul(v, m);
        pos |= t.is_pos_inf();
        neg |= t.is_neg_inf();
        if (pos && neg) throw non_integrable_error(who + ": +oo and -oo terms in one sum");
        acc = add(acc, t);
    }
    return acc;
}

} // namespace detail

/// Measure of a disjoint union of rectangles: integrate the x-section
/// measure, which is a step function of x, against the first measure.
/// Inverting the roles of the measures gives the same value.
inline XReal product_measure(const MeasureSpec& m1, const MeasureSpec& m2,
                             const std::vector<std::pair<IntervalSet, IntervalSet>>& rects) {
    for (std::size_t i = 0; i < rects.size(); ++i)
        for (std::size_t j = i + 1; j < rects.size(); ++j)
            if (!set_intersection(rects[i].first, rects[j].first).is_empty() &&
                !set_intersection(rects[i].second, rects[j].second).is_empty())
                throw domain_error("product_measure: rectangles overlap");
    std::vector<Q> xcuts;
    for (const auto& [sx, sy] : rects) detail::collect_cuts(sx, xcuts);
    std::vector<std::pair<XReal, XReal>> terms;
    for (const auto& cell : detail::line_cells(std::move(xcuts))) {
        const XReal section = m2.measure_of(xsection(rects, cell.rep));
        terms.emplace_back(section,
                           m1.measure_of(IntervalSet::interval(cell.lo, cell.hi)));
    }
    return detail::strip_sum(terms, "product_measure");
}

struct FubiniReport {
    XReal lhs;      // integrate the x-sections first
    XReal rhs;      // integrate the y-sections first
    XReal direct;   // sum of value * m1(Sx) * m2(Sy)
    bool equal = false;
};

/// Both iterated integrals of a plane step function, computed symbolically
/// (the inner integral is a step function of the outer variable), plus the
/// direct rectangle sum. All three agree exactly for integrable input.
inline FubiniReport fubini_check(const MeasureSpec& m1, const MeasureSpec& m2,
                                 const StepFn2& f2) {
    auto iterated = [&](bool x_outer) {
        std::vector<Q> cuts;
        for (const auto& p : f2.pieces())
            detail::collect_cuts(x_outer ? p.sx : p.sy, cuts);
        const MeasureSpec& outer = x_outer ? m1 : m2;
        const MeasureSpec& inner = x_outer ? m2 : m1;
        const std::string who = x_outer ? "fubini_check (x-outer order)"
                                        : "fubini_check (y-outer order)";
        std::vector<std::pair<XReal, XReal>> terms;
        for (const auto& cell : detail::line_cells(std::move(cuts))) {
            const StepFn section =
                x_outer ? xsection(f2, cell.rep) : ysection(f2, cell.rep);
            XReal inner_value;
            try {
                inner_value = integrate(inner, IntervalSet::full_line(), section);
            } catch (const non_integrable_error&) {
                throw non_integrable_error(who + ": inner integral not integrable");
            }
            terms.emplace_back(inner_value,
                               outer.measure_of(IntervalSet::interval(cell.lo, cell.hi)));
        }
        return detail::strip_sum(terms, who);
    };

    FubiniReport r;
    r.lhs = iterated(true);
    r.rhs = iterated(false);

    std::vector<std::pair<XReal, XReal>> direct_terms;
    for (const auto& p : f2.pieces())
        direct_terms.emplace_back(XReal(p.value),
                                  mul(m1.measure_of(p.sx), m2.measure_of(p.sy)));
    r.direct = detail::strip_sum(direct_terms, "fubini_check (direct sum)");

    r.equal = r.lhs == r.rhs && r.rhs == r.direct;
    return r;
}

inline std::string to_string(const StepFn2& f) {
    if (f.is_zero()) return "0*1[(0,0] x (0,0]]";
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
        out += "*1[" + to_string(p.sx) + " x " + to_string(p.sy) + "]";
    }
    return out;
}

} // namespace exm
