#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <string>
#include <utility>

#include "exm/error.hpp"
#include "exm/rational.hpp"

namespace exm {

/// Extended rational: a finite rational, +oo, or -oo.
///
/// Addition totalizes oo + (-oo) to -oo, which makes (XReal, +, 0) a
/// commutative monoid; multiplication uses the sign rule together with
/// 0 * (+-oo) = 0. The order is total: -oo < finite < +oo.
class XReal {
public:
    XReal() : kind_(Kind::Fin), value_(0) {}
    XReal(Q value) : kind_(Kind::Fin), value_(std::move(value)) {}
    XReal(int value) : kind_(Kind::Fin), value_(value) {}

    static XReal pos_inf() { return XReal(Kind::PosInf); }
    static XReal neg_inf() { return XReal(Kind::NegInf); }

    bool is_finite() const { return kind_ == Kind::Fin; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    bool is_infinite() const { return kind_ != Kind::Fin; }

    /// Finite payload; only valid when is_finite().
    const Q& fin() const {
        if (!is_finite()) throw domain_error("XReal: no finite value in an infinity");
        return value_;
    }

    // -1, 0, +1; infinities carry their sign.
    int sign() const {
        switch (kind_) {
            case Kind::NegInf: return -1;
            case Kind::PosInf: return 1;
            default: return sign_of(value_);
        }
    }

    friend bool operator==(const XReal& a, const XReal& b) {
        return a.kind_ == b.kind_ && (a.kind_ != Kind::Fin || a.value_ == b.value_);
    }

    friend std::strong_ordering operator<=>(const XReal& a, const XReal& b) {
        if (a.kind_ != b.kind_) return rank(a.kind_) <=> rank(b.kind_);
        if (a.kind_ != Kind::Fin) return std::strong_ordering::equal;
        if (a.value_ < b.value_) return std::strong_ordering::less;
        if (a.value_ == b.value_) return std::strong_ordering::equal;
        return std::strong_ordering::greater;
    }

private:
    enum class Kind { Fin, PosInf, NegInf };

    explicit XReal(Kind k) : kind_(k), value_(0) {}

    static int rank(Kind k) {
        switch (k) {
            case Kind::NegInf: return -1;
            case Kind::Fin: return 0;
            default: return 1;
        }
    }

    Kind kind_;
    Q value_;
};

/// Monoid addition: -oo absorbs everything, then +oo, else exact sum.
inline XReal add(const XReal& a, const XReal& b) {
    if (a.is_neg_inf() || b.is_neg_inf()) return XReal::neg_inf();
    if (a.is_pos_inf() || b.is_pos_inf()) return XReal::pos_inf();
    return XReal(a.fin() + b.fin());
}

inline XReal neg(const XReal& a) {
    if (a.is_pos_inf()) return XReal::neg_inf();
    if (a.is_neg_inf()) return XReal::pos_inf();
    return XReal(-a.fin());
}

// a - b = a + (-b); in particular +oo - +oo = -oo.
inline XReal sub(const XReal& a, const XReal& b) { return add(a, neg(b)); }

/// Sign-rule product with the measure-theoretic convention 0 * (+-oo) = 0.
inline XReal mul(const XReal& a, const XReal& b) {
    if (a.is_finite() && b.is_finite()) return XReal(a.fin() * b.fin());
    const int s = a.sign() * b.sign();
    if (s == 0) return XReal(Q(0));
    return s > 0 ? XReal::pos_inf() : XReal::neg_inf();
}

inline XReal min(const XReal& a, const XReal& b) { return a < b ? a : b; }
inline XReal max(const XReal& a, const XReal& b) { return a < b ? b : a; }

/// Order-preserving bijection onto [-1, 1]: r -> r/(1+|r|), +-oo -> +-1.
inline Q contract(const XReal& x) {
    if (x.is_pos_inf()) return Q(1);
    if (x.is_neg_inf()) return Q(-1);
    const Q& r = x.fin();
    return Q(r / (1 + abs_of(r)));
}

/// Inverse of contract; defined on [-1, 1] only.
inline XReal expand(const Q& y) {
    if (y > 1 || y < -1) throw domain_error("expand: argument outside [-1, 1]");
    if (y == 1) return XReal::pos_inf();
    if (y == -1) return XReal::neg_inf();
    return XReal(Q(y / (1 - abs_of(y))));
}

inline std::string to_string(const XReal& x) {
    if (x.is_pos_inf()) return "inf";
    if (x.is_neg_inf()) return "-inf";
    return to_string(x.fin());
}

/// Finitely supported family of extended reals, keyed by a totally ordered
/// index type. Entries equal to the default are never stored, so the stored
/// key set is exactly the support.
template <typename Key>
class FiniteSupportMap {
public:
    explicit FiniteSupportMap(XReal default_value = XReal(Q(0)))
        : default_(std::move(default_value)) {}

    void set(const Key& k, const XReal& v) {
        if (v == default_)
            entries_.erase(k);
        else
            entries_[k] = v;
    }

    /// Add v onto the entry at k (monoid addition with the default for
    /// absent keys). Ascending-key call sequences insert in amortized
    /// constant time.
    void accumulate(const Key& k, const XReal& v) {
        auto it = entries_.lower_bound(k);
        if (it != entries_.end() && it->first == k) {
            it->second = add(it->second, v);
            if (it->second == default_) entries_.erase(it);
        } else {
            const XReal sum = add(default_, v);
            if (!(sum == default_)) entries_.emplace_hint(it, k, sum);
        }
    }

    const XReal& at(const Key& k) const {
        auto it = entries_.find(k);
        return it == entries_.end() ? default_ : it->second;
    }

    const std::map<Key, XReal>& entries() const { return entries_; }
    const XReal& default_value() const { return default_; }
    std::size_t support_size() const { return entries_.size(); }

private:
    std::map<Key, XReal> entries_;
    XReal default_;
};

/// Iterated sum over the support, in ascending key order, restricted to keys
/// accepted by the filter. The empty sum is 0.
template <typename Key, typename Pred>
XReal sum_finite_support(const FiniteSupportMap<Key>& m, Pred&& keep) {
    XReal acc{Q(0)};
    for (const auto& [k, v] : m.entries())
        if (keep(k)) acc = add(acc, v);
    return acc;
}

template <typename Key>
XReal sum_finite_support(const FiniteSupportMap<Key>& m) {
    return sum_finite_support(m, [](const Key&) { return true; });
}

struct SeriesLimit {
    XReal value;
    bool converged = false;
    std::size_t terms = 0;   // number of terms consumed
};

/// Partial sums of a nonnegative series, stopped once an increment drops
/// below tol. The returned value includes that last increment and is always
/// an exact lower bound for the series; converged reports whether the
/// stopping rule fired before max_terms. A +oo term settles the sum exactly.
template <typename TermFn>
SeriesLimit series_limit(TermFn&& term, const Q& tol, std::size_t max_terms) {
    XReal sum{Q(0)};
    for (std::size_t n = 0; n < max_terms; ++n) {
        XReal t = term(n);
        if (t.sign() < 0) throw domain_error("series_limit: negative term at index " + std::to_string(n));
        if (t.is_pos_inf()) return {XReal::pos_inf(), true, n + 1};
        sum = add(sum, t);
        if (t.fin() < tol) return {sum, true, n + 1};
    }
    return {sum, false, max_terms};
}

} // namespace exm
