#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "exm/structures.hpp"
#include "exm/xreal.hpp"

namespace exm {

// Exhaustive axiom checks fall back to seeded sampling past this many cases.
inline constexpr std::uint64_t kEnumerationBudget = 1'000'000;
inline constexpr std::uint64_t kSampleCount = 100'000;
inline constexpr std::uint32_t kSampleSeed = 0x5eedu;

// Caps for the cover-enumeration constructions.
inline constexpr std::size_t kOuterMaxFamily = 20;
inline constexpr std::size_t kOuterMaxAtoms = 12;

/// Nonnegative point masses on a finite universe, declared on some family.
/// Evaluation is total (sum of member-atom weights) so it can serve as
/// ground truth even off the declared domain.
struct WeightMeasure {
    FiniteUniverse universe;
    std::vector<XReal> weights;
    FiniteFamily domain;

    WeightMeasure(FiniteUniverse u, std::vector<XReal> w, FiniteFamily dom)
        : universe(std::move(u)), weights(std::move(w)), domain(std::move(dom)) {
        if (weights.size() != universe.size())
            throw domain_error("weight measure: one weight per atom required");
        for (const auto& x : weights)
            if (x.sign() < 0) throw domain_error("weight measure: negative weight");
    }
};

inline XReal eval(const WeightMeasure& mu, mask_t a) {
    XReal total{Q(0)};
    for (std::size_t i = 0; i < mu.universe.size(); ++i)
        if (a & (mask_t(1) << i)) total = add(total, mu.weights[i]);
    return total;
}

/// A set function as a bare table: subsets mapped to extended reals, defined
/// only where values were entered. Deliberately unconstrained so that broken
/// inputs can be fed to the axiom checkers.
class SetFunction {
public:
    explicit SetFunction(FiniteUniverse u)
        : universe_(std::move(u)),
          table_(std::size_t(1) << universe_.size()) {}

    /// Total table of an additive weight measure.
    static SetFunction of_weights(const WeightMeasure& mu) {
        SetFunction f(mu.universe);
        for (mask_t m = 0; m <= mu.universe.full_mask(); ++m) f.define(m, eval(mu, m));
        return f;
    }

    /// Weight-measure values on the members of one family only.
    static SetFunction of_weights_on(const WeightMeasure& mu, const FiniteFamily& s) {
        SetFunction f(mu.universe);
        for (mask_t m : s.members()) f.define(m, eval(mu, m));
        return f;
    }

    void define(mask_t m, XReal v) { table_.at(m) = std::move(v); }
    bool defined(mask_t m) const { return table_.at(m).has_value(); }

    const XReal& at(mask_t m) const {
        const auto& slot = table_.at(m);
        if (!slot)
            throw domain_error("set function: undefined on " + to_string(universe_, m));
        return *slot;
    }

    const FiniteUniverse& universe() const { return universe_; }

    std::vector<mask_t> domain() const {
        std::vector<mask_t> out;
        for (mask_t m = 0; m < table_.size(); ++m)
            if (table_[m]) out.push_back(m);
        return out;
    }

private:
    FiniteUniverse universe_;
    std::vector<std::optional<XReal>> table_;
};

struct AxiomViolation {
    std::string axiom;
    std::vector<mask_t> sets;
};

struct MeasureReport {
    bool holds = true;
    std::vector<AxiomViolation> violations;
    bool exhaustive = true;        // false when the check sampled (budget hit)
    std::uint64_t cases_checked = 0;
};

namespace detail {

inline void fail(MeasureReport& r, const std::string& axiom, std::vector<mask_t> sets) {
    r.holds = false;
    r.violations.push_back({axiom, std::move(sets)});
}

// Sum of mu over a tuple of masks.
inline XReal tuple_sum(const SetFunction& mu, const std::vector<mask_t>& tuple) {
    XReal s{Q(0)};
    for (mask_t m : tuple) s = add(s, mu.at(m));
    return s;
}

} // namespace detail

/// Measure axioms on a declared family: mu(empty) = 0, nonnegativity, and
/// additivity over every pairwise-disjoint tuple of members whose union is
/// again a member. On a finite universe sigma-additivity coincides with
/// this finite additivity, since any countable disjoint union has only
/// finitely many nonempty terms.
inline MeasureReport check_measure_axioms(const SetFunction& mu, const FiniteFamily& f) {
    for (mask_t m : f.members())
        if (!mu.defined(m))
            throw domain_error("check_measure_axioms: family member outside the set "
                               "function's domain: " + to_string(f.universe(), m));
    MeasureReport r;
    if (!mu.defined(0) || !(mu.at(0) == XReal(Q(0))))
        detail::fail(r, "measure0", {0});
    for (mask_t m : f.members())
        if (mu.at(m).sign() < 0) detail::fail(r, "nonnegative", {m});

    // Disjoint tuples of nonempty members, built in index order.
    std::vector<mask_t> ms;
    for (mask_t m : f.members())
        if (m != 0) ms.push_back(m);

    std::uint64_t budget = kEnumerationBudget;
    std::vector<mask_t> tuple;
    bool aborted = false;
    auto dfs = [&](auto&& self, std::size_t start, mask_t used) -> void {
        if (aborted) return;
        for (std::size_t i = start; i < ms.size(); ++i) {
            if (ms[i] & used) continue;
            if (budget-- == 0) {
                aborted = true;
                return;
            }
            tuple.push_back(ms[i]);
            const mask_t u = used | ms[i];
            if (tuple.size() >= 2 && f.contains(u)) {
                ++r.cases_checked;
                if (!(mu.at(u) == detail::tuple_sum(mu, tuple)))
                    detail::fail(r, "additive", tuple);
            }
            self(self, i + 1, u);
            tuple.pop_back();
        }
    };
    dfs(dfs, 0, 0);

    if (aborted) {
        // Too many disjoint tuples: re-check on seeded random tuples instead.
        r.exhaustive = false;
        r.cases_checked = 0;
        std::mt19937 rng(kSampleSeed);
        for (std::uint64_t t = 0; t < kSampleCount; ++t) {
            std::vector<mask_t> pick;
            mask_t used = 0;
            for (std::size_t i = 0; i < ms.size(); ++i) {
                const mask_t m = ms[rng() % ms.size()];
                if (!(m & used)) {
                    pick.push_back(m);
                    used |= m;
                }
            }
            if (pick.size() >= 2 && f.contains(used)) {
                ++r.cases_checked;
                if (!(mu.at(used) == detail::tuple_sum(mu, pick)))
                    detail::fail(r, "additive", pick);
            }
        }
    }
    return r;
}

/// Outer measure as a full table over the powerset; built exactly, so every
/// value is attained by some cover.
class OuterTable {
public:
    OuterTable(FiniteUniverse u, std::vector<XReal> values)
        : universe_(std::move(u)), values_(std::move(values)) {
        if (values_.size() != (std::size_t(1) << universe_.size()))
            throw domain_error("outer table: needs a value for every subset");
    }

    const FiniteUniverse& universe() const { return universe_; }
    const XReal& value(mask_t m) const { return values_.at(m); }
    std::size_t subset_count() const { return values_.size(); }

private:
    FiniteUniverse universe_;
    std::vector<XReal> values_;
};

/// Extend a nonnegative set function on a covering family to the whole
/// powerset: mu*(X) is the least total weight of a subfamily covering X,
/// +oo when no subfamily covers X (the infimum over an empty set). On a
/// finite universe the infimum is attained, so the table is exact.
///
/// Runs in O(2^|S|) for the cover scan plus O(2^n n) for the
/// minimum-over-supersets transform.
inline OuterTable outer_extend(const SetFunction& mu, const FiniteFamily& s) {
    const FiniteUniverse& u = s.universe();
    if (s.size() > kOuterMaxFamily)
        throw resource_error("outer_extend: family larger than 20 sets");
    if (u.size() > kOuterMaxAtoms)
        throw resource_error("outer_extend: universe larger than 12 atoms");
    if (!s.contains(0)) throw domain_error("outer_extend: family must contain the empty set");
    for (mask_t m : s.members()) {
        if (!mu.defined(m))
            throw domain_error("outer_extend: set function undefined on a family member");
        if (mu.at(m).sign() < 0)
            throw domain_error("outer_extend: set function must be nonnegative");
    }
    if (!(mu.at(0) == XReal(Q(0))))
        throw domain_error("outer_extend: set function must vanish on the empty set");

    const std::size_t n = u.size();
    std::vector<XReal> best(std::size_t(1) << n, XReal::pos_inf());

    // Cheapest cover sum per exact union, over all subfamilies. Members
    // equal to the empty set contribute nothing and are skipped.
    std::vector<mask_t> ms;
    for (mask_t m : s.members())
        if (m != 0) ms.push_back(m);
    auto scan = [&](auto&& self, std::size_t i, mask_t covered, const XReal& cost) -> void {
        if (i == ms.size()) {
            if (cost < best[covered]) best[covered] = cost;
            return;
        }
        self(self, i + 1, covered, cost);
        self(self, i + 1, covered | ms[i], add(cost, mu.at(ms[i])));
    };
    scan(scan, 0, 0, XReal(Q(0)));

    // mu*(X) = min over unions U that contain X.
    for (std::size_t bit = 0; bit < n; ++bit)
        for (mask_t x = 0; x < best.size(); ++x)
            if (!(x & (mask_t(1) << bit))) {
                const XReal& up = best[x | (mask_t(1) << bit)];
                if (up < best[x]) best[x] = up;
            }

    return OuterTable(u, std::move(best));
}

/// Outer-measure axioms by exhaustive pair checks (sampled past the budget):
/// zero on empty, nonnegative, monotone on nested pairs, subadditive on all
/// pairs. Pair subadditivity is the finite-universe reduction of
/// sigma-subadditivity.
inline MeasureReport check_outer_axioms(const OuterTable& ot) {
    MeasureReport r;
    const std::size_t n = ot.universe().size();
    const mask_t full = ot.universe().full_mask();
    if (!(ot.value(0) == XReal(Q(0)))) detail::fail(r, "outer_measure0", {0});
    for (mask_t x = 0; x <= full; ++x)
        if (ot.value(x).sign() < 0) detail::fail(r, "outer_nonnegative", {x});

    // Monotonicity over all nested pairs: 3^n cases via submask walk.
    const std::uint64_t mono_cases = [&] {
        std::uint64_t c = 1;
        for (std::size_t i = 0; i < n; ++i) c *= 3;
        return c;
    }();
    const std::uint64_t sub_cases = std::uint64_t(1) << (2 * n);

    if (mono_cases <= kEnumerationBudget) {
        for (mask_t b = 0; b <= full; ++b)
            for (mask_t a = b;; a = (a - 1) & b) {
                ++r.cases_checked;
                if (ot.value(b) < ot.value(a)) detail::fail(r, "outer_monotone", {a, b});
                if (a == 0) break;
            }
    } else {
        r.exhaustive = false;
        std::mt19937 rng(kSampleSeed);
        for (std::uint64_t t = 0; t < kSampleCount; ++t) {
            const mask_t b = rng() & full;
            const mask_t a = rng() & b;
            ++r.cases_checked;
            if (ot.value(b) < ot.value(a)) detail::fail(r, "outer_monotone", {a, b});
        }
    }

    if (sub_cases <= kEnumerationBudget) {
        for (mask_t a = 0; a <= full; ++a)
            for (mask_t b = 0; b <= full; ++b) {
                ++r.cases_checked;
                if (add(ot.value(a), ot.value(b)) < ot.value(a | b))
                    detail::fail(r, "outer_subadditive", {a, b});
            }
    } else {
        r.exhaustive = false;
        std::mt19937 rng(kSampleSeed + 1);
        for (std::uint64_t t = 0; t < kSampleCount; ++t) {
            const mask_t a = rng() & full;
            const mask_t b = rng() & full;
            ++r.cases_checked;
            if (add(ot.value(a), ot.value(b)) < ot.value(a | b))
                detail::fail(r, "outer_subadditive", {a, b});
        }
    }
    return r;
}

/// All sets that split every test set additively:
/// mu*(X) = mu*(X & A) + mu*(X \ A) for every X. Assumes the table already
/// passed check_outer_axioms. The result is a sigma-algebra and the
/// restriction of mu* to it is a measure; both facts are checked in tests
/// rather than assumed here.
inline FiniteFamily caratheodory_sets(const OuterTable& ot) {
    if (ot.universe().size() > kOuterMaxAtoms)
        throw resource_error("caratheodory_sets: universe larger than 12 atoms");
    const mask_t full = ot.universe().full_mask();
    std::vector<mask_t> members;
    for (mask_t a = 0; a <= full; ++a) {
        bool ok = true;
        for (mask_t x = 0; x <= full && ok; ++x)
            ok = ot.value(x) == add(ot.value(x & a), ot.value(x & ~a & full));
        if (ok) members.push_back(a);
    }
    return FiniteFamily(ot.universe(), std::move(members));
}

struct CompletenessReport {
    std::vector<mask_t> negligibles;   // subsets of zero-measure members
    bool complete = true;              // all negligibles are members
};

/// Enumerate the negligible sets (subsets of measurable zero-measure sets)
/// and decide whether they all belong to the family.
inline CompletenessReport completeness_report(const SetFunction& mu, const FiniteFamily& f) {
    for (mask_t m : f.members())
        if (!mu.defined(m))
            throw domain_error("completeness_report: family member outside the set "
                               "function's domain");
    const std::size_t n = f.universe().size();
    std::vector<bool> negligible(std::size_t(1) << n, false);
    for (mask_t a : f.members()) {
        if (!(mu.at(a) == XReal(Q(0)))) continue;
        for (mask_t sub = a;; sub = (sub - 1) & a) {
            negligible[sub] = true;
            if (sub == 0) break;
        }
    }
    CompletenessReport r;
    for (mask_t m = 0; m < negligible.size(); ++m)
        if (negligible[m]) {
            r.negligibles.push_back(m);
            if (!f.contains(m)) r.complete = false;
        }
    return r;
}

/// Do the given sets witness sigma-finiteness: all measurable, all of
/// finite measure, union equal to the full set?
inline bool sigma_finite_check(const SetFunction& mu, const FiniteFamily& f,
                               const std::vector<mask_t>& cover) {
    mask_t covered = 0;
    for (mask_t c : cover) {
        if (!f.contains(c)) return false;
        if (!mu.defined(c)) return false;
        if (!(mu.at(c) < XReal::pos_inf())) return false;
        covered |= c;
    }
    return covered == f.universe().full_mask();
}

struct UniquenessReport {
    bool agree_on_generators = true;
    bool agree = true;                 // on the whole generated sigma-algebra
    std::optional<mask_t> witness;     // first disagreement
    FiniteFamily sigma;                // the generated sigma-algebra
};

/// Extension uniqueness, executed exactly: two measures that agree on a
/// pi-system with a finite-measure cover of the full set must agree on the
/// generated sigma-algebra. Precondition failures throw; disagreements are
/// reported, starting with the generators themselves.
inline UniquenessReport uniqueness_check(const SetFunction& mu1, const SetFunction& mu2,
                                         const FiniteFamily& g) {
    if (!check_class(SetClass::PiSystem, g).holds)
        throw domain_error("uniqueness_check: generator family is not a pi-system");

    mask_t finite_union = 0;
    for (mask_t m : g.members())
        if (mu1.defined(m) && mu2.defined(m) && mu1.at(m) < XReal::pos_inf() &&
            mu2.at(m) < XReal::pos_inf())
            finite_union |= m;
    if (finite_union != g.universe().full_mask())
        throw domain_error("uniqueness_check: generators carry no finite-measure cover "
                           "of the full set");

    FiniteFamily sigma = generate_closure(SetClass::SigmaAlgebra, g);
    if (!check_measure_axioms(mu1, sigma).holds)
        throw domain_error("uniqueness_check: mu1 is not a measure on the generated "
                           "sigma-algebra");
    if (!check_measure_axioms(mu2, sigma).holds)
        throw domain_error("uniqueness_check: mu2 is not a measure on the generated "
                           "sigma-algebra");

    UniquenessReport r{true, true, std::nullopt, sigma};
    for (mask_t m : g.members())
        if (!(mu1.at(m) == mu2.at(m))) {
            r.agree_on_generators = false;
            r.agree = false;
            r.witness = m;
            return r;
        }
    for (mask_t m : sigma.members())
        if (!(mu1.at(m) == mu2.at(m))) {
            r.agree = false;
            r.witness = m;
            return r;
        }
    return r;
}

/// The generated sigma-algebra of a semiring is contained in the
/// Caratheodory sets of the extension, and the extension agrees with the
/// original measure on the semiring.
inline bool sub_caratheodory_check(const FiniteFamily& s, const SetFunction& mu) {
    if (!check_class(SetClass::Semiring, s).holds)
        throw domain_error("sub_caratheodory_check: family is not a semiring");
    if (!check_measure_axioms(mu, s).holds)
        throw domain_error("sub_caratheodory_check: set function is not a measure on "
                           "the family");
    const OuterTable ot = outer_extend(mu, s);
    const FiniteFamily cara = caratheodory_sets(ot);
    const FiniteFamily sigma = generate_closure(SetClass::SigmaAlgebra, s);
    for (mask_t m : sigma.members())
        if (!cara.contains(m)) return false;
    for (mask_t m : s.members())
        if (!(ot.value(m) == mu.at(m))) return false;
    return true;
}

} // namespace exm
