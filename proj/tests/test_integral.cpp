#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

#include <utility>
#include <vector>

using namespace exm;
using exmtest::grid_for_sets;
using exmtest::rand_interval_set;
using exmtest::rand_q;
using exmtest::rand_stepfn;
using exmtest::rand_stepfn2;
using exmtest::Rng;

namespace {

IntervalSet ivl(int lo, int hi) {
    return IntervalSet::interval(XReal(Q(lo)), XReal(Q(hi)));
}

const MeasureSpec leb = MeasureSpec::lebesgue();

// Lower dyadic approximation of x on ]0,1]: value k/2^n on the k-th cell.
StepFn dyadic_approx(std::size_t n) {
    std::vector<StepPiece> pieces;
    const Z den = Z(1) << n;
    for (Z k = 1; k < den; ++k)
        pieces.push_back({Q(k, den),
                          IntervalSet::interval(XReal(Q(k, den)), XReal(Q(k + 1, den)))});
    return StepFn::from_canonical(std::move(pieces));
}

Q eval_raw2(const std::vector<RectPiece>& raw, const Q& x, const Q& y) {
    Q v(0);
    for (const auto& p : raw)
        if (p.sx.contains(x) && p.sy.contains(y)) v += p.value;
    return v;
}

} // namespace

TEST_CASE("restriction") {
    const StepFn f = StepFn::make({{Q(3), ivl(0, 2)}});
    CHECK(restrict_to(f, ivl(1, 3)) == StepFn::make({{Q(3), ivl(1, 2)}}));
    CHECK(restrict_to(f, IntervalSet::full_line()) == f);
    CHECK(restrict_to(f, IntervalSet()).is_zero());
    Rng rng(601);
    for (int trial = 0; trial < 300; ++trial) {
        const StepFn g = rand_stepfn(rng);
        const IntervalSet d = rand_interval_set(rng, 3, true);
        const StepFn r = restrict_to(g, d);
        std::vector<const IntervalSet*> sets{&d};
        for (const auto& p : g.pieces()) sets.push_back(&p.support);
        for (const Q& x : grid_for_sets(sets))
            CHECK(r(x) == (d.contains(x) ? g(x) : Q(0)));
    }
}

TEST_CASE("integration via positive and negative parts") {
    const StepFn f = StepFn::make({{Q(3), ivl(0, 1)}, {Q(-2), ivl(2, 3)}});
    CHECK(integrate(leb, ivl(0, 10), f) == XReal(Q(1)));
    CHECK(integrate(leb, IntervalSet::interval(XReal(Q(0)), XReal(Q(1, 2))),
                    StepFn::make({{Q(3), ivl(0, 1)}})) == XReal(Q(3, 2)));
    const StepFn bad = StepFn::make(
        {{Q(1), IntervalSet::interval(XReal(Q(0)), XReal::pos_inf())},
         {Q(-1), IntervalSet::interval(XReal::neg_inf(), XReal(Q(0)))}});
    CHECK_THROWS_AS(integrate(leb, IntervalSet::full_line(), bad), non_integrable_error);
    // One infinite side alone is fine.
    const StepFn ray = StepFn::make(
        {{Q(2), IntervalSet::interval(XReal(Q(0)), XReal::pos_inf())}});
    CHECK(integrate(leb, IntervalSet::full_line(), ray) == XReal::pos_inf());
    CHECK(integrate(leb, IntervalSet::full_line(), step_neg(ray)) == XReal::neg_inf());
}

TEST_CASE("integral is linear and monotone on bounded step functions") {
    Rng rng(602);
    for (int trial = 0; trial < 500; ++trial) {
        const StepFn f = rand_stepfn(rng);
        const StepFn g = rand_stepfn(rng);
        const IntervalSet d = rand_interval_set(rng, 3, true);
        CHECK(integrate(leb, d, step_add(f, g)) ==
              add(integrate(leb, d, f), integrate(leb, d, g)));
        const Q c = rand_q(rng, 6, 2);
        CHECK(integrate(leb, d, step_scale(c, f)) == mul(XReal(c), integrate(leb, d, f)));
        // f <= f + |g| pointwise.
        const StepFn habs = step_abs(g);
        CHECK(!(integrate(leb, d, step_add(f, habs)) < integrate(leb, d, f)));
        // Indicator integrals measure the intersection.
        const IntervalSet a = rand_interval_set(rng, 3, true);
        CHECK(integrate(leb, d, StepFn::make({{Q(1), a}})) ==
              lebesgue_measure(set_intersection(a, d)));
    }
}

TEST_CASE("dyadic approximation has the closed-form integrals") {
    for (std::size_t n = 0; n <= 10; ++n) {
        const XReal expected{Q(1, 2) - Q(1, Z(1) << (n + 1))};
        CHECK(simple_integral(leb, dyadic_approx(n), true) == expected);
    }
}

TEST_CASE("monotone supremum harness") {
    const IntervalSet unit = ivl(0, 1);
    const Q tol(1, 1'000'000);
    SECTION("dyadic sequence converges to 1/2") {
        const ApproxSeq seq{[](std::size_t n) { return dyadic_approx(n); }, true};
        const SupResult r = nnintegral_sup(leb, unit, seq, tol, 30);
        REQUIRE(r.converged);
        REQUIRE(r.value.is_finite());
        CHECK(abs_of(r.value.fin() - Q(1, 2)) <= tol);
        CHECK(r.index <= 20);
    }
    SECTION("constant sequences settle after two indices") {
        const StepFn f = StepFn::make({{Q(2), ivl(0, 1)}});
        const ApproxSeq seq{[&](std::size_t) { return f; }, true};
        const SupResult r = nnintegral_sup(leb, unit, seq, tol, 10);
        CHECK(r.converged);
        CHECK(r.index == 1);
        CHECK(r.value == XReal(Q(2)));
    }
    SECTION("divergent sequences report a lower bound") {
        const ApproxSeq seq{[](std::size_t n) {
                                return StepFn::make({{Q(static_cast<int>(n) + 1), ivl(0, 1)}});
                            },
                            true};
        const SupResult r = nnintegral_sup(leb, unit, seq, Q(1, 100), 25);
        CHECK(!r.converged);
        CHECK(r.value == XReal(Q(25)));
    }
    SECTION("infinite integrals settle immediately") {
        const ApproxSeq seq{[](std::size_t) {
                                return StepFn::make(
                                    {{Q(1), IntervalSet::interval(XReal(Q(0)),
                                                                  XReal::pos_inf())}});
                            },
                            true};
        const SupResult r =
            nnintegral_sup(leb, IntervalSet::full_line(), seq, tol, 10);
        CHECK(r.converged);
        CHECK(r.value == XReal::pos_inf());
    }
    SECTION("violations are rejected") {
        const ApproxSeq undeclared{[](std::size_t) { return StepFn(); }, false};
        CHECK_THROWS_AS(nnintegral_sup(leb, unit, undeclared, tol, 10), domain_error);
        const ApproxSeq negative{
            [](std::size_t) { return StepFn::make({{Q(-1), ivl(0, 1)}}); }, true};
        CHECK_THROWS_AS(nnintegral_sup(leb, unit, negative, tol, 10), domain_error);
        const ApproxSeq decreasing{[](std::size_t n) {
                                       return StepFn::make(
                                           {{Q(10 - static_cast<int>(n)), ivl(0, 1)}});
                                   },
                                   true};
        CHECK_THROWS_AS(nnintegral_sup(leb, unit, decreasing, tol, 10), domain_error);
    }
}

TEST_CASE("dominated convergence harness") {
    const IntervalSet unit = ivl(0, 1);
    const StepFn one = StepFn::make({{Q(1), ivl(0, 1)}});
    SECTION("shrinking defect passes all three verdicts") {
        auto seq = [&](std::size_t n) {
            return StepFn::make({{Q(1) - Q(1, static_cast<int>(n) + 1), ivl(0, 1)}});
        };
        const DominatedReport r =
            dominated_check(leb, unit, seq, one, one, Q(1, 100), 300);
        CHECK(r.holds);
        CHECK(r.domination_ok);
        CHECK(r.limit_integrable);
        CHECK(r.limit_integral == XReal(Q(1)));
        CHECK(r.abs_converged);
        CHECK(r.int_converged);
    }
    SECTION("a constant sequence passes at index zero") {
        auto seq = [&](std::size_t) { return one; };
        const DominatedReport r = dominated_check(leb, unit, seq, one, one, Q(1, 100), 5);
        CHECK(r.holds);
        CHECK(r.abs_index == 0);
        CHECK(r.int_index == 0);
    }
    SECTION("escaping mass is reported with a witness") {
        auto seq = [&](std::size_t n) {
            const int k = static_cast<int>(n) + 1;
            return StepFn::make({{Q(k), IntervalSet::interval(XReal(Q(0)), XReal(Q(1, k)))}});
        };
        const DominatedReport r =
            dominated_check(leb, unit, seq, StepFn(), one, Q(1, 100), 50);
        CHECK(!r.holds);
        CHECK(!r.domination_ok);
        REQUIRE(r.domination_witness.has_value());
        CHECK(r.domination_witness->index == 1);   // first n with f_n > 1 somewhere
    }
    SECTION("a non-integrable dominator is a domain error") {
        const StepFn g = StepFn::make(
            {{Q(1), IntervalSet::interval(XReal(Q(0)), XReal::pos_inf())}});
        auto seq = [&](std::size_t) { return StepFn(); };
        CHECK_THROWS_AS(dominated_check(leb, IntervalSet::full_line(), seq, StepFn(), g,
                                        Q(1, 100), 5),
                        domain_error);
    }
}

TEST_CASE("plane step functions match the 2-D pointwise oracle") {
    Rng rng(603);
    for (int trial = 0; trial < 400; ++trial) {
        std::vector<RectPiece> raw;
        const std::size_t n = rng() % 4;
        for (std::size_t i = 0; i < n; ++i)
            raw.push_back({rand_q(rng, 10, 3), rand_interval_set(rng, 2),
                           rand_interval_set(rng, 2)});
        const StepFn2 f = StepFn2::make(raw);
        // Canonical pieces are plane-disjoint with nonzero values.
        for (std::size_t i = 0; i < f.pieces().size(); ++i) {
            CHECK(f.pieces()[i].value != 0);
            for (std::size_t j = 0; j < i; ++j) {
                const bool xdisjoint =
                    set_intersection(f.pieces()[i].sx, f.pieces()[j].sx).is_empty();
                const bool ydisjoint =
                    set_intersection(f.pieces()[i].sy, f.pieces()[j].sy).is_empty();
                CHECK((xdisjoint || ydisjoint));
            }
        }
        std::vector<const IntervalSet*> xs, ys;
        for (const auto& p : raw) {
            xs.push_back(&p.sx);
            ys.push_back(&p.sy);
        }
        for (const Q& x : grid_for_sets(xs))
            for (const Q& y : grid_for_sets(ys)) CHECK(f(x, y) == eval_raw2(raw, x, y));
    }
}

TEST_CASE("sections") {
    const StepFn2 f = StepFn2::make({{Q(2), ivl(0, 1), ivl(0, 3)}});
    CHECK(xsection(f, Q(1, 2)) == StepFn::make({{Q(2), ivl(0, 3)}}));
    CHECK(xsection(f, Q(2)).is_zero());
    CHECK(ysection(f, Q(1)) == StepFn::make({{Q(2), ivl(0, 1)}}));

    // Two disjoint rectangles over the same x-extent build a two-piece section.
    const StepFn2 g = StepFn2::make({{Q(1), ivl(0, 1), ivl(0, 1)},
                                     {Q(2), ivl(0, 1), ivl(2, 3)}});
    const StepFn s = xsection(g, Q(1, 2));
    CHECK(s == StepFn::make({{Q(1), ivl(0, 1)}, {Q(2), ivl(2, 3)}}));

    const std::vector<std::pair<IntervalSet, IntervalSet>> rects{
        {ivl(0, 1), ivl(0, 1)}, {ivl(2, 3), ivl(5, 6)}};
    CHECK(xsection(rects, Q(1, 2)) == ivl(0, 1));
    CHECK(xsection(rects, Q(5, 2)) == ivl(5, 6));
    CHECK(xsection(rects, Q(10)).is_empty());
}

TEST_CASE("product measure") {
    SECTION("a single rectangle multiplies its sides") {
        CHECK(product_measure(leb, leb, {{ivl(0, 1), ivl(0, 3)}}) == XReal(Q(3)));
    }
    SECTION("disjoint unions add") {
        CHECK(product_measure(leb, leb, {{ivl(0, 1), ivl(0, 1)}, {ivl(2, 3), ivl(0, 1)}}) ==
              XReal(Q(2)));
    }
    SECTION("overlap is rejected") {
        CHECK_THROWS_AS(
            product_measure(leb, leb, {{ivl(0, 2), ivl(0, 2)}, {ivl(1, 3), ivl(1, 3)}}),
            domain_error);
    }
    SECTION("zero-measure strips absorb infinite sections") {
        const IntervalSet ray = IntervalSet::interval(XReal(Q(0)), XReal::pos_inf());
        CHECK(product_measure(leb, leb, {{IntervalSet(), ray}}) == XReal(Q(0)));
        CHECK(product_measure(leb, leb, {{ivl(0, 1), ray}}) == XReal::pos_inf());
    }
    SECTION("order symmetry on random disjoint unions") {
        Rng rng(604);
        for (int trial = 0; trial < 100; ++trial) {
            // Rectangles in disjoint x-windows are plane-disjoint.
            std::vector<std::pair<IntervalSet, IntervalSet>> rects, swapped;
            const std::size_t n = rng() % 4;
            for (std::size_t k = 0; k < n; ++k) {
                const int base = 10 * static_cast<int>(k);
                const IntervalSet sx = set_intersection(
                    rand_interval_set(rng, 2), ivl(base, base + 9));
                const IntervalSet sy = rand_interval_set(rng, 2);
                if (sx.is_empty() || sy.is_empty()) continue;
                rects.emplace_back(sx, sy);
                swapped.emplace_back(sy, sx);
            }
            CHECK(product_measure(leb, leb, rects) == product_measure(leb, leb, swapped));
        }
    }
}

TEST_CASE("fubini worked examples") {
    SECTION("one rectangle") {
        const StepFn2 f = StepFn2::make({{Q(2), ivl(0, 1), ivl(0, 3)}});
        const FubiniReport r = fubini_check(leb, leb, f);
        CHECK(r.lhs == XReal(Q(6)));
        CHECK(r.rhs == XReal(Q(6)));
        CHECK(r.direct == XReal(Q(6)));
        CHECK(r.equal);
    }
    SECTION("signed rectangles") {
        const StepFn2 f = StepFn2::make(
            {{Q(1), ivl(0, 1), ivl(0, 1)}, {Q(-1), ivl(1, 2), ivl(0, 2)}});
        const FubiniReport r = fubini_check(leb, leb, f);
        CHECK(r.lhs == XReal(Q(-1)));
        CHECK(r.equal);
    }
    SECTION("the zero function integrates to zero over the whole plane") {
        const FubiniReport r = fubini_check(leb, leb, StepFn2());
        CHECK(r.lhs == XReal(Q(0)));
        CHECK(r.equal);
    }
    SECTION("mixed infinities are rejected, naming the failing order") {
        const IntervalSet up = IntervalSet::interval(XReal(Q(0)), XReal::pos_inf());
        const IntervalSet down = IntervalSet::interval(XReal::neg_inf(), XReal(Q(0)));
        const StepFn2 inner_bad =
            StepFn2::make({{Q(1), ivl(0, 1), up}, {Q(-1), ivl(0, 1), down}});
        CHECK_THROWS_AS(fubini_check(leb, leb, inner_bad), non_integrable_error);
        const StepFn2 outer_bad =
            StepFn2::make({{Q(1), ivl(0, 1), up}, {Q(-1), ivl(1, 2), up}});
        CHECK_THROWS_AS(fubini_check(leb, leb, outer_bad), non_integrable_error);
    }
}

TEST_CASE("fubini agrees with the raw rectangle sum on random functions") {
    Rng rng(605);
    const auto raw_sum = [](const std::vector<RectPiece>& raw) {
        XReal total{Q(0)};
        for (const auto& p : raw)
            total = add(total, mul(XReal(p.value),
                                   mul(lebesgue_measure(p.sx), lebesgue_measure(p.sy))));
        return total;
    };
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<RectPiece> raw;
        const std::size_t n = rng() % 6;
        for (std::size_t i = 0; i < n; ++i)
            raw.push_back({rand_q(rng, 10, 3), rand_interval_set(rng, 2),
                           rand_interval_set(rng, 2)});
        const StepFn2 f = StepFn2::make(raw);
        const FubiniReport r = fubini_check(leb, leb, f);
        CHECK(r.equal);
        CHECK(r.lhs == raw_sum(raw));
    }
}
