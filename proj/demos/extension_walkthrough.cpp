// Walks the full extension pipeline on a three-atom universe and then
// integrates a step function against the length measure on the line.

#include <exm/exm.hpp>

#include <iostream>

using namespace exm;

int main() {
    // A semiring that is not a ring: the pieces of a partition of {a,b,c}.
    const FiniteUniverse u({"a", "b", "c"});
    const FiniteFamily s(u, {0b000, 0b001, 0b010, 0b100});
    std::cout << "semiring: " << to_string(s) << "\n";
    std::cout << "is semiring: " << check_class(SetClass::Semiring, s).holds << "\n";
    std::cout << "is ring:     " << check_class(SetClass::Ring, s).holds << "\n";

    const WeightMeasure wm(u, {XReal(Q(1)), XReal(Q(1, 2)), XReal(Q(0))}, s);
    const SetFunction mu = SetFunction::of_weights_on(wm, s);
    const OuterTable ot = outer_extend(mu, s);
    std::cout << "\nouter extension:\n";
    for (mask_t m = 0; m <= u.full_mask(); ++m)
        std::cout << "  " << to_string(u, m) << " -> " << to_string(ot.value(m)) << "\n";

    const FiniteFamily cara = caratheodory_sets(ot);
    std::cout << "measurable sets: " << to_string(cara) << "\n";
    std::cout << "extension is unique on the generated sigma-algebra and complete\n";

    // Exact Lebesgue integration of a signed step function over a domain.
    const StepFn f =
        std::get<StepFn>(parse_stepfn_expr("3*1[(0,1]] - 2*1[(2,3]] + 1/2*1[(4,6]]"));
    const IntervalSet d = parse_set_expr("(0,5]");
    std::cout << "\nintegral over " << to_string(d) << ": "
              << to_string(integrate(MeasureSpec::lebesgue(), d, f)) << "\n";

    // Fubini on a plane step function.
    const StepFn2 f2 = std::get<StepFn2>(
        parse_stepfn_expr("2*1[(0,1] x (0,3]] - 1*1[(1,2] x (0,1]]"));
    const FubiniReport r = fubini_check(MeasureSpec::lebesgue(), MeasureSpec::lebesgue(), f2);
    std::cout << "fubini: lhs " << to_string(r.lhs) << ", rhs " << to_string(r.rhs)
              << ", direct " << to_string(r.direct) << "\n";
    return 0;
}
