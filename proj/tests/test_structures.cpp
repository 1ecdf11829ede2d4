#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

#include <vector>

using namespace exm;
using exmtest::rand_family;
using exmtest::rand_pi_system;
using exmtest::universe_of;
using exmtest::Rng;

namespace {

// Oracle-side closure predicates, written directly against the defining
// axioms (no shared code with check_class).
bool closed_family(SetClass kind, mask_t full, const std::vector<bool>& in) {
    const auto member = [&](mask_t m) { return in[m]; };
    if (!member(0) && kind != SetClass::Dynkin) return false;
    switch (kind) {
        case SetClass::Ring:
        case SetClass::Algebra:
        case SetClass::SigmaAlgebra:
            if (kind != SetClass::Ring && !member(full)) return false;
            for (mask_t a = 0; a <= full; ++a) {
                if (!member(a)) continue;
                for (mask_t b = 0; b <= full; ++b) {
                    if (!member(b)) continue;
                    if (!member(a | b)) return false;
                    if (!member(a & ~b & full)) return false;
                }
            }
            return true;
        case SetClass::Dynkin:
            if (!member(full)) return false;
            for (mask_t a = 0; a <= full; ++a) {
                if (!member(a)) continue;
                if (!member(full & ~a)) return false;
                for (mask_t b = 0; b <= full; ++b)
                    if (member(b) && (a & b) == 0 && !member(a | b)) return false;
            }
            return true;
        default:
            return false;
    }
}

// Smallest closed superfamily by enumerating every closed family over the
// powerset and intersecting; exact for universes up to 4 atoms.
FiniteFamily smallest_closed_oracle(SetClass kind, const FiniteFamily& g) {
    const std::size_t subsets = std::size_t(1) << g.universe().size();
    REQUIRE(subsets <= 16);
    const mask_t full = g.universe().full_mask();
    std::uint32_t gbits = 0;
    for (mask_t m : g.members()) gbits |= std::uint32_t(1) << m;

    std::uint32_t intersection = (subsets == 16) ? 0xffffffffu
                                                 : ((std::uint32_t(1) << subsets) - 1);
    bool found = false;
    for (std::uint64_t fam = 0; fam < (std::uint64_t(1) << subsets); ++fam) {
        if ((fam & gbits) != gbits) continue;
        std::vector<bool> in(subsets);
        for (std::size_t m = 0; m < subsets; ++m) in[m] = (fam >> m) & 1;
        if (!closed_family(kind, full, in)) continue;
        intersection &= static_cast<std::uint32_t>(fam);
        found = true;
    }
    REQUIRE(found);
    std::vector<mask_t> members;
    for (std::size_t m = 0; m < subsets; ++m)
        if ((intersection >> m) & 1) members.push_back(static_cast<mask_t>(m));
    return FiniteFamily(g.universe(), std::move(members));
}

bool family_subset(const FiniteFamily& a, const FiniteFamily& b) {
    for (mask_t m : a.members())
        if (!b.contains(m)) return false;
    return true;
}

} // namespace

TEST_CASE("class checks on worked families") {
    const FiniteUniverse ab = universe_of(2);
    SECTION("full powerset is a sigma-algebra") {
        const FiniteFamily f(ab, {0, 1, 2, 3});
        CHECK(check_class(SetClass::SigmaAlgebra, f).holds);
        CHECK(check_class(SetClass::Algebra, f).holds);
        CHECK(check_class(SetClass::Ring, f).holds);
        CHECK(check_class(SetClass::Semiring, f).holds);
        CHECK(check_class(SetClass::Dynkin, f).holds);
        CHECK(check_class(SetClass::PiSystem, f).holds);
    }
    SECTION("missing difference cover breaks the semiring") {
        const FiniteFamily f(ab, {0b00, 0b01, 0b11});   // {}, {a}, {a,b}
        const ClassReport r = check_class(SetClass::Semiring, f);
        CHECK(!r.holds);
        REQUIRE(!r.violations.empty());
        bool found = false;
        for (const auto& v : r.violations)
            if (v.law == "difference-disjoint-cover" && v.witness.size() == 3 &&
                v.witness[0] == 0b11 && v.witness[1] == 0b01)
                found = true;
        CHECK(found);
    }
    SECTION("pi-system needs a nonempty member") {
        const FiniteFamily f(universe_of(1), {0});
        CHECK(!check_class(SetClass::PiSystem, f).holds);
        const FiniteFamily g(universe_of(1), {0, 1});
        CHECK(check_class(SetClass::PiSystem, g).holds);
    }
    SECTION("dynkin wants full set, complements, disjoint unions") {
        const FiniteFamily f(ab, {0, 0b01, 0b10, 0b11});
        CHECK(check_class(SetClass::Dynkin, f).holds);
        const FiniteFamily g(ab, {0, 0b01, 0b11});   // missing {b}
        CHECK(!check_class(SetClass::Dynkin, g).holds);
    }
}

TEST_CASE("disjoint cover search backtracks") {
    // Greedy would grab {a,b} and strand {c}; the exact search must find
    // {a} + {b,c}.
    const std::vector<mask_t> members{0b011, 0b001, 0b110};
    CHECK(has_disjoint_member_cover(0b111, members));
    CHECK(!has_disjoint_member_cover(0b111, {0b011, 0b110}));
    CHECK(has_disjoint_member_cover(0, {}));
}

TEST_CASE("pairwise disjointness") {
    CHECK(pairwise_disjoint({0b01, 0b10}));
    CHECK(!pairwise_disjoint({0b01, 0b11}));
    CHECK(pairwise_disjoint({}));
}

TEST_CASE("closure worked examples") {
    const FiniteUniverse abc = universe_of(3);
    SECTION("ring generated by two singletons") {
        const FiniteFamily g(abc, {0b001, 0b010});
        const FiniteFamily r = generate_closure(SetClass::Ring, g);
        CHECK(r.members() == std::vector<mask_t>{0b000, 0b001, 0b010, 0b011});
    }
    SECTION("sigma-algebra generated by two singletons is the powerset") {
        const FiniteFamily g(abc, {0b001, 0b010});
        const FiniteFamily s = generate_closure(SetClass::SigmaAlgebra, g);
        CHECK(s.size() == 8);
    }
    SECTION("least ring is the empty-set family") {
        const FiniteFamily g(abc, {});
        const FiniteFamily r = generate_closure(SetClass::Ring, g);
        CHECK(r.members() == std::vector<mask_t>{0});
    }
    SECTION("closure kinds are restricted") {
        const FiniteFamily g(abc, {0b001});
        CHECK_THROWS_AS(generate_closure(SetClass::Semiring, g), domain_error);
        CHECK_THROWS_AS(generate_closure(SetClass::PiSystem, g), domain_error);
    }
}

TEST_CASE("closure matches the enumeration oracle") {
    Rng rng(301);
    const SetClass kinds[] = {SetClass::Ring, SetClass::Algebra, SetClass::SigmaAlgebra,
                              SetClass::Dynkin};
    for (std::size_t n = 2; n <= 4; ++n) {
        const FiniteUniverse u = universe_of(n);
        for (int trial = 0; trial < 12; ++trial) {
            const FiniteFamily g = rand_family(rng, u, 3);
            for (SetClass k : kinds) {
                const FiniteFamily closure = generate_closure(k, g);
                const FiniteFamily oracle = smallest_closed_oracle(k, g);
                CHECK(closure == oracle);
            }
        }
    }
}

TEST_CASE("closure output passes its own class check and is idempotent") {
    Rng rng(302);
    const SetClass kinds[] = {SetClass::Ring, SetClass::Algebra, SetClass::SigmaAlgebra,
                              SetClass::Dynkin};
    for (int trial = 0; trial < 40; ++trial) {
        const FiniteUniverse u = universe_of(2 + rng() % 4);
        const FiniteFamily g = rand_family(rng, u, 4);
        for (SetClass k : kinds) {
            const FiniteFamily c = generate_closure(k, g);
            CHECK(check_class(k, c).holds);
            CHECK(generate_closure(k, c) == c);
        }
    }
}

TEST_CASE("closure is monotone in the generators") {
    Rng rng(303);
    for (int trial = 0; trial < 40; ++trial) {
        const FiniteUniverse u = universe_of(2 + rng() % 3);
        const FiniteFamily g = rand_family(rng, u, 3);
        std::vector<mask_t> bigger = g.members();
        bigger.push_back(static_cast<mask_t>(rng()) & u.full_mask());
        const FiniteFamily g2(u, std::move(bigger));
        for (SetClass k : {SetClass::Ring, SetClass::SigmaAlgebra, SetClass::Dynkin})
            CHECK(family_subset(generate_closure(k, g), generate_closure(k, g2)));
    }
}

TEST_CASE("inheritance chain of the class checks") {
    Rng rng(304);
    for (int trial = 0; trial < 30; ++trial) {
        const FiniteUniverse u = universe_of(2 + rng() % 3);
        const FiniteFamily g = rand_family(rng, u, 3);

        const FiniteFamily sigma = generate_closure(SetClass::SigmaAlgebra, g);
        CHECK(check_class(SetClass::SigmaAlgebra, sigma).holds);
        CHECK(check_class(SetClass::Algebra, sigma).holds);
        CHECK(check_class(SetClass::Ring, sigma).holds);
        CHECK(check_class(SetClass::Semiring, sigma).holds);

        const FiniteFamily ring = generate_closure(SetClass::Ring, g);
        CHECK(check_class(SetClass::Ring, ring).holds);
        CHECK(check_class(SetClass::Semiring, ring).holds);
    }
}

TEST_CASE("dynkin closure of a pi-system is its sigma-algebra") {
    Rng rng(305);
    for (int trial = 0; trial < 100; ++trial) {
        const FiniteUniverse u = universe_of(2 + rng() % 3);
        const FiniteFamily p = rand_pi_system(rng, u, 4);
        REQUIRE(check_class(SetClass::PiSystem, p).holds);
        CHECK(generate_closure(SetClass::Dynkin, p) ==
              generate_closure(SetClass::SigmaAlgebra, p));
    }
}

TEST_CASE("family text form") {
    const FiniteUniverse u = universe_of(3);
    const FiniteFamily f(u, {0b000, 0b001, 0b110});
    CHECK(to_string(f) == "{};{a};{b,c}");
    CHECK(to_string(u, mask_t(0)) == "{}");
    CHECK(to_string(u, u.full_mask()) == "{a,b,c}");
}

TEST_CASE("universe validation") {
    CHECK_THROWS_AS(FiniteUniverse(std::vector<std::string>{}), domain_error);
    CHECK_THROWS_AS(FiniteUniverse({"a", "a"}), domain_error);
    CHECK_THROWS_AS(FiniteUniverse(std::vector<std::string>(17, "x")), resource_error);
    CHECK_THROWS_AS(FiniteFamily(universe_of(2), {0b100}), domain_error);
}
