#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "exm/error.hpp"

namespace exm {

/// Subsets of a finite universe are bitmasks; bit i stands for atom i.
using mask_t = std::uint32_t;

inline constexpr std::size_t kMaxUniverse = 16;

class FiniteUniverse {
public:
    explicit FiniteUniverse(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
        if (atoms_.empty()) throw domain_error("universe: needs at least one atom");
        if (atoms_.size() > kMaxUniverse)
            throw resource_error("universe: more than 16 atoms");
        auto sorted = atoms_;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw domain_error("universe: duplicate atom label");
    }

    std::size_t size() const { return atoms_.size(); }
    mask_t full_mask() const { return static_cast<mask_t>((1u << atoms_.size()) - 1); }
    const std::string& label(std::size_t i) const { return atoms_[i]; }
    const std::vector<std::string>& atoms() const { return atoms_; }

    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < atoms_.size(); ++i)
            if (atoms_[i] == label) return i;
        throw domain_error("universe: unknown atom '" + label + "'");
    }

    friend bool operator==(const FiniteUniverse&, const FiniteUniverse&) = default;

private:
    std::vector<std::string> atoms_;
};

/// Deduplicated, ascending family of subsets over one universe.
class FiniteFamily {
public:
    FiniteFamily(FiniteUniverse universe, std::vector<mask_t> members)
        : universe_(std::move(universe)), members_(std::move(members)) {
        for (mask_t m : members_)
            if (m & ~universe_.full_mask())
                throw domain_error("family: member mask exceeds universe");
        std::sort(members_.begin(), members_.end());
        members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    }

    const FiniteUniverse& universe() const { return universe_; }
    const std::vector<mask_t>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

    bool contains(mask_t m) const {
        return std::binary_search(members_.begin(), members_.end(), m);
    }

    friend bool operator==(const FiniteFamily&, const FiniteFamily&) = default;

private:
    FiniteUniverse universe_;
    std::vector<mask_t> members_;
};

inline std::string to_string(const FiniteUniverse& u, mask_t m) {
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (m & (mask_t(1) << i)) {
            if (!first) out += ",";
            out += u.label(i);
            first = false;
        }
    }
    return out + "}";
}

inline std::string to_string(const FiniteFamily& f) {
    std::string out;
    for (std::size_t i = 0; i < f.members().size(); ++i) {
        if (i > 0) out += ";";
        out += to_string(f.universe(), f.members()[i]);
    }
    return out;
}

enum class SetClass { Semiring, Ring, Algebra, SigmaAlgebra, Dynkin, PiSystem };

inline std::string to_string(SetClass k) {
    switch (k) {
        case SetClass::Semiring: return "semiring";
        case SetClass::Ring: return "ring";
        case SetClass::Algebra: return "algebra";
        case SetClass::SigmaAlgebra: return "sigma_algebra";
        case SetClass::Dynkin: return "dynkin";
        default: return "pi_system";
    }
}

inline SetClass set_class_from_string(const std::string& s) {
    if (s == "semiring") return SetClass::Semiring;
    if (s == "ring") return SetClass::Ring;
    if (s == "algebra") return SetClass::Algebra;
    if (s == "sigma_algebra" || s == "sigma-algebra") return SetClass::SigmaAlgebra;
    if (s == "dynkin") return SetClass::Dynkin;
    if (s == "pi_system" || s == "pi-system") return SetClass::PiSystem;
    throw domain_error("unknown structure kind '" + s + "'");
}

struct ClassViolation {
    std::string law;              // which closure axiom failed
    std::vector<mask_t> witness;  // the sets exhibiting the failure
};

struct ClassReport {
    bool holds = true;
    std::vector<ClassViolation> violations;
};

/// Can `target` be written as a disjoint union of family members? Exact
/// backtracking over members contained in `target`, memoized on the
/// remaining mask; greedy packing is not sufficient here.
inline bool has_disjoint_member_cover(mask_t target, const std::vector<mask_t>& members) {
    if (target == 0) return true;
    std::vector<mask_t> candidates;
    for (mask_t m : members)
        if (m != 0 && (m & ~target) == 0) candidates.push_back(m);
    std::map<mask_t, bool> memo;
    auto rec = [&](auto&& self, mask_t rem) -> bool {
        if (rem == 0) return true;
        if (auto it = memo.find(rem); it != memo.end()) return it->second;
        const mask_t low = rem & (~rem + 1);
        bool ok = false;
        for (mask_t c : candidates) {
            if ((c & low) && (c & ~rem) == 0 && self(self, rem & ~c)) {
                ok = true;
                break;
            }
        }
        return memo[rem] = ok;
    };
    return rec(rec, target);
}

namespace detail {

inline void require(ClassReport& r, bool ok, const std::string& law,
                    std::vector<mask_t> witness) {
    if (!ok) {
        r.holds = false;
        r.violations.push_back({law, std::move(witness)});
    }
}

inline void check_semiring_into(ClassReport& r, const FiniteFamily& f) {
    require(r, f.contains(0), "empty-set-member", {});
    const auto& ms = f.members();
    for (mask_t a : ms)
        for (mask_t b : ms) {
            require(r, f.contains(a & b), "intersection-closed", {a, b, a & b});
            if (!has_disjoint_member_cover(a & ~b, ms))
                require(r, false, "difference-disjoint-cover", {a, b, a & ~b});
        }
}

} // namespace detail

/// Decide whether the family satisfies the axioms of the given class of
/// sets, reporting every violation with a concrete witness. On a finite
/// universe countable unions collapse to finite ones, and pairwise union
/// closure yields all finite unions by induction, so the sigma-algebra
/// check reduces to the algebra check.
inline ClassReport check_class(SetClass kind, const FiniteFamily& f) {
    ClassReport r;
    const auto& ms = f.members();
    const mask_t full = f.universe().full_mask();
    switch (kind) {
        case SetClass::Semiring:
            detail::check_semiring_into(r, f);
            break;
        case SetClass::Ring:
        case SetClass::Algebra:
        case SetClass::SigmaAlgebra:
            detail::check_semiring_into(r, f);
            for (mask_t a : ms)
                for (mask_t b : ms)
                    detail::require(r, f.contains(a | b), "union-closed", {a, b, a | b});
            if (kind != SetClass::Ring)
                detail::require(r, f.contains(full), "full-set-member", {full});
            break;
        case SetClass::Dynkin:
            detail::require(r, f.contains(full), "full-set-member", {full});
            for (mask_t a : ms)
                detail::require(r, f.contains(full & ~a), "complement-closed", {a, full & ~a});
            for (mask_t a : ms)
                for (mask_t b : ms)
                    if ((a & b) == 0)
                        detail::require(r, f.contains(a | b), "disjoint-union-closed",
                                        {a, b, a | b});
            break;
        case SetClass::PiSystem: {
            bool nonempty_member = false;
            for (mask_t a : ms) nonempty_member |= (a != 0);
            detail::require(r, nonempty_member, "nonempty-member", {});
            for (mask_t a : ms)
                for (mask_t b : ms)
                    detail::require(r, f.contains(a & b), "intersection-closed", {a, b, a & b});
            break;
        }
    }
    return r;
}

/// Least family of the given kind containing the generators: a worklist
/// fixpoint over a seen-table indexed by subset mask.
inline FiniteFamily generate_closure(SetClass kind, const FiniteFamily& g) {
    if (kind == SetClass::Semiring || kind == SetClass::PiSystem)
        throw domain_error("generate_closure: supported kinds are ring, algebra, "
                           "sigma_algebra, dynkin");
    const std::size_t n = g.universe().size();
    const mask_t full = g.universe().full_mask();
    std::vector<bool> seen(std::size_t(1) << n, false);
    std::vector<mask_t> members;
    auto push = [&](mask_t m) {
        if (!seen[m]) {
            seen[m] = true;
            members.push_back(m);
        }
    };
    push(0);
    if (kind != SetClass::Ring) push(full);
    for (mask_t m : g.members()) push(m);

    for (std::size_t i = 0; i < members.size(); ++i) {
        const mask_t a = members[i];
        if (kind == SetClass::Dynkin) push(full & ~a);
        for (std::size_t j = 0; j <= i; ++j) {
            const mask_t b = members[j];
            if (kind == SetClass::Dynkin) {
                if ((a & b) == 0) push(a | b);
            } else {
                push(a | b);
                push(a & ~b);
                push(b & ~a);
            }
        }
    }
    return FiniteFamily(g.universe(), std::move(members));
}

/// True iff the blocks are pairwise disjoint (vacuously true when empty).
inline bool pairwise_disjoint(const std::vector<mask_t>& blocks) {
    for (std::size_t i = 0; i < blocks.size(); ++i)
        for (std::size_t j = i + 1; j < blocks.size(); ++j)
            if (blocks[i] & blocks[j]) return false;
    return true;
}

} // namespace exm
