#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "exm/error.hpp"
#include "exm/integral.hpp"
#include "exm/intervals.hpp"
#include "exm/measure.hpp"
#include "exm/simplefn.hpp"
#include "exm/structures.hpp"
#include "exm/xreal.hpp"

namespace exm {

namespace detail {

// Single-token-lookahead cursor over the input; all grammar rules skip
// leading whitespace themselves.
class Cursor {
public:
    explicit Cursor(std::string_view in) : in_(in) {}

    void skip_ws() {
        while (pos_ < in_.size() && std::isspace(static_cast<unsigned char>(in_[pos_])))
            ++pos_;
    }

    bool eof() {
        skip_ws();
        return pos_ >= in_.size();
    }

    std::size_t pos() const { return pos_; }

    char peek() {
        skip_ws();
        return pos_ < in_.size() ? in_[pos_] : '\0';
    }

    // Raw character access for token interiors (no whitespace skipping).
    char raw() const { return pos_ < in_.size() ? in_[pos_] : '\0'; }
    void bump() {
        if (pos_ < in_.size()) ++pos_;
    }

    bool consume(char c) {
        skip_ws();
        if (pos_ < in_.size() && in_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, const std::string& expected) {
        if (!consume(c)) fail(expected);
    }

    // Matches a keyword not followed by more word characters.
    bool consume_word(std::string_view w) {
        skip_ws();
        if (in_.substr(pos_).substr(0, w.size()) != w) return false;
        const std::size_t after = pos_ + w.size();
        if (after < in_.size() && (std::isalnum(static_cast<unsigned char>(in_[after])) ||
                                   in_[after] == '_'))
            return false;
        pos_ = after;
        return true;
    }

    std::string found_lexeme() {
        skip_ws();
        if (pos_ >= in_.size()) return "end of input";
        std::size_t end = pos_;
        if (std::isalnum(static_cast<unsigned char>(in_[end]))) {
            while (end < in_.size() &&
                   (std::isalnum(static_cast<unsigned char>(in_[end])) || in_[end] == '_'))
                ++end;
        } else {
            ++end;
        }
        return "'" + std::string(in_.substr(pos_, end - pos_)) + "'";
    }

    [[noreturn]] void fail(const std::string& expected) { fail_at(pos(), expected); }

    [[noreturn]] void fail_at(std::size_t offset, const std::string& expected) {
        ParseDiagnostic d;
        d.offset = offset;
        d.expected = expected;
        d.found = found_lexeme();
        d.message = "parse error at offset " + std::to_string(offset) + ": expected " +
                    expected + ", found " + d.found;
        throw parse_error(std::move(d));
    }

    void expect_eof() {
        if (!eof()) fail("end of input");
    }

private:
    std::string_view in_;
    std::size_t pos_ = 0;
};

// -?[0-9]+(/[0-9]+)?  with a nonzero denominator; no interior whitespace.
inline Q parse_rational(Cursor& c) {
    c.skip_ws();
    const std::size_t start = c.pos();
    std::string tok;
    if (c.raw() == '-') {
        c.bump();
        tok += '-';
    }
    if (!std::isdigit(static_cast<unsigned char>(c.raw()))) c.fail_at(start, "a rational");
    while (std::isdigit(static_cast<unsigned char>(c.raw()))) {
        tok += c.raw();
        c.bump();
    }
    Z num(tok);
    if (c.raw() == '/') {
        c.bump();
        std::string den;
        if (!std::isdigit(static_cast<unsigned char>(c.raw()))) c.fail("a denominator");
        while (std::isdigit(static_cast<unsigned char>(c.raw()))) {
            den += c.raw();
            c.bump();
        }
        Z d(den);
        if (d == 0) c.fail_at(start, "a nonzero denominator");
        return Q(num, d);
    }
    return Q(num);
}

inline XReal parse_xreal(Cursor& c) {
    if (c.consume_word("inf")) return XReal::pos_inf();
    c.skip_ws();
    if (c.raw() == '-') {
        Cursor save = c;
        c.bump();
        if (c.consume_word("inf")) return XReal::neg_inf();
        c = save;
    }
    return XReal(parse_rational(c));
}

// '(' bound ',' bound ']'; a lower bound of +oo is rejected outright,
// otherwise lo >= hi simply denotes the empty set.
inline std::pair<XReal, XReal> parse_interval(Cursor& c) {
    c.expect('(', "'('");
    c.skip_ws();
    const std::size_t lo_at = c.pos();
    XReal lo = parse_xreal(c);
    if (lo.is_pos_inf()) c.fail_at(lo_at, "a finite lower bound or -inf");
    c.expect(',', "','");
    XReal hi = parse_xreal(c);
    c.expect(']', "']'");
    return {std::move(lo), std::move(hi)};
}

inline IntervalSet parse_set(Cursor& c) {
    std::vector<std::pair<XReal, XReal>> raw;
    raw.push_back(parse_interval(c));
    while (c.consume_word("U")) raw.push_back(parse_interval(c));
    return IntervalSet::normalized(std::move(raw));
}

} // namespace detail

/// "(0,1] U (2,5/2]" -> canonical IntervalSet.
inline IntervalSet parse_set_expr(std::string_view input) {
    detail::Cursor c(input);
    IntervalSet s = detail::parse_set(c);
    c.expect_eof();
    return s;
}

inline Q parse_rational(std::string_view input) {
    detail::Cursor c(input);
    Q q = detail::parse_rational(c);
    c.expect_eof();
    return q;
}

inline XReal parse_xreal(std::string_view input) {
    detail::Cursor c(input);
    XReal x = detail::parse_xreal(c);
    c.expect_eof();
    return x;
}

/// Step-function expressions: terms `c*1[set]` (or `c*1[set x set]` for the
/// plane) joined by + or -. All terms must share one dimension.
inline std::variant<StepFn, StepFn2> parse_stepfn_expr(std::string_view input) {
    detail::Cursor c(input);
    std::vector<StepPiece> pieces1;
    std::vector<RectPiece> pieces2;
    bool first = true;
    bool two_dim = false;
    while (true) {
        Q sign(1);
        if (!first) {
            if (c.consume('+')) {
                sign = 1;
            } else if (c.consume('-')) {
                sign = -1;
            } else {
                c.fail("'+', '-' or end of input");
            }
        }
        c.skip_ws();
        const std::size_t term_at = c.pos();
        Q coeff = detail::parse_rational(c);
        c.skip_ws();
        if (c.peek() == '[')   // "1[...]": the coefficient was missing
            c.fail_at(term_at, "a rational coefficient before '*'");
        c.expect('*', "'*'");
        c.skip_ws();
        if (!c.consume('1')) c.fail("'1['");
        c.expect('[', "'['");
        IntervalSet sx = detail::parse_set(c);
        bool is2 = false;
        IntervalSet sy;
        if (c.consume_word("x")) {
            is2 = true;
            sy = detail::parse_set(c);
        }
        c.expect(']', "']'");
        if (first) {
            two_dim = is2;
        } else if (is2 != two_dim) {
            ParseDiagnostic d;
            d.offset = term_at;
            d.expected = two_dim ? "a 2-D term" : "a 1-D term";
            d.found = is2 ? "a 2-D term" : "a 1-D term";
            d.message = "parse error at offset " + std::to_string(term_at) +
                        ": 1-D and 2-D terms cannot be mixed";
            throw parse_error(std::move(d));
        }
        const Q v = sign * coeff;
        if (two_dim)
            pieces2.push_back({v, std::move(sx), std::move(sy)});
        else
            pieces1.push_back({v, std::move(sx)});
        first = false;
        if (c.eof()) break;
    }
    if (two_dim) return StepFn2::make(pieces2);
    return StepFn::make(pieces1);
}

/// "(0,1] x (0,3] U (2,3] x (0,1]": one interval per side, U joins
/// rectangles.
inline std::vector<std::pair<IntervalSet, IntervalSet>> parse_rect_union(
    std::string_view input) {
    detail::Cursor c(input);
    std::vector<std::pair<IntervalSet, IntervalSet>> rects;
    while (true) {
        auto lo_hi_x = detail::parse_interval(c);
        if (!c.consume_word("x")) c.fail("'x'");
        auto lo_hi_y = detail::parse_interval(c);
        rects.emplace_back(IntervalSet::normalized({lo_hi_x}),
                           IntervalSet::normalized({lo_hi_y}));
        if (!c.consume_word("U")) break;
    }
    c.expect_eof();
    return rects;
}

namespace detail {

inline std::string parse_label(Cursor& c) {
    c.skip_ws();
    std::string out;
    while (std::isalnum(static_cast<unsigned char>(c.raw())) || c.raw() == '_') {
        out += c.raw();
        c.bump();
    }
    if (out.empty()) c.fail("an atom label");
    return out;
}

} // namespace detail

/// "a,b,c" -> universe with those atoms.
inline FiniteUniverse parse_universe(std::string_view input) {
    detail::Cursor c(input);
    std::vector<std::string> atoms;
    atoms.push_back(detail::parse_label(c));
    while (c.consume(',')) atoms.push_back(detail::parse_label(c));
    c.expect_eof();
    return FiniteUniverse(std::move(atoms));
}

namespace detail {

inline mask_t parse_subset(Cursor& c, const FiniteUniverse& u) {
    c.expect('{', "'{'");
    mask_t m = 0;
    if (!c.consume('}')) {
        while (true) {
            c.skip_ws();
            const std::size_t at = c.pos();
            const std::string label = parse_label(c);
            try {
                m |= mask_t(1) << u.index_of(label);
            } catch (const domain_error&) {
                c.fail_at(at, "an atom of the universe");
            }
            if (!c.consume(',')) break;
        }
        c.expect('}', "'}'");
    }
    return m;
}

} // namespace detail

/// "{};{a};{b,c}" -> family over the given universe.
inline FiniteFamily parse_family(const FiniteUniverse& u, std::string_view input) {
    detail::Cursor c(input);
    std::vector<mask_t> members;
    members.push_back(detail::parse_subset(c, u));
    while (c.consume(';')) members.push_back(detail::parse_subset(c, u));
    c.expect_eof();
    return FiniteFamily(u, std::move(members));
}

/// Line-oriented weight fixture: one "atom weight" pair per line; blank
/// lines and lines starting with '#' are ignored.
inline std::vector<XReal> parse_weights(const FiniteUniverse& u, std::string_view text) {
    std::vector<XReal> weights(u.size(), XReal(Q(0)));
    std::vector<bool> seen(u.size(), false);
    detail::Cursor c(text);
    while (!c.eof()) {
        if (c.peek() == '#') {
            while (c.raw() != '\0' && c.raw() != '\n') c.bump();
            continue;
        }
        c.skip_ws();
        const std::size_t at = c.pos();
        const std::string label = detail::parse_label(c);
        std::size_t idx;
        try {
            idx = u.index_of(label);
        } catch (const domain_error&) {
            c.fail_at(at, "an atom of the universe");
        }
        weights[idx] = detail::parse_xreal(c);
        seen[idx] = true;
    }
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!seen[i])
            throw domain_error("weights: no weight given for atom '" + u.label(i) + "'");
    return weights;
}

/// Line-oriented table fixture: one "{subset} value" pair per line.
inline SetFunction parse_table(const FiniteUniverse& u, std::string_view text) {
    SetFunction f(u);
    detail::Cursor c(text);
    while (!c.eof()) {
        if (c.peek() == '#') {
            while (c.raw() != '\0' && c.raw() != '\n') c.bump();
            continue;
        }
        const mask_t m = detail::parse_subset(c, u);
        f.define(m, detail::parse_xreal(c));
    }
    return f;
}

} // namespace exm
