#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <sstream>
#include <string>

namespace exm {

// Exact scalar of the whole library: GMP rationals, kept in lowest terms
// with positive denominator by the adaptor, so equality is representation
// equality.
using Q = boost::multiprecision::mpq_rational;
using Z = boost::multiprecision::mpz_int;

inline int sign_of(const Q& q) { return q.sign(); }

inline Q abs_of(const Q& q) { return q < 0 ? Q(-q) : q; }

// "3", "-5/2": numerator, then "/denominator" unless it is 1.
inline std::string to_string(const Q& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

} // namespace exm
