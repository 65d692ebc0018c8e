// rational.hpp — exact rational coefficients (GMP-backed)

#pragma once

#include <gmpxx.h>

#include <string>

namespace ringdyn {

using Rational = mpq_class;

inline double to_double(const Rational& r) { return r.get_d(); }

// Prints "n" or "n/d" with d > 0.
inline std::string to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

} // namespace ringdyn
