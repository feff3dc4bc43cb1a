#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace meandim {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// 2^e as an exact rational, e may be negative.
inline Rational pow2(long e) {
    Integer one = 1;
    if (e >= 0) return Rational(one << e);
    return Rational(one, one << (-e));
}

/// 3^e for e >= 0.
inline Integer pow3(unsigned long e) {
    Integer r = 1;
    for (unsigned long i = 0; i < e; ++i) r *= 3;
    return r;
}

inline bool is_power_of_two(const Integer& n) {
    if (n <= 0) return false;
    Integer m = n;
    while ((m & 1) == 0) m >>= 1;
    return m == 1;
}

/// True iff q = p/2^e for some integers p, e >= 0.
inline bool is_dyadic(const Rational& q) {
    Integer d = boost::multiprecision::denominator(q);
    return d == 1 || is_power_of_two(d);
}

std::string rational_to_string(const Rational& q);

/// Renders dyadics as "p/2^e" (integers plainly); other rationals as "p/q".
std::string dyadic_to_string(const Rational& q);

/// Accepts "p/2^e", "p/q", plain integers and decimal strings like "0.125".
Rational parse_rational(const std::string& s);

/// Nearest double, for reports and plots only.
double to_double(const Rational& q);

/// Largest integer e with 2^e <= q; requires q > 0.
long floor_log2(const Rational& q);

}  // namespace meandim
