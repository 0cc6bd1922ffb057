#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <sstream>
#include <string>

namespace meroform {

// Exact coefficient field. cpp_rational keeps gcd(|num|, den) = 1 and den > 0
// after every operation, which is exactly the invariant we need.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer numerator_of(const Rational& q) { return boost::multiprecision::numerator(q); }
inline Integer denominator_of(const Rational& q) { return boost::multiprecision::denominator(q); }

inline std::size_t bit_size(const Integer& x)
{
    if (x == 0)
        return 0;
    return boost::multiprecision::msb(boost::multiprecision::abs(x)) + 1;
}

// Pivot weight for the fraction-free eliminator: smaller is better.
inline std::size_t bit_size(const Rational& q)
{
    return bit_size(numerator_of(q)) + bit_size(denominator_of(q));
}

inline std::string to_string(const Rational& q)
{
    std::ostringstream out;
    out << q; // prints "p/q", or "p" when q = 1
    return out.str();
}

} // namespace meroform
