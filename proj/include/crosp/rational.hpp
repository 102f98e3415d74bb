#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace crosp {

/// Arbitrary-precision rational used for exact terminating sums.
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1)
{
    return Rational(num, den);
}

inline double to_double(const Rational& r)
{
    return r.convert_to<double>();
}

inline std::string to_string(const Rational& r)
{
    return r.str();
}

} // namespace crosp
