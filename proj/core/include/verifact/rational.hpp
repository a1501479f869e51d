#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace verifact {

/// Arbitrary-precision exact rational. Used for K (which may be a half-integer
/// median), precision/recall/F1@K, and domain means.
using Rational = boost::multiprecision::cpp_rational;

Rational make_rational(std::int64_t numerator, std::int64_t denominator = 1);

/// Canonical text form: "5", "7/2", "-1/3".
std::string to_string(const Rational& value);

/// Accepts "5", "7/2" and finite decimals such as "3.5" or "0.125".
/// Throws FormatError on anything else.
Rational parse_rational(std::string_view text);

double to_double(const Rational& value);

}  // namespace verifact
