#pragma once

#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace patlake {

/// Exact rational used for impurity sums, FPR values and tolerances.
using Rational = boost::multiprecision::cpp_rational;

/// "num/den" in lowest terms; zero is "0/1".
std::string to_string(const Rational& r);
/// Parses "num/den" or an integer. Throws Error(Format) on malformed input.
Rational parse_rational(std::string_view text);
/// Parses a fraction, an integer or a plain decimal ("0.001") exactly.
/// Throws Error(Format) on malformed input.
Rational parse_decimal(std::string_view text);
double to_double(const Rational& r);

}  // namespace patlake
