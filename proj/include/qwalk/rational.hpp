#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <string_view>

namespace qwalk {

using Rational = boost::multiprecision::cpp_rational;

// Parses "p/q", an integer "k", or a decimal string such as "0.125" or "-1.5e-2"
// into an exact rational. Throws SchemaError on malformed input.
Rational parse_rational(std::string_view text);

// Canonical "p/q" form in lowest terms (denominator always printed).
std::string format_rational(const Rational& value);

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace qwalk
