#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace cpcause {

// every probability in the system is an exact rational; no floating point
// enters any computation, doubles appear only in display helpers
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// accepts "1", "0.7", ".25", "7/10"; nullopt on anything else or negatives
std::optional<Rational> parse_rational(const std::string& text);

// canonical "n/d" (just "n" when d == 1)
std::string rational_string(const Rational& r);

// decimal when the reduced denominator is 2^a 5^b (exact), else "n/d"
std::string pretty_rational(const Rational& r);

// rounded decimal with a fixed number of significant digits, display only
std::string decimal_string(const Rational& r, int significant = 6);

Rational pow_rational(const Rational& base, unsigned exp);

} // namespace cpcause
