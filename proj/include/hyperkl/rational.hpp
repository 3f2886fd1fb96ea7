#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace hyperkl {

using BigInt = boost::multiprecision::cpp_int;

/// Arbitrary-precision rational scalar used for all exact computations.
using Rat = boost::multiprecision::cpp_rational;

inline double to_double(const Rat& r) { return r.convert_to<double>(); }

/// Formats as "num/den" (den always present, e.g. "3/8", "2/1", "-1/4").
std::string rat_to_string(const Rat& r);

/// Parses "num/den" or a bare integer string. Throws std::invalid_argument on
/// malformed input or zero denominator.
Rat parse_rational(const std::string& text);

/// base^e for integer base, e may be negative.
Rat rat_pow(long long base, long long e);

/// p-adic valuation v_p(r) for r != 0; requires p >= 2.
long long padic_valuation(const Rat& r, long long p);

}  // namespace hyperkl
