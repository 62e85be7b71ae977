#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace rftkit {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Parses a plain decimal literal ("-12", "0.50", ".5", "3.") into an exact
/// rational. Returns nullopt for anything else (exponents, separators, junk).
std::optional<BigRational> parse_decimal(std::string_view text);

/// Exact rational for a double, via its shortest round-trip decimal spelling.
/// 13.33 becomes 1333/100, not the binary neighbour of 13.33.
BigRational from_double_shortest(double value);

/// Rounds half away from zero to `places` decimals and renders as fixed-point.
/// With `explicit_sign`, non-negative results get a leading '+'; a value that
/// rounds to zero always renders unsigned-as-positive ("+0.00" / "0.00").
std::string format_fixed(const BigRational& value, int places, bool explicit_sign = false);

/// The value `format_fixed` would print, as an exact rational.
BigRational round_half_away(const BigRational& value, int places);

double to_double(const BigRational& value);

}  // namespace rftkit
