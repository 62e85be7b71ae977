#include "rftkit/exact.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

namespace rftkit {

namespace {

BigInt pow10(int n) {
  BigInt result = 1;
  for (int i = 0; i < n; ++i) result *= 10;
  return result;
}

}  // namespace

std::optional<BigRational> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  BigInt digits = 0;
  int scale = 0;
  bool seen_point = false;
  bool seen_digit = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (c >= '0' && c <= '9') {
      digits = digits * 10 + (c - '0');
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      return std::nullopt;
    }
  }
  if (!seen_digit) return std::nullopt;
  BigRational value(digits, pow10(scale));
  return negative ? BigRational(-value) : value;
}

BigRational from_double_shortest(double value) {
  char buf[512];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
  if (ec != std::errc{}) return BigRational(0);
  auto parsed = parse_decimal(std::string_view(buf, static_cast<std::size_t>(end - buf)));
  return parsed.value_or(BigRational(0));
}

BigRational round_half_away(const BigRational& value, int places) {
  const BigInt scale = pow10(places);
  const BigRational scaled = value * scale;
  BigInt num = boost::multiprecision::abs(numerator(scaled));
  const BigInt den = denominator(scaled);
  BigInt q = num / den;
  const BigInt r = num % den;
  if (2 * r >= den) ++q;
  if (value < 0) q = -q;
  return BigRational(q, scale);
}

std::string format_fixed(const BigRational& value, int places, bool explicit_sign) {
  const BigRational rounded = round_half_away(value, places);
  const BigInt scaled = numerator(BigRational(rounded * pow10(places)));
  const bool negative = scaled < 0;
  std::string digits = BigInt(boost::multiprecision::abs(scaled)).str();
  if (places > 0) {
    if (static_cast<int>(digits.size()) <= places) {
      digits.insert(0, static_cast<std::size_t>(places + 1 - static_cast<int>(digits.size())), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  if (negative) return "-" + digits;
  return explicit_sign ? "+" + digits : digits;
}

double to_double(const BigRational& value) {
  return value.convert_to<double>();
}

}  // namespace rftkit
