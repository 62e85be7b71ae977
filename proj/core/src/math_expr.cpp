#include "rftkit/math_expr.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

namespace rftkit {

namespace {

namespace mp = boost::multiprecision;
using Dec = mp::number<mp::cpp_dec_float<64>>;

// Exponents beyond this stay symbolic instead of being expanded exactly.
constexpr long kMaxExactExponent = 4096;
constexpr std::size_t kMaxExactBits = 1u << 16;

struct DivisionByZero {};

BigInt pow10(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 0; i < n; ++i) r *= 10;
  return r;
}

MathExpr number(const BigRational& v) {
  if (denominator(v) == 1) return MathExpr::integer(numerator(v));
  return MathExpr::rational(v);
}

std::size_t bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return mp::msb(mp::abs(v)) + 1;
}

// Exact non-negative integer k-th root, if there is one.
std::optional<BigInt> exact_root(const BigInt& n, unsigned k) {
  if (n < 0) return std::nullopt;
  if (n < 2 || k == 1) return n;
  // Binary search over [0, 2^(bits/k + 1)].
  BigInt lo = 0;
  BigInt hi = BigInt(1) << (bit_length(n) / k + 1);
  while (lo < hi) {
    BigInt mid = (lo + hi + 1) / 2;
    if (mp::pow(mid, k) <= n) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  if (mp::pow(lo, k) == n) return lo;
  return std::nullopt;
}

// Exact q-th root of a rational, honouring odd roots of negatives.
std::optional<BigRational> exact_rational_root(const BigRational& v, unsigned q) {
  if (q == 0 || q > 64) return std::nullopt;
  const bool negative = v < 0;
  if (negative && q % 2 == 0) return std::nullopt;
  auto num = exact_root(mp::abs(numerator(v)), q);
  auto den = exact_root(denominator(v), q);
  if (!num || !den) return std::nullopt;
  BigRational r(*num, *den);
  return negative ? BigRational(-r) : r;
}

std::optional<BigRational> exact_integer_power(const BigRational& base, const BigInt& exponent) {
  if (mp::abs(exponent) > kMaxExactExponent) return std::nullopt;
  const long e = exponent.convert_to<long>();
  if (base == 0) {
    if (e < 0) throw DivisionByZero{};
    return e == 0 ? BigRational(1) : BigRational(0);
  }
  const auto magnitude = static_cast<unsigned>(e < 0 ? -e : e);
  const std::size_t bits = std::max(bit_length(numerator(base)), bit_length(denominator(base)));
  if (bits * magnitude > kMaxExactBits) return std::nullopt;
  BigRational r(mp::pow(numerator(base), magnitude), mp::pow(denominator(base), magnitude));
  if (e < 0) r = 1 / r;
  return r;
}

std::optional<BigRational> fold_pow(const BigRational& base, const BigRational& exponent) {
  if (denominator(exponent) == 1) return exact_integer_power(base, numerator(exponent));
  const BigInt& q = denominator(exponent);
  if (q > 64) return std::nullopt;
  if (base == 0) {
    if (exponent < 0) throw DivisionByZero{};
    return BigRational(0);
  }
  auto root = exact_rational_root(base, q.convert_to<unsigned>());
  if (!root) return std::nullopt;
  return exact_integer_power(*root, numerator(exponent));
}

bool atomic(const MathExpr& e) {
  switch (e.kind) {
    case ExprKind::Integer: return e.value >= 0;
    case ExprKind::Decimal: return e.digits >= 0;
    case ExprKind::Constant:
    case ExprKind::Sqrt:
    case ExprKind::Abs:
    case ExprKind::Tuple:
    case ExprKind::FiniteSet:
    case ExprKind::ChoiceLetter:
    case ExprKind::OpaqueText: return true;
    default: return false;
  }
}

std::string wrapped(const MathExpr& e) {
  std::string t = to_text(e);
  return atomic(e) ? t : "(" + t + ")";
}

std::string join(const std::vector<MathExpr>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += to_text(items[i]);
  }
  return out;
}

// Numbers first by value, everything else by canonical text.
bool canonical_less(const MathExpr& a, const MathExpr& b) {
  if (a.is_number() != b.is_number()) return a.is_number();
  if (a.is_number()) return a.value < b.value;
  return to_text(a) < to_text(b);
}

MathExpr normalize_impl(const MathExpr& e) {
  switch (e.kind) {
    case ExprKind::Integer:
    case ExprKind::Rational: return number(e.value);
    case ExprKind::Decimal: return number(BigRational(e.digits, pow10(e.scale)));
    case ExprKind::Constant:
    case ExprKind::ChoiceLetter:
    case ExprKind::OpaqueText: return e;
    case ExprKind::Neg: {
      MathExpr inner = normalize_impl(e.args[0]);
      if (inner.is_number()) return number(-inner.value);
      if (inner.kind == ExprKind::Neg) return inner.args[0];
      return MathExpr::unary(ExprKind::Neg, std::move(inner));
    }
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div: {
      MathExpr lhs = normalize_impl(e.args[0]);
      MathExpr rhs = normalize_impl(e.args[1]);
      if (lhs.is_number() && rhs.is_number()) {
        switch (e.kind) {
          case ExprKind::Add: return number(lhs.value + rhs.value);
          case ExprKind::Sub: return number(lhs.value - rhs.value);
          case ExprKind::Mul: return number(lhs.value * rhs.value);
          default:
            if (rhs.value == 0) throw DivisionByZero{};
            return number(lhs.value / rhs.value);
        }
      }
      if (e.kind == ExprKind::Div && rhs.is_number() && rhs.value == 0) throw DivisionByZero{};
      return MathExpr::binary(e.kind, std::move(lhs), std::move(rhs));
    }
    case ExprKind::Pow: {
      MathExpr base = normalize_impl(e.args[0]);
      MathExpr exponent = normalize_impl(e.args[1]);
      if (base.is_number() && exponent.is_number()) {
        if (auto folded = fold_pow(base.value, exponent.value)) return number(*folded);
      }
      return MathExpr::binary(ExprKind::Pow, std::move(base), std::move(exponent));
    }
    case ExprKind::Sqrt: {
      MathExpr inner = normalize_impl(e.args[0]);
      if (inner.is_number()) {
        if (auto root = exact_rational_root(inner.value, 2)) return number(*root);
      }
      return MathExpr::unary(ExprKind::Sqrt, std::move(inner));
    }
    case ExprKind::Abs: {
      MathExpr inner = normalize_impl(e.args[0]);
      if (inner.is_number()) return number(mp::abs(inner.value));
      if (inner.kind == ExprKind::Abs) return inner;
      return MathExpr::unary(ExprKind::Abs, std::move(inner));
    }
    case ExprKind::Tuple: {
      std::vector<MathExpr> items;
      items.reserve(e.args.size());
      for (const auto& a : e.args) items.push_back(normalize_impl(a));
      return MathExpr::tuple(std::move(items));
    }
    case ExprKind::FiniteSet: {
      std::vector<MathExpr> items;
      items.reserve(e.args.size());
      for (const auto& a : e.args) items.push_back(normalize_impl(a));
      std::stable_sort(items.begin(), items.end(), canonical_less);
      items.erase(std::unique(items.begin(), items.end()), items.end());
      return MathExpr::finite_set(std::move(items));
    }
  }
  return e;
}

std::optional<Dec> eval(const MathExpr& e) {
  switch (e.kind) {
    case ExprKind::Integer:
    case ExprKind::Rational:
      return Dec(numerator(e.value)) / Dec(denominator(e.value));
    case ExprKind::Decimal: return Dec(e.digits) / Dec(pow10(e.scale));
    case ExprKind::Constant:
      return e.constant == MathConstant::Pi ? boost::math::constants::pi<Dec>() : mp::exp(Dec(1));
    case ExprKind::Neg: {
      auto v = eval(e.args[0]);
      if (!v) return std::nullopt;
      return Dec(-*v);
    }
    case ExprKind::Add:
    case ExprKind::Sub:
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Pow: {
      auto a = eval(e.args[0]);
      auto b = eval(e.args[1]);
      if (!a || !b) return std::nullopt;
      Dec r;
      switch (e.kind) {
        case ExprKind::Add: r = *a + *b; break;
        case ExprKind::Sub: r = *a - *b; break;
        case ExprKind::Mul: r = *a * *b; break;
        case ExprKind::Div:
          if (*b == 0) return std::nullopt;
          r = *a / *b;
          break;
        default:
          if (*a == 0 && *b < 0) return std::nullopt;
          if (*a < 0 && mp::floor(*b) != *b) return std::nullopt;
          r = mp::pow(*a, *b);
          break;
      }
      if (!mp::isfinite(r)) return std::nullopt;
      return r;
    }
    case ExprKind::Sqrt: {
      auto v = eval(e.args[0]);
      if (!v || *v < 0) return std::nullopt;
      return Dec(mp::sqrt(*v));
    }
    case ExprKind::Abs: {
      auto v = eval(e.args[0]);
      if (!v) return std::nullopt;
      return Dec(mp::abs(*v));
    }
    default: return std::nullopt;
  }
}

}  // namespace

MathExpr MathExpr::integer(BigInt v) {
  MathExpr e;
  e.kind = ExprKind::Integer;
  e.value = BigRational(std::move(v));
  return e;
}

MathExpr MathExpr::rational(BigInt num, BigInt den) {
  // boost's rational rejects a negative denominator outright
  if (den < 0) {
    num = -num;
    den = -den;
  }
  return rational(BigRational(std::move(num), std::move(den)));
}

MathExpr MathExpr::rational(BigRational v) {
  MathExpr e;
  e.kind = ExprKind::Rational;
  e.value = std::move(v);
  return e;
}

MathExpr MathExpr::decimal(BigInt digits, unsigned scale) {
  MathExpr e;
  e.kind = ExprKind::Decimal;
  e.digits = std::move(digits);
  e.scale = scale;
  return e;
}

MathExpr MathExpr::constant_of(MathConstant c) {
  MathExpr e;
  e.kind = ExprKind::Constant;
  e.constant = c;
  return e;
}

MathExpr MathExpr::unary(ExprKind kind, MathExpr operand) {
  MathExpr e;
  e.kind = kind;
  e.args.push_back(std::move(operand));
  return e;
}

MathExpr MathExpr::binary(ExprKind kind, MathExpr lhs, MathExpr rhs) {
  MathExpr e;
  e.kind = kind;
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  return e;
}

MathExpr MathExpr::tuple(std::vector<MathExpr> items) {
  MathExpr e;
  e.kind = ExprKind::Tuple;
  e.args = std::move(items);
  return e;
}

MathExpr MathExpr::finite_set(std::vector<MathExpr> items) {
  MathExpr e;
  e.kind = ExprKind::FiniteSet;
  e.args = std::move(items);
  return e;
}

MathExpr MathExpr::choice(char letter) {
  MathExpr e;
  e.kind = ExprKind::ChoiceLetter;
  e.letter = static_cast<char>(letter >= 'a' && letter <= 'z' ? letter - 'a' + 'A' : letter);
  return e;
}

MathExpr MathExpr::opaque(std::string normalized) {
  MathExpr e;
  e.kind = ExprKind::OpaqueText;
  e.text = std::move(normalized);
  return e;
}

bool operator==(const MathExpr& a, const MathExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Integer:
    case ExprKind::Rational: return a.value == b.value;
    case ExprKind::Decimal: return a.digits == b.digits && a.scale == b.scale;
    case ExprKind::Constant: return a.constant == b.constant;
    case ExprKind::ChoiceLetter: return a.letter == b.letter;
    case ExprKind::OpaqueText: return a.text == b.text;
    default: return a.args == b.args;
  }
}

std::string to_text(const MathExpr& e) {
  switch (e.kind) {
    case ExprKind::Integer: return numerator(e.value).str();
    case ExprKind::Rational: return numerator(e.value).str() + "/" + denominator(e.value).str();
    case ExprKind::Decimal: {
      std::string digits = BigInt(mp::abs(e.digits)).str();
      if (e.scale > 0) {
        if (digits.size() <= e.scale) digits.insert(0, e.scale + 1 - digits.size(), '0');
        digits.insert(digits.size() - e.scale, ".");
      }
      return e.digits < 0 ? "-" + digits : digits;
    }
    case ExprKind::Constant: return e.constant == MathConstant::Pi ? "pi" : "e";
    case ExprKind::Neg: return "-" + wrapped(e.args[0]);
    case ExprKind::Add: return wrapped(e.args[0]) + "+" + wrapped(e.args[1]);
    case ExprKind::Sub: return wrapped(e.args[0]) + "-" + wrapped(e.args[1]);
    case ExprKind::Mul: return wrapped(e.args[0]) + "*" + wrapped(e.args[1]);
    case ExprKind::Div: return wrapped(e.args[0]) + "/" + wrapped(e.args[1]);
    case ExprKind::Pow: return wrapped(e.args[0]) + "^" + wrapped(e.args[1]);
    case ExprKind::Sqrt: return "sqrt(" + to_text(e.args[0]) + ")";
    case ExprKind::Abs: return "|" + to_text(e.args[0]) + "|";
    case ExprKind::Tuple: return "(" + join(e.args) + ")";
    case ExprKind::FiniteSet: return "{" + join(e.args) + "}";
    case ExprKind::ChoiceLetter: return std::string(1, e.letter);
    case ExprKind::OpaqueText: return e.text;
  }
  return e.text;
}

MathExpr normalize(const MathExpr& expr) {
  try {
    return normalize_impl(expr);
  } catch (const DivisionByZero&) {
    return MathExpr::opaque(to_text(expr));
  }
}

bool is_scalar(const MathExpr& e) noexcept {
  switch (e.kind) {
    case ExprKind::Tuple:
    case ExprKind::FiniteSet:
    case ExprKind::ChoiceLetter:
    case ExprKind::OpaqueText: return false;
    default:
      return std::all_of(e.args.begin(), e.args.end(), [](const MathExpr& a) { return is_scalar(a); });
  }
}

std::optional<std::string> evaluate_decimal(const MathExpr& expr) {
  if (!is_scalar(expr)) return std::nullopt;
  auto v = eval(expr);
  if (!v) return std::nullopt;
  return v->str(64, std::ios_base::scientific);
}

std::optional<bool> numerically_equal(const MathExpr& a, const MathExpr& b, double rel_tol) {
  if (!is_scalar(a) || !is_scalar(b)) return std::nullopt;
  auto x = eval(a);
  auto y = eval(b);
  if (!x || !y) return std::nullopt;
  const Dec scale = mp::max(mp::abs(*x), mp::abs(*y));
  if (scale == 0) return true;
  return mp::abs(*x - *y) <= Dec(rel_tol) * scale;
}

}  // namespace rftkit
