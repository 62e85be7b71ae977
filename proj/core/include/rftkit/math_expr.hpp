#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rftkit/exact.hpp"

namespace rftkit {

enum class ExprKind {
  Integer,
  Rational,
  Decimal,
  Constant,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Sqrt,
  Abs,
  Tuple,
  FiniteSet,
  ChoiceLetter,
  OpaqueText,
};

enum class MathConstant { Pi, E };

/// Parsed answer expression. A plain value type: children live in `args`.
///
/// Integer and Rational keep their value in `value` (a Rational built through
/// the factory is already reduced with a positive denominator). Decimal keeps
/// the literal's digits and scale, e.g. "0.50" is digits 50, scale 2.
struct MathExpr {
  ExprKind kind = ExprKind::OpaqueText;
  BigRational value;
  BigInt digits;
  unsigned scale = 0;
  MathConstant constant = MathConstant::Pi;
  char letter = 0;
  std::string text;
  std::vector<MathExpr> args;

  static MathExpr integer(BigInt v);
  static MathExpr rational(BigInt num, BigInt den);
  static MathExpr rational(BigRational v);
  static MathExpr decimal(BigInt digits, unsigned scale);
  static MathExpr constant_of(MathConstant c);
  static MathExpr unary(ExprKind kind, MathExpr operand);
  static MathExpr binary(ExprKind kind, MathExpr lhs, MathExpr rhs);
  static MathExpr tuple(std::vector<MathExpr> items);
  static MathExpr finite_set(std::vector<MathExpr> items);
  static MathExpr choice(char letter);
  static MathExpr opaque(std::string normalized);

  bool is_number() const noexcept { return kind == ExprKind::Integer || kind == ExprKind::Rational; }

  friend bool operator==(const MathExpr& a, const MathExpr& b);
};

/// Canonical plain-text rendering, e.g. "1/2", "sqrt(2)", "(1, 2)", "{1, 2}".
/// Equal normalized expressions render identically; FiniteSet ordering uses it.
std::string to_text(const MathExpr& expr);

/// Folds every all-rational subtree exactly, turns decimals into rationals,
/// collapses perfect-power roots, and sorts/dedups sets. Idempotent.
/// Division by zero (or 0 to a negative power) anywhere yields
/// OpaqueText(to_text(expr)).
MathExpr normalize(const MathExpr& expr);

/// True when the tree holds no OpaqueText, ChoiceLetter, Tuple or FiniteSet and
/// can therefore be evaluated as a real number.
bool is_scalar(const MathExpr& expr) noexcept;

/// Decimal rendering of a scalar at 64 significant digits; nullopt when the
/// value is undefined or not real (negative square root, overflow, ...).
std::optional<std::string> evaluate_decimal(const MathExpr& expr);

/// Compares two scalars numerically at 64 digits with relative tolerance
/// `rel_tol`. nullopt when either side cannot be evaluated.
std::optional<bool> numerically_equal(const MathExpr& a, const MathExpr& b, double rel_tol = 1e-9);

}  // namespace rftkit
