#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rftkit/answer_engine.hpp"
#include "rftkit/exact.hpp"

namespace rftkit {

namespace {

struct ParseFailure {};

// ---------------------------------------------------------------------------
// Text clean-up shared by the parser and the string comparison.

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Reads `\name` starting at text[at] == '\\'. Returns the name (letters only,
// or the single non-letter character for control symbols such as `\{`).
std::string_view command_at(std::string_view text, std::size_t at) {
  std::size_t end = at + 1;
  if (end >= text.size()) return {};
  if (!is_alpha(text[end])) return text.substr(end, 1);
  while (end < text.size() && is_alpha(text[end])) ++end;
  return text.substr(at + 1, end - at - 1);
}

// Index just past the brace group opening at text[open] == '{', or npos.
std::size_t skip_group(std::string_view text, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size()) {
      ++i;
      continue;
    }
    if (text[i] == '{') ++depth;
    if (text[i] == '}' && --depth == 0) return i + 1;
  }
  return std::string_view::npos;
}

bool is_text_wrapper(std::string_view name) {
  return name == "text" || name == "textbf" || name == "textit" || name == "textrm" || name == "mathrm" ||
         name == "mathbf" || name == "mathit" || name == "mbox" || name == "textnormal" ||
         name == "boldsymbol";
}

bool is_dropped_command(std::string_view name) {
  return name == "left" || name == "right" || name == "displaystyle" || name == "," || name == ";" ||
         name == ":" || name == "!" || name == " " || name == "quad" || name == "qquad" ||
         name == "bigl" || name == "bigr" || name == "Bigl" || name == "Bigr" || name == "big" ||
         name == "Big";
}

// Strips markup that never changes an answer's value.
std::string clean(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size();) {
    const char c = raw[i];
    if (c == '$') {
      ++i;
      continue;
    }
    if (c == '~') {
      out += ' ';
      ++i;
      continue;
    }
    if (c == '\\') {
      const std::string_view name = command_at(raw, i);
      const std::size_t after = i + 1 + name.size();
      if (name.empty()) {
        ++i;
        continue;
      }
      if (is_dropped_command(name)) {
        i = after;
        continue;
      }
      if (name == "dfrac" || name == "tfrac") {
        out += "\\frac";
        i = after;
        continue;
      }
      if (name == "lvert" || name == "rvert" || name == "vert" || name == "mid") {
        out += '|';
        i = after;
        continue;
      }
      if (name == "lbrace" || name == "rbrace") {
        out += name == "lbrace" ? "\\{" : "\\}";
        i = after;
        continue;
      }
      if (name == "circ" || name == "degree") {
        i = after;
        continue;
      }
      if (is_text_wrapper(name) || name == "operatorname") {
        std::size_t j = after;
        while (j < raw.size() && is_space(raw[j])) ++j;
        if (j < raw.size() && raw[j] == '{') {
          const std::size_t end = skip_group(raw, j);
          if (end != std::string_view::npos) {
            out += clean(raw.substr(j + 1, end - j - 2));
            i = end;
            continue;
          }
        }
        i = after;
        continue;
      }
      out.append(raw.substr(i, after - i));
      i = after;
      continue;
    }
    out += c;
    ++i;
  }
  // `^{}` left behind by a removed `^{\circ}`.
  for (std::size_t pos; (pos = out.find("^{}")) != std::string::npos;) out.erase(pos, 3);
  if (!out.empty() && out.back() == '^') out.pop_back();
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string strip_trailing_punctuation(std::string s) {
  while (!s.empty()) {
    const char c = s.back();
    if (c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || is_space(c)) {
      s.pop_back();
    } else {
      break;
    }
  }
  return s;
}

// "x = 5" -> "5" for a single-letter left-hand side.
std::string strip_assignment(const std::string& s) {
  std::size_t i = 0;
  while (i < s.size() && is_space(s[i])) ++i;
  if (i >= s.size() || !is_alpha(s[i])) return s;
  std::size_t j = i + 1;
  while (j < s.size() && is_space(s[j])) ++j;
  if (j >= s.size() || s[j] != '=') return s;
  const std::string rhs = s.substr(j + 1);
  if (rhs.find('=') != std::string::npos) return s;
  return rhs;
}

// ---------------------------------------------------------------------------
// Tokens.

enum class Tok { Number, Command, Symbol, Letter, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> tokens;
  for (std::size_t i = 0; i < s.size();) {
    const char c = s[i];
    if (is_space(c)) {
      ++i;
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < s.size() && is_digit(s[i + 1]))) {
      std::size_t j = i;
      while (j < s.size() && is_digit(s[j])) ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && is_digit(s[j])) ++j;
      }
      // Scientific notation: 1.5e-3, 2E10.
      if (j + 1 < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && is_digit(s[k])) {
          while (k < s.size() && is_digit(s[k])) ++k;
          j = k;
        }
      }
      tokens.push_back({Tok::Number, std::string(s.substr(i, j - i))});
      i = j;
      continue;
    }
    if (c == '\\') {
      const std::string_view name = command_at(s, i);
      if (name.empty()) throw ParseFailure{};
      if (name == "{" || name == "}" || name == "%" || name == "|") {
        tokens.push_back({Tok::Symbol, "\\" + std::string(name)});
      } else {
        tokens.push_back({Tok::Command, std::string(name)});
      }
      i += 1 + name.size();
      continue;
    }
    if (is_alpha(c)) {
      tokens.push_back({Tok::Letter, std::string(1, c)});
      ++i;
      continue;
    }
    tokens.push_back({Tok::Symbol, std::string(1, c)});
    ++i;
  }
  tokens.push_back({Tok::End, ""});
  return tokens;
}

MathExpr number_from(const std::string& text) {
  const auto e_pos = text.find_first_of("eE");
  std::string mantissa = text.substr(0, e_pos);
  auto value = parse_decimal(mantissa);
  if (!value) throw ParseFailure{};
  if (e_pos != std::string::npos) {
    const long exp = std::stol(text.substr(e_pos + 1));
    if (exp > 1000 || exp < -1000) throw ParseFailure{};
    BigRational scale = 1;
    for (long k = 0; k < (exp < 0 ? -exp : exp); ++k) scale *= 10;
    return MathExpr::rational(exp < 0 ? BigRational(*value / scale) : BigRational(*value * scale));
  }
  const auto dot = mantissa.find('.');
  if (dot == std::string::npos) return MathExpr::integer(numerator(*value));
  const unsigned scale = static_cast<unsigned>(mantissa.size() - dot - 1);
  // not BigInt(string): a leading zero would make it octal
  BigRational shifted = *value;
  for (unsigned k = 0; k < scale; ++k) shifted *= 10;
  return MathExpr::decimal(numerator(shifted), scale);
}

// ---------------------------------------------------------------------------
// Recursive-descent parser over the token stream.

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  MathExpr parse_top() {
    std::vector<MathExpr> items = parse_list();
    expect_end();
    if (items.size() == 1) return std::move(items.front());
    return MathExpr::finite_set(std::move(items));
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  Token take() { return tokens_[pos_++]; }

  bool at_symbol(std::string_view s) const { return peek().type == Tok::Symbol && peek().text == s; }
  bool at_command(std::string_view s) const { return peek().type == Tok::Command && peek().text == s; }

  void expect_symbol(std::string_view s) {
    if (!at_symbol(s)) throw ParseFailure{};
    ++pos_;
  }

  void expect_end() {
    if (peek().type != Tok::End) throw ParseFailure{};
  }

  std::vector<MathExpr> parse_list() {
    std::vector<MathExpr> items;
    items.push_back(parse_expr());
    while (at_symbol(",")) {
      ++pos_;
      items.push_back(parse_expr());
    }
    return items;
  }

  MathExpr parse_expr() {
    MathExpr lhs = parse_term();
    while (at_symbol("+") || at_symbol("-")) {
      const bool plus = take().text == "+";
      MathExpr rhs = parse_term();
      lhs = MathExpr::binary(plus ? ExprKind::Add : ExprKind::Sub, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  bool starts_implicit_factor() const {
    const Token& t = peek();
    switch (t.type) {
      case Tok::Number: return true;
      case Tok::Letter: return t.text == "e";
      case Tok::Command: return t.text == "frac" || t.text == "sqrt" || t.text == "pi";
      case Tok::Symbol: return t.text == "(" || t.text == "{";
      case Tok::End: return false;
    }
    return false;
  }

  MathExpr parse_term() {
    MathExpr lhs = parse_unary();
    while (true) {
      ExprKind op;
      if (at_symbol("*") || at_command("cdot") || at_command("times")) {
        ++pos_;
        op = ExprKind::Mul;
      } else if (at_symbol("/") || at_command("div")) {
        ++pos_;
        op = ExprKind::Div;
      } else if (starts_implicit_factor()) {
        op = ExprKind::Mul;
      } else {
        break;
      }
      MathExpr rhs = parse_unary();
      lhs = MathExpr::binary(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  MathExpr parse_unary() {
    if (at_symbol("-")) {
      ++pos_;
      return MathExpr::unary(ExprKind::Neg, parse_unary());
    }
    if (at_symbol("+")) {
      ++pos_;
      return parse_unary();
    }
    return parse_power();
  }

  MathExpr parse_power() {
    MathExpr base = parse_postfix();
    if (!at_symbol("^")) return base;
    ++pos_;
    MathExpr exponent = parse_exponent();
    return MathExpr::binary(ExprKind::Pow, std::move(base), std::move(exponent));
  }

  MathExpr parse_exponent() {
    if (at_symbol("{")) {
      ++pos_;
      MathExpr e = parse_expr();
      expect_symbol("}");
      return e;
    }
    if (at_symbol("-")) {
      ++pos_;
      return MathExpr::unary(ExprKind::Neg, parse_exponent());
    }
    return parse_power();
  }

  MathExpr parse_postfix() {
    MathExpr e = parse_primary();
    while (at_symbol("%") || at_symbol("\\%")) {
      ++pos_;
      e = MathExpr::binary(ExprKind::Div, std::move(e), MathExpr::integer(100));
    }
    return e;
  }

  // Argument of \frac / \sqrt: a brace group or a single character token.
  MathExpr parse_argument() {
    if (at_symbol("{")) {
      ++pos_;
      MathExpr e = parse_expr();
      expect_symbol("}");
      return e;
    }
    Token& t = tokens_[pos_];
    if (t.type == Tok::Number) {
      // `\frac12` takes one digit per argument.
      const std::string first = t.text.substr(0, 1);
      if (t.text.size() > 1 && is_digit(t.text[1])) {
        t.text.erase(0, 1);
      } else if (t.text.size() == 1) {
        ++pos_;
      } else {
        throw ParseFailure{};
      }
      return MathExpr::integer(BigInt(first));
    }
    if (t.type == Tok::Command && t.text == "pi") {
      ++pos_;
      return MathExpr::constant_of(MathConstant::Pi);
    }
    if (t.type == Tok::Letter && t.text == "e") {
      ++pos_;
      return MathExpr::constant_of(MathConstant::E);
    }
    throw ParseFailure{};
  }

  MathExpr parse_primary() {
    Token t = take();
    switch (t.type) {
      case Tok::Number: return number_from(t.text);
      case Tok::Letter:
        if (t.text == "e") return MathExpr::constant_of(MathConstant::E);
        throw ParseFailure{};
      case Tok::Command:
        if (t.text == "pi") return MathExpr::constant_of(MathConstant::Pi);
        if (t.text == "frac") {
          MathExpr num = parse_argument();
          MathExpr den = parse_argument();
          return MathExpr::binary(ExprKind::Div, std::move(num), std::move(den));
        }
        if (t.text == "sqrt") {
          if (at_symbol("[")) {
            ++pos_;
            MathExpr index = parse_expr();
            expect_symbol("]");
            MathExpr radicand = parse_argument();
            return MathExpr::binary(ExprKind::Pow, std::move(radicand),
                                    MathExpr::binary(ExprKind::Div, MathExpr::integer(1), std::move(index)));
          }
          return MathExpr::unary(ExprKind::Sqrt, parse_argument());
        }
        if (t.text == "emptyset" || t.text == "varnothing") return MathExpr::finite_set({});
        throw ParseFailure{};
      case Tok::Symbol:
        if (t.text == "(") {
          std::vector<MathExpr> items = parse_list();
          expect_symbol(")");
          if (items.size() == 1) return std::move(items.front());
          return MathExpr::tuple(std::move(items));
        }
        if (t.text == "{") {
          MathExpr e = parse_expr();
          expect_symbol("}");
          return e;
        }
        if (t.text == "\\{") {
          if (at_symbol("\\}")) {
            ++pos_;
            return MathExpr::finite_set({});
          }
          std::vector<MathExpr> items = parse_list();
          expect_symbol("\\}");
          return MathExpr::finite_set(std::move(items));
        }
        if (t.text == "|" || t.text == "\\|") {
          MathExpr inner = parse_expr();
          expect_symbol(t.text);
          return MathExpr::unary(ExprKind::Abs, std::move(inner));
        }
        throw ParseFailure{};
      case Tok::End: throw ParseFailure{};
    }
    throw ParseFailure{};
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::optional<char> as_choice(std::string_view s) {
  std::string t = trim(s);
  if (t.size() == 3 && t.front() == '(' && t.back() == ')') t = t.substr(1, 1);
  if (t.size() == 1) {
    const char c = t[0];
    if ((c >= 'A' && c <= 'E') || (c >= 'a' && c <= 'e')) return c;
  }
  return std::nullopt;
}

// "1,000,000" style grouping: digits in groups of three, no spaces.
bool is_grouped_integer(std::string_view s) {
  const auto first = s.find(',');
  if (first == std::string_view::npos || first == 0 || first > 3) return false;
  for (std::size_t i = 0; i < first; ++i) {
    if (!is_digit(s[i])) return false;
  }
  std::size_t i = first;
  while (i < s.size() && s[i] == ',') {
    for (std::size_t k = 1; k <= 3; ++k) {
      if (i + k >= s.size() || !is_digit(s[i + k])) return false;
    }
    i += 4;
  }
  if (i == s.size()) return true;
  if (s[i] != '.') return false;
  for (++i; i < s.size(); ++i) {
    if (!is_digit(s[i])) return false;
  }
  return true;
}

}  // namespace

std::string normalize_answer_string(std::string_view raw) {
  std::string cleaned = clean(raw);
  std::string out;
  out.reserve(cleaned.size());
  for (char c : cleaned) {
    if (is_space(c)) continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return strip_trailing_punctuation(std::move(out));
}

MathExpr parse_math(std::string_view raw) {
  std::string text = strip_trailing_punctuation(trim(strip_assignment(clean(raw))));
  if (auto letter = as_choice(text)) return MathExpr::choice(*letter);
  if (is_grouped_integer(text)) {
    std::string digits;
    for (char c : text) {
      if (c != ',') digits += c;
    }
    text = digits;
  }
  try {
    Parser parser(tokenize(text));
    return parser.parse_top();
  } catch (const ParseFailure&) {
  } catch (const std::exception&) {
  }
  return MathExpr::opaque(normalize_answer_string(raw));
}

}  // namespace rftkit
