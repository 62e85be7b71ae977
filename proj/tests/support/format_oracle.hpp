#pragma once

// Reference model of the tag-layout rule, written as a token automaton that
// is independent of the scanner under test, plus a document fuzzer.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace rftkit::testing {

struct TagCounts {
  int pairs = 0;
  bool stray = false;  // a close outside any pair, or an open never closed
  std::vector<std::pair<std::size_t, std::size_t>> spans;  // [open, close_end)
};

/// Walks the text once per tag name: outside, an open starts a pair and a
/// close is stray; inside, opens are swallowed and the first close ends it.
inline TagCounts reference_pairs(std::string_view text, std::string_view name) {
  const std::string open = "<" + std::string(name) + ">";
  const std::string close = "</" + std::string(name) + ">";
  TagCounts c;
  bool inside = false;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size();) {
    if (text.compare(i, open.size(), open) == 0) {
      if (!inside) {
        inside = true;
        start = i;
      }
      i += open.size();
    } else if (text.compare(i, close.size(), close) == 0) {
      if (inside) {
        ++c.pairs;
        c.spans.emplace_back(start, i + close.size());
        inside = false;
      } else {
        c.stray = true;
      }
      i += close.size();
    } else {
      ++i;
    }
  }
  if (inside) c.stray = true;
  return c;
}

inline bool reference_passes(std::string_view text, std::string_view tag) {
  const TagCounts b = reference_pairs(text, tag);
  const TagCounts a = reference_pairs(text, "answer");
  if (b.pairs != 1 || a.pairs != 1 || b.stray || a.stray) return false;
  return b.spans[0].second <= a.spans[0].first;
}

class FormatDocGen {
 public:
  explicit FormatDocGen(std::uint64_t seed) : rng_(seed) {}

  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  std::string plain(int max_len) {
    static constexpr std::string_view alphabet = "abcxyz 0123456789.,=+\\{}\n";
    std::string s;
    const int n = pick(0, max_len);
    for (int i = 0; i < n; ++i) s += alphabet[static_cast<std::size_t>(pick(0, alphabet.size() - 1))];
    return s;
  }

  /// Random soup of tag literals, near-miss markup and text.
  std::string soup(std::string_view tag) {
    const std::string t(tag);
    const std::vector<std::string> tokens = {
        "<" + t + ">", "</" + t + ">", "<answer>", "</answer>", "<" + t + " x=1>", "<ANSWER>",
        "< " + t + ">", "<plan>", "</code>", "<", ">", "</", "\\boxed{4}"};
    std::string s;
    const int n = pick(0, 12);
    for (int i = 0; i < n; ++i) {
      if (pick(0, 2) == 0) {
        s += plain(6);
      } else {
        s += tokens[static_cast<std::size_t>(pick(0, static_cast<int>(tokens.size()) - 1))];
      }
    }
    return s;
  }

  /// A document built to pass: text, one behavior pair, text, one answer
  /// pair, text. Inner content never contains either tag literal.
  std::string well_formed(std::string_view tag) {
    const std::string t(tag);
    return plain(8) + "<" + t + ">" + plain(20) + "</" + t + ">" + plain(8) + "<answer>" + plain(10) + "\\boxed{" +
           std::to_string(pick(0, 99)) + "}</answer>" + plain(8);
  }

  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

/// Positions where plain text can be inserted without touching a `<...>`
/// token: not between a '<' and the next '>'.
inline std::vector<std::size_t> safe_insert_points(std::string_view text) {
  std::vector<std::size_t> out;
  bool in_token = false;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (!in_token) out.push_back(i);
    if (i == text.size()) break;
    if (text[i] == '<') in_token = true;
    if (text[i] == '>') in_token = false;
  }
  return out;
}

}  // namespace rftkit::testing
