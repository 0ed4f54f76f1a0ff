#pragma once

// Independent brute-force oracles used by the tests. Nothing here calls
// into the code paths the tests check, except for building words.

#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using Point = std::pair<std::int64_t, std::int64_t>;

// Z^2 with letters a,A,b,B.
inline std::vector<Point> z2_points(const std::string& w) {
  std::vector<Point> out{{0, 0}};
  for (char c : w) {
    auto [x, y] = out.back();
    switch (c) {
      case 'a': ++x; break;
      case 'A': --x; break;
      case 'b': ++y; break;
      case 'B': --y; break;
      default: std::abort();
    }
    out.emplace_back(x, y);
  }
  return out;
}

inline std::int64_t l1(const Point& p, const Point& q) {
  return std::llabs(p.first - q.first) + std::llabs(p.second - q.second);
}

// Brute force over all pairs for integer lambda and epsilon = 0; returns
// the first (j-major) violation.
inline std::optional<std::pair<std::size_t, std::size_t>> z2_violation(
    const std::string& w, std::int64_t lambda, std::size_t window) {
  const auto p = z2_points(w);
  for (std::size_t j = 1; j < p.size(); ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      if (j - i > window) continue;
      if (static_cast<std::int64_t>(j - i) > lambda * l1(p[i], p[j])) {
        return std::make_pair(i, j);
      }
    }
  }
  return std::nullopt;
}

inline std::size_t z2_max_locality(const std::string& w, std::int64_t lambda) {
  const auto p = z2_points(w);
  std::size_t best = w.size();
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (static_cast<std::int64_t>(j - i) > lambda * l1(p[i], p[j])) {
        best = std::min(best, j - i - 1);
      }
    }
  }
  return best;
}

// Free reduction over a,A,b,B,... (lowercase/uppercase pairs).
inline std::string free_reduce(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && out.back() != c &&
        std::tolower(out.back()) == std::tolower(c)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

inline std::string random_word(std::mt19937_64& rng, const std::string& symbols,
                               std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, symbols.size() - 1);
  std::string out;
  const auto n = len(rng);
  for (std::size_t k = 0; k < n; ++k) out.push_back(symbols[pick(rng)]);
  return out;
}

// All words over `symbols` of length exactly n, lexicographic in symbol order.
inline std::vector<std::string> all_words(const std::string& symbols,
                                          std::size_t n) {
  std::vector<std::string> out{""};
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::string> next;
    for (const auto& w : out) {
      for (char c : symbols) next.push_back(w + c);
    }
    out = std::move(next);
  }
  return out;
}

// Lexicographic order on words, by position of each symbol in `symbols`.
inline bool lex_less(const std::string& symbols, const std::string& a,
                     const std::string& b) {
  for (std::size_t k = 0; k < a.size() && k < b.size(); ++k) {
    if (a[k] != b[k]) return symbols.find(a[k]) < symbols.find(b[k]);
  }
  return a.size() < b.size();
}

}  // namespace oracle
