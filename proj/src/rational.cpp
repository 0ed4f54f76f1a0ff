#include "hypqg/rational.hpp"

#include <charconv>

#include "hypqg/error.hpp"

namespace hypqg {

namespace {

std::int64_t parse_int(std::string_view digits, std::string_view whole) {
  if (digits.empty()) {
    throw ConfigError("malformed rational \"" + std::string(whole) +
                      "\" (expected p/q)");
  }
  std::int64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    throw ConfigError("malformed rational \"" + std::string(whole) +
                      "\" (expected p/q)");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  // from_chars would accept a second sign; only digits are allowed here.
  for (char c : body) {
    if (c != '/' && (c < '0' || c > '9')) {
      throw ConfigError("malformed rational \"" + std::string(text) +
                        "\" (expected p/q)");
    }
  }
  const auto slash = body.find('/');
  std::int64_t num = 0;
  std::int64_t den = 1;
  if (slash == std::string_view::npos) {
    num = parse_int(body, text);
  } else {
    num = parse_int(body.substr(0, slash), text);
    den = parse_int(body.substr(slash + 1), text);
    if (den == 0) {
      throw ConfigError("rational \"" + std::string(text) +
                        "\" has zero denominator");
    }
  }
  return Rational(negative ? -num : num, den);
}

std::string to_string(const Rational& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

std::int64_t floor_plus_one(const Rational& r) {
  // boost::rational keeps the denominator positive.
  std::int64_t q = r.numerator() / r.denominator();
  if (r.numerator() % r.denominator() != 0 && r.numerator() < 0) --q;
  return q + 1;
}

}  // namespace hypqg
