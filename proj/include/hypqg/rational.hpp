#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace hypqg {

using Rational = boost::rational<std::int64_t>;

// Parses "p/q" or "p" (optional leading '-'). Anything else, including
// decimal notation, throws ConfigError.
Rational parse_rational(std::string_view text);

// Always "p/q", even for integers, so reports are uniform.
std::string to_string(const Rational& r);

// Smallest integer strictly greater than r.
std::int64_t floor_plus_one(const Rational& r);

}  // namespace hypqg
